#pragma once

// Preferential-attachment growth: a complete seed graph on m0 nodes, then
// each arriving node links to m_edges distinct existing nodes drawn with
// probability proportional to k^alpha. Weights are refreshed once per arriving
// node, after all of its edges are placed.

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace wcw {

struct GrowthConfig {
  int n_final = 1000;
  int m0 = 3;
  int m_edges = 2;
  double alpha = 1.0;
  std::uint64_t seed = 1;
  // Weight by (in-degree + 1)^alpha instead of undirected degree^alpha.
  bool directed = false;
};

void validate(const GrowthConfig& cfg);

struct Edge {
  int src = 0;
  int dst = 0;
};

struct GrowthResult {
  std::vector<std::int64_t> degrees;  // undirected degree per node
  std::vector<Edge> edges;            // seed edges first, then src = arriving node
};

// Snapshot handed to an observer right before an arriving node's targets are
// applied. `weights` are the attachment weights the targets were drawn with.
struct AttachmentEvent {
  int node = 0;
  std::span<const std::int64_t> degrees;  // first `node` entries are eligible
  std::span<const double> weights;
  double total_weight = 0.0;
  std::span<const int> targets;
};

using AttachmentObserver = std::function<void(const AttachmentEvent&)>;

GrowthResult grow(const GrowthConfig& cfg, const AttachmentObserver& observer = {});

struct DegreeDistribution {
  std::vector<std::int64_t> k;
  std::vector<double> p;
};

DegreeDistribution degree_distribution(std::span<const std::int64_t> degrees);

}  // namespace wcw
