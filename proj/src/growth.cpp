#include "wcw/growth.hpp"

#include "wcw/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace wcw {

void validate(const GrowthConfig& cfg) {
  const bool ok = cfg.m_edges >= 1 && cfg.m_edges <= cfg.m0 && cfg.m0 <= cfg.n_final;
  if (!ok) {
    throw Error(ErrorKind::Config, "growth config must satisfy 1 <= m_edges <= m0 <= n_final",
                {{"m_edges", static_cast<long long>(cfg.m_edges)},
                 {"m0", static_cast<long long>(cfg.m0)},
                 {"n_final", static_cast<long long>(cfg.n_final)}});
  }
  if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha)) {
    throw Error(ErrorKind::Config, "alpha must be finite and >= 0", {{"alpha", cfg.alpha}});
  }
}

namespace {

// Fenwick tree over attachment weights with prefix-sum sampling.
class WeightTree {
 public:
  explicit WeightTree(int size) : tree_(static_cast<std::size_t>(size) + 1, 0.0) {
    while ((top_ << 1) <= static_cast<std::size_t>(size)) top_ <<= 1;
  }

  void add(int i, double delta) {
    total_ += delta;
    for (auto k = static_cast<std::size_t>(i) + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
  }

  double total() const { return total_; }

  // Smallest index whose inclusive prefix sum exceeds u.
  int find(double u) const {
    std::size_t pos = 0;
    for (std::size_t step = top_; step > 0; step >>= 1) {
      if (pos + step < tree_.size() && tree_[pos + step] <= u) {
        pos += step;
        u -= tree_[pos];
      }
    }
    return static_cast<int>(pos);
  }

 private:
  std::vector<double> tree_;
  std::size_t top_ = 1;
  double total_ = 0.0;
};

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

}  // namespace

GrowthResult grow(const GrowthConfig& cfg, const AttachmentObserver& observer) {
  validate(cfg);
  const int n = cfg.n_final;
  std::mt19937_64 rng(cfg.seed);

  GrowthResult out;
  out.degrees.assign(n, 0);
  out.edges.reserve(static_cast<std::size_t>(cfg.m0) * (cfg.m0 - 1) / 2 +
                    static_cast<std::size_t>(cfg.m_edges) * (n - cfg.m0));
  std::vector<std::int64_t> in_degree(n, 0);

  for (int i = 0; i < cfg.m0; ++i) {
    for (int j = 0; j < i; ++j) out.edges.push_back({i, j});
    out.degrees[i] = cfg.m0 - 1;
    in_degree[i] = cfg.m0 - 1;
  }

  auto weight_of = [&](int i) {
    const double k = cfg.directed ? static_cast<double>(in_degree[i] + 1) : static_cast<double>(out.degrees[i]);
    return std::pow(k, cfg.alpha);
  };

  WeightTree tree(n);
  std::vector<double> weights(n, 0.0);
  for (int i = 0; i < cfg.m0; ++i) {
    weights[i] = weight_of(i);
    tree.add(i, weights[i]);
  }

  std::vector<int> targets;
  std::vector<char> taken(n, 0);
  for (int node = cfg.m0; node < n; ++node) {
    const double total = tree.total();
    targets.clear();
    for (int e = 0; e < cfg.m_edges; ++e) {
      int pick = -1;
      const double remaining = tree.total();
      if (remaining > 0.0) {
        const double u = std::min(uniform01(rng) * remaining, std::nextafter(remaining, 0.0));
        pick = std::min(tree.find(u), node - 1);
        // Rounding in the tree can land on an exhausted slot; walk to the next live one.
        for (int step = 0; step < node && (taken[pick] || weights[pick] <= 0.0); ++step) pick = (pick + 1) % node;
        if (taken[pick] || weights[pick] <= 0.0) pick = -1;
      }
      if (pick < 0) {
        // Every remaining weight is zero (e.g. degree-0 seed with alpha > 0): uniform fallback.
        std::vector<int> free_nodes;
        for (int i = 0; i < node; ++i) {
          if (!taken[i]) free_nodes.push_back(i);
        }
        pick = free_nodes[static_cast<std::size_t>(uniform01(rng) * free_nodes.size())];
      }
      taken[pick] = 1;
      targets.push_back(pick);
      tree.add(pick, -weights[pick]);
    }

    if (observer) observer({node, {out.degrees.data(), static_cast<std::size_t>(n)}, weights, total, targets});

    for (int t : targets) {
      taken[t] = 0;
      out.edges.push_back({node, t});
      ++out.degrees[t];
      ++in_degree[t];
      weights[t] = weight_of(t);
      tree.add(t, weights[t]);
    }
    out.degrees[node] = cfg.m_edges;
    weights[node] = weight_of(node);
    tree.add(node, weights[node]);
  }
  return out;
}

DegreeDistribution degree_distribution(std::span<const std::int64_t> degrees) {
  std::map<std::int64_t, std::int64_t> tally;
  for (auto k : degrees) ++tally[k];
  DegreeDistribution out;
  const double n = static_cast<double>(degrees.size());
  for (const auto& [k, c] : tally) {
    out.k.push_back(k);
    out.p.push_back(static_cast<double>(c) / n);
  }
  return out;
}

}  // namespace wcw
