#pragma once

// Diagnostics over network weights and recorded activation traces, and the
// power-law fitter that judges them.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace wcw {

// Row-major samples x nodes.
class TraceSet {
 public:
  TraceSet(int n_samples, int n_nodes, std::vector<double> values);

  int n_samples() const { return n_samples_; }
  int n_nodes() const { return n_nodes_; }
  double at(int sample, int node) const { return values_[static_cast<std::size_t>(sample) * n_nodes_ + node]; }
  std::span<const double> row(int sample) const {
    return {values_.data() + static_cast<std::size_t>(sample) * n_nodes_, static_cast<std::size_t>(n_nodes_)};
  }
  const std::vector<double>& values() const { return values_; }

 private:
  int n_samples_;
  int n_nodes_;
  std::vector<double> values_;
};

struct RankFrequency {
  std::vector<std::int64_t> ranks;   // 1-based
  std::vector<std::int64_t> counts;  // non-increasing, positive
  // Index of the first sample (patterns) or node (node frequencies) per rank.
  std::vector<std::int64_t> first_index;

  std::size_t size() const { return counts.size(); }
};

std::vector<double> weighted_degrees(const Eigen::MatrixXd& w);

// Rows binarized at value > threshold; identical patterns counted; sorted by
// count descending, ties by first occurrence.
RankFrequency pattern_frequencies(const TraceSet& traces, double threshold = 0.0);

// Per-node count of samples with value > threshold, ranked descending (ties by
// node index). Nodes that never fire are omitted.
RankFrequency node_frequencies(const TraceSet& traces, double threshold = 0.0);

struct Histogram {
  std::vector<double> edges;  // size = counts.size() + 1
  std::vector<std::int64_t> counts;
};

// Histogram of per-sample row means over [min, max]; a degenerate range
// collapses to one bin.
Histogram layer_mean_distribution(const TraceSet& traces, int n_bins);

enum class FitMode { RankCount, DegreeDist };
enum class Verdict { PowerLaw, NotPowerLaw, InsufficientData };

const char* to_string(FitMode mode);
const char* to_string(Verdict verdict);

struct PowerLawOptions {
  std::int64_t min_rank = 1;  // lowest rank (RankCount) or value k (DegreeDist) fitted
  double min_r_squared = 0.98;
  double min_decades = 1.5;
  int min_points = 10;
  int min_tail_points = 20;
};

struct PowerLawFit {
  double exponent = 0.0;   // log-log slope (negative for decaying data)
  double intercept = 0.0;  // log10 scale
  double r_squared = 0.0;
  double decades = 0.0;
  // Slope-convention exponent from the tail MLE: -(1/alpha) for rank-count
  // data, -(1 + alpha) for observations. NaN when the tail is too short.
  double hill_exponent = 0.0;
  double hill_xmin = 0.0;
  int points = 0;
  Verdict verdict = Verdict::InsufficientData;
};

PowerLawFit fit_power_law(const RankFrequency& rf, const PowerLawOptions& options = {});

// DegreeDist mode: observations are positive values (e.g. node degrees);
// regresses log10 P(k) on log10 k over distinct k >= min_rank.
PowerLawFit fit_power_law(std::span<const double> observations, const PowerLawOptions& options = {});

struct HillEstimate {
  double alpha = 0.0;  // tail index of P(X >= x) ~ x^-alpha
  double xmin = 0.0;
  double ks_distance = 0.0;
  int tail_points = 0;
};

// Tail MLE with xmin chosen by minimum Kolmogorov-Smirnov distance over the
// observed values >= floor that leave at least min_tail_points in the tail.
// All-integer data uses the discrete approximation with xmin - 1/2.
std::optional<HillEstimate> hill_estimate(std::span<const double> observations, double floor, int min_tail_points);

}  // namespace wcw
