#include "wcw/netstats.hpp"

#include "wcw/error.hpp"
#include "wcw/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

namespace wcw {

const char* to_string(FitMode mode) { return mode == FitMode::RankCount ? "rank_count" : "degree_dist"; }

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::PowerLaw: return "PowerLaw";
    case Verdict::NotPowerLaw: return "NotPowerLaw";
    case Verdict::InsufficientData: return "InsufficientData";
  }
  return "unknown";
}

TraceSet::TraceSet(int n_samples, int n_nodes, std::vector<double> values)
    : n_samples_(n_samples), n_nodes_(n_nodes), values_(std::move(values)) {
  if (n_samples_ < 1 || n_nodes_ < 1) {
    throw Error(ErrorKind::Dimension, "trace set needs at least one sample and one node",
                {{"n_samples", static_cast<long long>(n_samples_)}, {"n_nodes", static_cast<long long>(n_nodes_)}});
  }
  const auto expected = static_cast<std::size_t>(n_samples_) * static_cast<std::size_t>(n_nodes_);
  if (values_.size() != expected) {
    throw Error(ErrorKind::Dimension, "trace value count does not match samples x nodes",
                {{"values", static_cast<long long>(values_.size())}, {"expected", static_cast<long long>(expected)}});
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorKind::Domain, "trace contains a non-finite value",
                  {{"sample", static_cast<long long>(i / n_nodes_)}, {"node", static_cast<long long>(i % n_nodes_)}});
    }
  }
}

std::vector<double> weighted_degrees(const Eigen::MatrixXd& w) {
  const Eigen::VectorXd sums = w.cwiseAbs().rowwise().sum();
  return {sums.data(), sums.data() + sums.size()};
}

namespace {

struct PatternHash {
  std::size_t operator()(const std::vector<std::uint64_t>& words) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto word : words) {
      h ^= word;
      h *= 1099511628211ull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

RankFrequency rank_entries(std::vector<std::pair<std::int64_t, std::int64_t>> entries) {
  // entries: (count, first index)
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  RankFrequency rf;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    rf.ranks.push_back(static_cast<std::int64_t>(i) + 1);
    rf.counts.push_back(entries[i].first);
    rf.first_index.push_back(entries[i].second);
  }
  return rf;
}

}  // namespace

RankFrequency pattern_frequencies(const TraceSet& traces, double threshold) {
  const int words = (traces.n_nodes() + 63) / 64;
  // Full patterns are the map keys, so hash collisions only cost a comparison.
  std::unordered_map<std::vector<std::uint64_t>, std::size_t, PatternHash> index;
  std::vector<std::pair<std::int64_t, std::int64_t>> entries;
  std::vector<std::uint64_t> key(words);
  for (int s = 0; s < traces.n_samples(); ++s) {
    std::fill(key.begin(), key.end(), 0);
    const auto row = traces.row(s);
    for (int j = 0; j < traces.n_nodes(); ++j) {
      if (row[j] > threshold) key[j / 64] |= std::uint64_t{1} << (j % 64);
    }
    auto [it, inserted] = index.try_emplace(key, entries.size());
    if (inserted) {
      entries.emplace_back(1, s);
    } else {
      ++entries[it->second].first;
    }
  }
  return rank_entries(std::move(entries));
}

RankFrequency node_frequencies(const TraceSet& traces, double threshold) {
  std::vector<std::int64_t> counts(traces.n_nodes(), 0);
  for (int s = 0; s < traces.n_samples(); ++s) {
    const auto row = traces.row(s);
    for (int j = 0; j < traces.n_nodes(); ++j) counts[j] += row[j] > threshold ? 1 : 0;
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> entries;
  for (int j = 0; j < traces.n_nodes(); ++j) {
    if (counts[j] > 0) entries.emplace_back(counts[j], j);
  }
  return rank_entries(std::move(entries));
}

Histogram layer_mean_distribution(const TraceSet& traces, int n_bins) {
  if (n_bins < 1) {
    throw Error(ErrorKind::Precondition, "n_bins must be >= 1", {{"n_bins", static_cast<long long>(n_bins)}});
  }
  std::vector<double> means(traces.n_samples());
  for (int s = 0; s < traces.n_samples(); ++s) {
    const auto row = traces.row(s);
    means[s] = std::accumulate(row.begin(), row.end(), 0.0) / traces.n_nodes();
  }
  const auto [mn, mx] = std::minmax_element(means.begin(), means.end());
  Histogram hist;
  if (*mx == *mn) {
    hist.edges = {*mn, *mx};
    hist.counts = {static_cast<std::int64_t>(means.size())};
    return hist;
  }
  const double lo = *mn;
  const double hi = *mx;
  const double width = (hi - lo) / n_bins;
  hist.counts.assign(n_bins, 0);
  for (int b = 0; b < n_bins; ++b) hist.edges.push_back(lo + b * width);
  hist.edges.push_back(hi);
  for (double m : means) {
    const int b = std::clamp(static_cast<int>(std::floor((m - lo) / width)), 0, n_bins - 1);
    ++hist.counts[b];
  }
  return hist;
}

std::optional<HillEstimate> hill_estimate(std::span<const double> observations, double floor, int min_tail_points) {
  std::map<double, std::int64_t> tally;
  bool discrete = true;
  for (double x : observations) {
    if (x > 0.0 && std::isfinite(x) && x >= floor) {
      ++tally[x];
      discrete = discrete && x == std::round(x);
    }
  }
  std::vector<double> values;
  std::vector<std::int64_t> counts;
  for (const auto& [v, c] : tally) {
    values.push_back(v);
    counts.push_back(c);
  }
  const std::size_t u = values.size();
  if (u == 0) return std::nullopt;

  // Suffix totals: tail size and sum of count * ln(value).
  std::vector<std::int64_t> tail_n(u + 1, 0);
  std::vector<double> tail_log(u + 1, 0.0);
  for (std::size_t i = u; i-- > 0;) {
    tail_n[i] = tail_n[i + 1] + counts[i];
    tail_log[i] = tail_log[i + 1] + counts[i] * std::log(values[i]);
  }

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < u; ++i) {
    if (tail_n[i] >= min_tail_points) candidates.push_back(i);
  }
  if (candidates.empty()) return std::nullopt;
  constexpr std::size_t kMaxCandidates = 200;
  if (candidates.size() > kMaxCandidates) {
    std::vector<std::size_t> thinned;
    for (std::size_t k = 0; k < kMaxCandidates; ++k) {
      thinned.push_back(candidates[k * (candidates.size() - 1) / (kMaxCandidates - 1)]);
    }
    candidates = std::move(thinned);
  }

  const double shift = discrete ? 0.5 : 0.0;
  std::optional<HillEstimate> best;
  for (std::size_t i0 : candidates) {
    const double xmin = values[i0];
    const double base = xmin - shift;
    const double nt = static_cast<double>(tail_n[i0]);
    const double log_sum = tail_log[i0] - nt * std::log(base);
    if (!(log_sum > 0.0)) continue;
    const double alpha = nt / log_sum;

    double ks = 0.0;
    double cum = 0.0;
    for (std::size_t i = i0; i < u; ++i) {
      const double before = cum / nt;
      cum += counts[i];
      const double after = cum / nt;
      if (discrete) {
        const double fit = 1.0 - std::pow((values[i] + 0.5) / base, -alpha);
        ks = std::max(ks, std::abs(after - fit));
      } else {
        const double fit = 1.0 - std::pow(values[i] / base, -alpha);
        ks = std::max({ks, std::abs(after - fit), std::abs(before - fit)});
      }
    }
    if (!best || ks < best->ks_distance) best = HillEstimate{alpha, xmin, ks, static_cast<int>(nt)};
  }
  return best;
}

namespace {

PowerLawFit regress(const std::vector<double>& xs, const std::vector<double>& ys, const PowerLawOptions& options) {
  PowerLawFit fit;
  fit.points = static_cast<int>(xs.size());
  fit.hill_exponent = std::numeric_limits<double>::quiet_NaN();
  fit.hill_xmin = std::numeric_limits<double>::quiet_NaN();
  if (fit.points < std::max(options.min_points, 2)) {
    fit.exponent = fit.intercept = fit.r_squared = std::numeric_limits<double>::quiet_NaN();
    fit.verdict = Verdict::InsufficientData;
    return fit;
  }
  std::vector<double> lx(xs.size());
  std::vector<double> ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    lx[i] = std::log10(xs[i]);
    ly[i] = std::log10(ys[i]);
  }
  const auto [mn, mx] = std::minmax_element(lx.begin(), lx.end());
  fit.decades = *mx - *mn;
  if (fit.decades <= 0.0) {
    fit.exponent = fit.intercept = std::numeric_limits<double>::quiet_NaN();
    fit.r_squared = 0.0;
    fit.verdict = Verdict::InsufficientData;
    return fit;
  }
  const LinearFit ols = ordinary_least_squares(lx, ly);
  fit.exponent = ols.slope;
  fit.intercept = ols.intercept;
  fit.r_squared = ols.r_squared;
  fit.verdict = fit.r_squared >= options.min_r_squared && fit.decades >= options.min_decades ? Verdict::PowerLaw
                                                                                               : Verdict::NotPowerLaw;
  return fit;
}

}  // namespace

PowerLawFit fit_power_law(const RankFrequency& rf, const PowerLawOptions& options) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < rf.size(); ++i) {
    if (rf.ranks[i] >= options.min_rank && rf.counts[i] > 0) {
      xs.push_back(static_cast<double>(rf.ranks[i]));
      ys.push_back(static_cast<double>(rf.counts[i]));
    }
  }
  PowerLawFit fit = regress(xs, ys, options);
  if (const auto hill = hill_estimate(ys, 0.0, options.min_tail_points)) {
    fit.hill_exponent = -1.0 / hill->alpha;
    fit.hill_xmin = hill->xmin;
  }
  return fit;
}

PowerLawFit fit_power_law(std::span<const double> observations, const PowerLawOptions& options) {
  std::map<double, std::int64_t> tally;
  std::int64_t total = 0;
  for (double x : observations) {
    if (x > 0.0 && std::isfinite(x)) {
      ++tally[x];
      ++total;
    }
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [k, c] : tally) {
    if (k >= static_cast<double>(options.min_rank)) {
      xs.push_back(k);
      ys.push_back(static_cast<double>(c) / static_cast<double>(total));
    }
  }
  PowerLawFit fit = regress(xs, ys, options);
  if (const auto hill = hill_estimate(observations, static_cast<double>(options.min_rank), options.min_tail_points)) {
    fit.hill_exponent = -(1.0 + hill->alpha);
    fit.hill_xmin = hill->xmin;
  }
  return fit;
}

}  // namespace wcw
