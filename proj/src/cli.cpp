#include "wcw/cli.hpp"

#include "wcw/error.hpp"
#include "wcw/exact.hpp"
#include "wcw/growth.hpp"
#include "wcw/io.hpp"
#include "wcw/mean_field.hpp"
#include "wcw/monte_carlo.hpp"
#include "wcw/netstats.hpp"
#include "wcw/reductions.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#ifndef WCW_VERSION
#define WCW_VERSION "0.0.0"
#endif

namespace wcw::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "wcw " WCW_VERSION;

// Every flag any subcommand accepts; each subcommand registers the subset it uses.
struct Options {
  std::string input;
  std::string mode;
  std::string out;
  std::string system_out;
  std::string edges_out;
  unsigned threads = 0;

  double damping = 0.5;
  double tol = 1e-10;
  int max_iter = 100000;
  std::string init = "zero";
  std::uint64_t seed = 0;

  double t_min = 0.0;
  double t_max = 0.0;
  double critical_tol = 1e-6;
  std::string t_grid;
  double h = 0.0;
  bool warm_start = true;
  double tc = 0.0;
  std::string fit_form = "corrected";

  int sweeps = 10000;
  int burn_in = 1000;
  int chains = 8;
  int thin = 1;
  std::uint64_t mc_seed = 12345;

  std::string form = "unnormalized";
  std::string scales = "0.01,0.02,0.05,0.1";

  double threshold = 0.0;
  std::int64_t min_rank = 1;
  int bins = 20;
  std::string format = "csv";
  std::string target = "patterns";
  double min_r_squared = 0.98;
  double min_decades = 1.5;

  int n = 1000;
  int m0 = 3;
  int m = 2;
  double alpha = 1.0;
  std::uint64_t grow_seed = 1;
  bool directed = false;
};

struct Command {
  std::string name;
  std::string description;
  std::function<void(CLI::App&, Options&)> setup;
  // Returns the primary output; may write side files named in the options.
  std::function<std::string(const Options&)> execute;
  // Options naming files whose digests go into the manifest.
  std::function<std::vector<std::string>(const Options&)> inputs;
};

std::string dump(const json& j) { return j.dump() + "\n"; }

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json number_array(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(number(v[i]));
  return arr;
}

void add_input(CLI::App& app, Options& o, const std::string& help) {
  app.add_option("input", o.input, help)->required();
}

void add_out(CLI::App& app, Options& o) {
  app.add_option("--out", o.out, "Write the primary output here; the manifest goes to <out>.manifest.json");
}

void add_threads(CLI::App& app, Options& o) {
  app.add_option("--threads", o.threads, "Worker threads (0: WCW_THREADS or all cores)");
}

void add_solver(CLI::App& app, Options& o) {
  app.add_option("--damping", o.damping, "Mixing weight of the new iterate")->check(CLI::Range(0.0, 1.0));
  app.add_option("--tol", o.tol, "Convergence tolerance on the max-norm step");
  app.add_option("--max-iter", o.max_iter, "Iteration cap");
  app.add_option("--init", o.init, "Initial vector preset")
      ->check(CLI::IsMember({"zero", "positive", "random"}));
  app.add_option("--seed", o.seed, "Seed for --init random");
}

MeanFieldOptions solver_options(const Options& o) {
  MeanFieldOptions s;
  s.damping = o.damping;
  s.tol = o.tol;
  s.max_iter = o.max_iter;
  s.seed = o.seed;
  s.init = o.init == "positive" ? InitPreset::Positive : o.init == "random" ? InitPreset::Random : InitPreset::Zero;
  return s;
}

void add_mc(CLI::App& app, Options& o) {
  app.add_option("--seed", o.mc_seed, "Base seed; chain c uses splitmix64(seed + c * golden)");
  app.add_option("--sweeps", o.sweeps, "Total sweeps per chain, burn-in included");
  app.add_option("--burn-in", o.burn_in, "Discarded leading sweeps");
  app.add_option("--chains", o.chains, "Independent chains");
  app.add_option("--thin", o.thin, "Record every k-th sweep");
  add_threads(app, o);
}

McConfig mc_config(const Options& o) {
  McConfig cfg;
  cfg.seed = o.mc_seed;
  cfg.n_sweeps = o.sweeps;
  cfg.burn_in = o.burn_in;
  cfg.n_chains = o.chains;
  cfg.thinning = o.thin;
  cfg.threads = o.threads;
  return cfg;
}

void add_form(CLI::App& app, Options& o) {
  app.add_option("--form", o.form, "Bipartite Hamiltonian form")
      ->check(CLI::IsMember({"unnormalized", "canonical"}));
}

BipartiteForm bipartite_form(const Options& o) {
  return o.form == "canonical" ? BipartiteForm::Canonical : BipartiteForm::Unnormalized;
}

std::vector<std::string> input_only(const Options& o) { return {o.input}; }

std::vector<std::string> system_inputs(const Options& o) {
  std::vector<std::string> paths{o.input};
  if (const auto bin = io::external_weights_path(o.input)) paths.push_back(bin->string());
  return paths;
}

std::vector<double> parse_grid(const std::string& text, const char* flag) {
  if (text.empty()) throw Error(ErrorKind::Config, std::string(flag) + " is required", {{"flag", std::string(flag)}});
  return io::parse_double_list(text);
}

// ---- model / oracle / mean field ----

std::string run_exact(const Options& o) {
  const io::SystemFile file = io::read_system_file(o.input);
  const Thermodynamics thermo(file.temperature);
  ExactOptions opts;
  opts.threads = o.threads;
  const Observables obs = exact_observables(file.system, thermo, opts);
  json j;
  j["n"] = file.system.n();
  j["kind"] = to_string(file.system.kind());
  j["temperature"] = file.temperature;
  j["log_z"] = number(obs.log_z);
  j["free_energy_per_unit"] = number(obs.free_energy_per_unit);
  j["magnetization"] = number(obs.magnetization);
  j["susceptibility"] = number(obs.susceptibility);
  return dump(j);
}

std::string run_meanfield(const Options& o) {
  const io::SystemFile file = io::read_system_file(o.input);
  const Thermodynamics thermo(file.temperature);
  const MeanFieldState state = solve_mean_field(file.system, thermo, solver_options(o));
  json j;
  j["temperature"] = file.temperature;
  j["converged"] = state.converged;
  j["iterations"] = state.iterations;
  j["residual"] = number(state.residual);
  j["m"] = number(magnetization(state));
  j["free_energy"] = state.converged ? number(mean_field_free_energy(file.system, thermo, state)) : json(nullptr);
  j["v"] = number_array(state.v);
  return dump(j);
}

std::string run_susceptibility(const Options& o) {
  const io::SystemFile file = io::read_system_file(o.input);
  const Thermodynamics thermo(file.temperature);
  const MeanFieldState state = solve_mean_field(file.system, thermo, solver_options(o));
  if (!state.converged) {
    throw Error(ErrorKind::NotConverged, "mean-field iteration did not converge",
                {{"iterations", static_cast<long long>(state.iterations)}, {"residual", state.residual}});
  }
  const SusceptibilityResult sus = susceptibility(file.system, thermo, state);
  json j;
  j["temperature"] = file.temperature;
  j["m"] = number(magnetization(state));
  j["chi"] = number(sus.chi);
  j["min_eigen_gap"] = number(sus.min_eigen_gap);
  j["dv_dh"] = number_array(sus.dv_dh);
  return dump(j);
}

std::string run_critical(const Options& o) {
  const io::SystemFile file = io::read_system_file(o.input);
  const CriticalPoint cp =
      find_critical_temperature(file.system, {o.t_min, o.t_max}, o.critical_tol, solver_options(o));
  json j;
  j["t_c"] = number(cp.t_c);
  j["bracket"] = {number(cp.bracket.first), number(cp.bracket.second)};
  j["residual_gap"] = number(cp.residual_gap);
  return dump(j);
}

std::string run_sweep(const Options& o) {
  const io::SystemFile file = io::read_system_file(o.input);
  SweepOptions opts;
  opts.solver = solver_options(o);
  opts.warm_start = o.warm_start;
  opts.threads = o.threads;
  const auto rows = sweep(file.system, parse_grid(o.t_grid, "--t-grid"), o.h, opts);
  std::ostringstream s;
  s << "T,m,chi,F,status\n";
  for (const auto& r : rows) {
    s << io::format_double(r.temperature) << ',' << io::format_double(r.m) << ',' << io::format_double(r.chi) << ','
      << io::format_double(r.free_energy) << ',' << to_string(r.status) << '\n';
  }
  return s.str();
}

RowStatus parse_status(const std::string& s, const std::string& path) {
  for (RowStatus st : {RowStatus::Ok, RowStatus::NotConverged, RowStatus::Diverged, RowStatus::Singular}) {
    if (s == to_string(st)) return st;
  }
  throw Error(ErrorKind::Format, "unknown sweep status", {{"path", path}, {"status", s}});
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
  std::istringstream in(io::read_file_bytes(path));
  std::string line;
  if (!std::getline(in, line) || line != "T,m,chi,F,status") {
    throw Error(ErrorKind::Format, "sweep file must start with header T,m,chi,F,status", {{"path", path}});
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cut = line.rfind(',');
    if (cut == std::string::npos) throw Error(ErrorKind::Format, "malformed sweep row", {{"path", path}});
    const auto values = io::parse_double_list(line.substr(0, cut));
    if (values.size() != 4) throw Error(ErrorKind::Format, "malformed sweep row", {{"path", path}});
    rows.push_back({values[0], values[1], values[2], values[3], parse_status(line.substr(cut + 1), path)});
  }
  return rows;
}

json fit_json(const ScalingFit& f) {
  json j;
  j["exponent"] = number(f.exponent);
  j["amplitude"] = number(f.amplitude);
  j["correction"] = number(f.correction);
  j["decades"] = number(f.decades);
  j["points"] = f.points;
  return j;
}

std::string run_exponents(const Options& o) {
  const auto rows = read_sweep_csv(o.input);
  const ScalingForm form = o.fit_form == "plain" ? ScalingForm::PurePowerLaw : ScalingForm::LeadingCorrection;
  const CriticalExponents ex = extract_exponents(rows, o.tc, form);
  json j;
  j["t_c"] = o.tc;
  j["beta_exp"] = number(ex.beta_exp);
  j["gamma_exp"] = number(ex.gamma_exp);
  j["amp_m"] = number(ex.amp_m);
  j["amp_chi"] = number(ex.amp_chi);
  j["order_fit"] = fit_json(ex.order_fit);
  j["chi_fit"] = fit_json(ex.chi_fit);
  return dump(j);
}

// ---- Monte Carlo ----

std::string run_mc(const Options& o) {
  const io::SystemFile file = io::read_system_file(o.input);
  const McEstimate est = metropolis_run(file.system, Thermodynamics(file.temperature), mc_config(o));
  json j;
  j["temperature"] = file.temperature;
  j["m_mean"] = number(est.m_mean);
  j["m_err"] = number(est.m_err);
  j["chi_est"] = number(est.chi_est);
  j["chi_err"] = number(est.chi_err);
  j["n_chains"] = est.n_chains;
  j["samples_per_chain"] = est.samples_per_chain;
  return dump(j);
}

std::string run_mc_scan(const Options& o) {
  const io::SystemFile file = io::read_system_file(o.input);
  const ChiScan scan = chi_peak_scan(file.system, parse_grid(o.t_grid, "--t-grid"), mc_config(o));
  std::ostringstream s;
  s << "T,chi_est,chi_err\n";
  for (const auto& r : scan.rows) {
    s << io::format_double(r.temperature) << ',' << io::format_double(r.chi_est) << ','
      << io::format_double(r.chi_err) << '\n';
  }
  return s.str();
}

// ---- reductions ----

std::optional<double> exact_log_z(const WeightedSystem& system, const Thermodynamics& thermo, unsigned threads) {
  if (system.n() > kMaxEnumerationUnits) return std::nullopt;
  ExactOptions opts;
  opts.threads = threads;
  return exact_observables(system, thermo, opts).log_z;
}

json optional_number(const std::optional<double>& x) { return x ? number(*x) : json(nullptr); }

std::string run_transform01(const Options& o) {
  const io::SystemFile file = io::read_system_file(o.input);
  const Thermodynamics thermo(file.temperature);
  const UnitTransform tr = zero_one_to_pm(file.system, thermo);
  if (!o.system_out.empty()) io::write_system_file(o.system_out, tr.target_system, file.temperature);

  const auto source = exact_log_z(file.system, thermo, o.threads);
  const auto target = exact_log_z(tr.target_system, thermo, o.threads);
  json j;
  j["n"] = file.system.n();
  j["temperature"] = file.temperature;
  j["extended"] = tr.extended;
  j["log_constant"] = number(tr.log_constant);
  j["energy_offset"] = number(tr.energy_offset);
  j["log_z_source"] = optional_number(source);
  j["log_z_target"] = optional_number(target);
  if (source && target) {
    const double mapped = tr.log_constant + *target;
    j["log_z_mapped"] = number(mapped);
    j["defect"] = number(std::abs(*source - mapped));
    j["relative_defect"] = number(std::abs(*source - mapped) / std::max(1.0, std::abs(*source)));
  } else {
    j["log_z_mapped"] = nullptr;
    j["defect"] = nullptr;
    j["relative_defect"] = nullptr;
  }
  if (!o.system_out.empty()) j["system_out"] = o.system_out;
  return dump(j);
}

std::string run_reduce_bipartite(const Options& o) {
  const io::BipartiteFile file = io::read_bipartite_file(o.input);
  const Thermodynamics thermo(file.temperature);
  const BipartiteForm form = bipartite_form(o);
  const ReducedSystem red = bipartite_reduce(file.system, form, thermo);
  if (!o.system_out.empty()) io::write_system_file(o.system_out, red.system, file.temperature);

  std::optional<double> source;
  if (file.system.n_a() + file.system.n_b() <= kMaxEnumerationUnits) {
    ExactOptions opts;
    opts.threads = o.threads;
    source = exact_observables_bipartite(file.system, thermo, form, opts).log_z;
  }
  const auto reduced = exact_log_z(red.system, thermo, o.threads);
  json j;
  j["n_a"] = file.system.n_a();
  j["n_b"] = file.system.n_b();
  j["form"] = to_string(form);
  j["temperature"] = file.temperature;
  j["normalization"] = red.normalization;
  j["coupling_scale"] = number(red.coupling_scale);
  j["log_constant"] = number(red.log_constant);
  j["extended"] = red.extended;
  j["log_z_bipartite"] = optional_number(source);
  j["log_z_reduced"] = optional_number(reduced);
  if (source && reduced) {
    const double mapped = red.log_constant + *reduced;
    j["log_z_mapped"] = number(mapped);
    j["defect"] = number(std::abs(*source - mapped));
  } else {
    j["log_z_mapped"] = nullptr;
    j["defect"] = nullptr;
  }
  if (!o.system_out.empty()) j["system_out"] = o.system_out;
  return dump(j);
}

std::string run_reduction_error(const Options& o) {
  const io::BipartiteFile file = io::read_bipartite_file(o.input);
  const BipartiteForm form = bipartite_form(o);
  const ReductionErrorReport rep =
      reduction_error(file.system, parse_grid(o.scales, "--scales"), form, Thermodynamics(file.temperature));
  json rows = json::array();
  for (const auto& r : rep.rows) rows.push_back({{"scale", number(r.scale)}, {"defect", number(r.defect)}});
  json j;
  j["form"] = to_string(form);
  j["temperature"] = file.temperature;
  j["rows"] = rows;
  j["slope"] = number(rep.slope);
  return dump(j);
}

// ---- netstats / growth ----

json power_law_json(const PowerLawFit& fit, FitMode mode) {
  json j;
  j["mode"] = to_string(mode);
  j["exponent"] = number(fit.exponent);
  j["intercept"] = number(fit.intercept);
  j["r_squared"] = number(fit.r_squared);
  j["decades"] = number(fit.decades);
  j["hill_exponent"] = number(fit.hill_exponent);
  j["hill_xmin"] = number(fit.hill_xmin);
  j["points"] = fit.points;
  j["verdict"] = to_string(fit.verdict);
  return j;
}

PowerLawOptions fit_options(const Options& o) {
  PowerLawOptions p;
  p.min_rank = o.min_rank;
  p.min_r_squared = o.min_r_squared;
  p.min_decades = o.min_decades;
  return p;
}

void add_fit_thresholds(CLI::App& app, Options& o) {
  app.add_option("--min-rank", o.min_rank, "Lowest rank (or value k) included in the fit");
  app.add_option("--min-r-squared", o.min_r_squared, "r^2 needed for a PowerLaw verdict");
  app.add_option("--min-decades", o.min_decades, "Decades of x needed for a PowerLaw verdict");
}

std::string rank_frequency_csv(const RankFrequency& rf) {
  std::ostringstream s;
  s << "rank,count\n";
  for (std::size_t i = 0; i < rf.size(); ++i) s << rf.ranks[i] << ',' << rf.counts[i] << '\n';
  return s.str();
}

std::string run_analyze(const Options& o) {
  if (o.mode == "degrees") {
    const auto deg = weighted_degrees(io::read_weight_matrix(o.input));
    std::ostringstream s;
    s << "node,degree\n";
    for (std::size_t i = 0; i < deg.size(); ++i) s << i << ',' << io::format_double(deg[i]) << '\n';
    return s.str();
  }
  const TraceSet traces = io::read_traces(o.input, o.format == "bin" ? io::TraceFormat::Binary : io::TraceFormat::Csv);
  if (o.mode == "patterns") return rank_frequency_csv(pattern_frequencies(traces, o.threshold));
  if (o.mode == "nodes") return rank_frequency_csv(node_frequencies(traces, o.threshold));
  if (o.mode == "layermean") {
    const Histogram hist = layer_mean_distribution(traces, o.bins);
    std::ostringstream s;
    s << "lo,hi,count\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
      s << io::format_double(hist.edges[i]) << ',' << io::format_double(hist.edges[i + 1]) << ',' << hist.counts[i]
        << '\n';
    }
    return s.str();
  }
  const RankFrequency rf =
      o.target == "nodes" ? node_frequencies(traces, o.threshold) : pattern_frequencies(traces, o.threshold);
  json j = power_law_json(fit_power_law(rf, fit_options(o)), FitMode::RankCount);
  j["target"] = o.target;
  j["threshold"] = o.threshold;
  return dump(j);
}

// Reads a header line then comma-separated numeric rows; returns the rows.
std::vector<std::vector<double>> read_numeric_csv(const std::string& path) {
  std::istringstream in(io::read_file_bytes(path));
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Format, "empty data file", {{"path", path}});
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    try {
      rows.push_back(io::parse_double_list(line));
    } catch (const Error& e) {
      throw Error(ErrorKind::Format, e.what(), {{"path", path}, {"line", static_cast<long long>(rows.size() + 2)}});
    }
  }
  return rows;
}

std::string run_fit(const Options& o) {
  const auto rows = read_numeric_csv(o.input);
  const FitMode mode = o.mode == "degree" ? FitMode::DegreeDist : FitMode::RankCount;
  PowerLawFit fit;
  if (mode == FitMode::RankCount) {
    // Rank is reassigned from the sorted counts; the last column is the count.
    std::vector<std::int64_t> counts;
    for (const auto& r : rows) {
      const double c = r.back();
      if (c < 1.0 || c != std::floor(c)) {
        throw Error(ErrorKind::Domain, "counts must be positive integers", {{"path", o.input}, {"value", c}});
      }
      counts.push_back(static_cast<std::int64_t>(c));
    }
    std::sort(counts.begin(), counts.end(), std::greater<>());
    RankFrequency rf;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      rf.ranks.push_back(static_cast<std::int64_t>(i) + 1);
      rf.counts.push_back(counts[i]);
      rf.first_index.push_back(static_cast<std::int64_t>(i));
    }
    fit = fit_power_law(rf, fit_options(o));
  } else {
    std::vector<double> obs;
    for (const auto& r : rows) obs.push_back(r.back());
    fit = fit_power_law(std::span<const double>(obs), fit_options(o));
  }
  return dump(power_law_json(fit, mode));
}

std::string run_grow(const Options& o) {
  GrowthConfig cfg;
  cfg.n_final = o.n;
  cfg.m0 = o.m0;
  cfg.m_edges = o.m;
  cfg.alpha = o.alpha;
  cfg.seed = o.grow_seed;
  cfg.directed = o.directed;
  const GrowthResult g = grow(cfg);
  if (!o.edges_out.empty()) {
    std::ofstream f(o.edges_out, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot open output file", {{"path", o.edges_out}});
    f << "src,dst\n";
    for (const auto& e : g.edges) f << e.src << ',' << e.dst << '\n';
  }
  std::ostringstream s;
  s << "node,degree\n";
  for (std::size_t i = 0; i < g.degrees.size(); ++i) s << i << ',' << g.degrees[i] << '\n';
  return s.str();
}

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"exact", "Exact observables by full enumeration (n <= 24)",
       [](CLI::App& a, Options& o) {
         add_input(a, o, "System file");
         add_threads(a, o);
       },
       run_exact, system_inputs},
      {"meanfield", "Solve the mean-field self-consistency equations",
       [](CLI::App& a, Options& o) {
         add_input(a, o, "System file");
         add_solver(a, o);
       },
       run_meanfield, system_inputs},
      {"susceptibility", "Mean-field susceptibility from the linearized equations",
       [](CLI::App& a, Options& o) {
         add_input(a, o, "System file");
         add_solver(a, o);
       },
       run_susceptibility, system_inputs},
      {"critical", "Mean-field critical temperature by bisection on the stability gap",
       [](CLI::App& a, Options& o) {
         add_input(a, o, "System file");
         a.add_option("--t-min", o.t_min, "Lower end of the bracket")->required();
         a.add_option("--t-max", o.t_max, "Upper end of the bracket")->required();
         a.add_option("--tol", o.critical_tol, "Bracket width and gap tolerance");
         a.add_option("--damping", o.damping, "Mixing weight of the new iterate")->check(CLI::Range(0.0, 1.0));
         a.add_option("--max-iter", o.max_iter, "Iteration cap");
       },
       run_critical, system_inputs},
      {"sweep", "Mean-field temperature sweep (CSV T,m,chi,F,status)",
       [](CLI::App& a, Options& o) {
         add_input(a, o, "System file");
         add_solver(a, o);
         a.add_option("--t-grid", o.t_grid, "Comma-separated temperatures (descending for warm starts)")
             ->required();
         a.add_option("--h", o.h, "External field used for every row");
         a.add_flag("--warm-start,!--no-warm-start", o.warm_start, "Seed each row with the previous solution")
             ->default_str("true");
         add_threads(a, o);
       },
       run_sweep, system_inputs},
      {"exponents", "Critical exponents from a sweep CSV",
       [](CLI::App& a, Options& o) {
         add_input(a, o, "Sweep CSV");
         a.add_option("--tc", o.tc, "Critical temperature")->required();
         a.add_option("--fit", o.fit_form, "Log-log fit form")->check(CLI::IsMember({"corrected", "plain"}));
       },
       run_exponents, input_only},
      {"mc", "Metropolis estimate of m and chi",
       [](CLI::App& a, Options& o) {
         add_input(a, o, "System file");
         add_mc(a, o);
       },
       run_mc, system_inputs},
      {"mc-scan", "Metropolis chi over a temperature grid (CSV T,chi_est,chi_err)",
       [](CLI::App& a, Options& o) {
         add_input(a, o, "System file");
         add_mc(a, o);
         a.add_option("--t-grid", o.t_grid, "Comma-separated temperatures")->required();
       },
       run_mc_scan, system_inputs},
      {"transform01", "Map a 0/1 system to an equivalent +-1 system",
       [](CLI::App& a, Options& o) {
         add_input(a, o, "System file with kind 01");
         a.add_option("--system-out", o.system_out, "Write the transformed system file here");
         add_threads(a, o);
       },
       run_transform01, system_inputs},
      {"reduce-bipartite", "Sum out the b-layer to second order in the weights",
       [](CLI::App& a, Options& o) {
         add_input(a, o, "Bipartite system file");
         add_form(a, o);
         a.add_option("--system-out", o.system_out, "Write the reduced system file here");
         add_threads(a, o);
       },
       run_reduce_bipartite, input_only},
      {"reduction-error", "Free-energy defect of the bipartite reduction against weight scale",
       [](CLI::App& a, Options& o) {
         add_input(a, o, "Bipartite system file");
         add_form(a, o);
         a.add_option("--scales", o.scales, "Comma-separated weight scales");
       },
       run_reduction_error, input_only},
      {"analyze", "Network and trace diagnostics",
       [](CLI::App& a, Options& o) {
         a.add_option("mode", o.mode, "degrees|patterns|nodes|layermean|fit")
             ->required()
             ->check(CLI::IsMember({"degrees", "patterns", "nodes", "layermean", "fit"}));
         add_input(a, o, "Weight matrix (degrees) or trace file");
         a.add_option("--threshold", o.threshold, "Activation threshold (value > threshold is active)");
         a.add_option("--bins", o.bins, "Histogram bins for layermean")->check(CLI::PositiveNumber);
         a.add_option("--format", o.format, "Trace file format")->check(CLI::IsMember({"csv", "bin"}));
         a.add_option("--target", o.target, "Rank-frequency fitted by mode fit")
             ->check(CLI::IsMember({"patterns", "nodes"}));
         add_fit_thresholds(a, o);
       },
       run_analyze, input_only},
      {"fit", "Power-law fit of rank-count or observation data",
       [](CLI::App& a, Options& o) {
         o.mode = "rank";
         add_input(a, o, "CSV with a header; the last column holds counts or observations");
         a.add_option("--mode", o.mode, "rank: rank-count data; degree: raw observations")
             ->check(CLI::IsMember({"rank", "degree"}));
         add_fit_thresholds(a, o);
       },
       run_fit, input_only},
      {"grow", "Preferential-attachment growth (CSV node,degree)",
       [](CLI::App& a, Options& o) {
         a.add_option("--n", o.n, "Final node count");
         a.add_option("--m0", o.m0, "Seed clique size");
         a.add_option("--m", o.m, "Edges per arriving node");
         a.add_option("--alpha", o.alpha, "Attachment exponent");
         a.add_option("--seed", o.grow_seed, "Random seed");
         a.add_flag("--directed", o.directed, "Weight by (in-degree + 1)^alpha");
         a.add_option("--edges-out", o.edges_out, "Write the edge list CSV src,dst here");
       },
       run_grow, [](const Options&) { return std::vector<std::string>{}; }},
  };
  return table;
}

std::string usage() {
  std::ostringstream s;
  s << "usage: wcw <subcommand> [options]\n\nsubcommands:\n";
  for (const auto& c : commands()) {
    s << "  " << c.name << std::string(c.name.size() < 18 ? 18 - c.name.size() : 1, ' ') << c.description << '\n';
  }
  s << "\nRun 'wcw <subcommand> --help' for options.\n";
  return s.str();
}

json detail_json(const Error::Detail& d) {
  return std::visit([](const auto& v) { return json(v); }, d);
}

void report_error(std::ostream& err, const std::string& subcommand, const std::string& kind, const std::string& message,
                  const json& details = json::object()) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  j["subcommand"] = subcommand;
  for (const auto& [k, v] : details.items()) j[k] = v;
  err << j.dump() << '\n';
}

json parameters(const CLI::App& app) {
  json p = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    if (opt == app.get_help_ptr()) continue;
    const std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    if (opt->get_expected_min() == 0) {
      const bool set = opt->count() > 0 ? opt->as<bool>() : opt->get_default_str() == "true";
      p[name] = set ? "true" : "false";
    } else if (opt->count() > 0) {
      const auto& res = opt->results();
      std::string joined;
      for (std::size_t i = 0; i < res.size(); ++i) joined += (i ? "," : "") + res[i];
      p[name] = joined;
    } else {
      p[name] = opt->get_default_str();
    }
  }
  return p;
}

std::string manifest(const Command& cmd, const CLI::App& app, const Options& o) {
  json inputs = json::object();
  for (const auto& path : cmd.inputs(o)) inputs[path] = "sha256:" + sha256_hex(io::read_file_bytes(path));
  json j;
  j["subcommand"] = cmd.name;
  j["parameters"] = parameters(app);
  j["inputs"] = inputs;
  j["tool_version"] = kToolVersion;
  return j.dump();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open output file", {{"path", path}});
  f << text;
  if (!f) throw Error(ErrorKind::Io, "failed writing output file", {{"path", path}});
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& c : commands()) v.push_back(c.name);
    return v;
  }();
  return names;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Io, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << usage();
    return kExitUsage;
  }
  if (args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
    out << usage();
    return kExitOk;
  }
  if (args[0] == "--version") {
    out << kToolVersion << '\n';
    return kExitOk;
  }
  const auto& table = commands();
  const auto it = std::find_if(table.begin(), table.end(), [&](const Command& c) { return c.name == args[0]; });
  if (it == table.end()) {
    err << "wcw: unknown subcommand '" << args[0] << "'\n\n" << usage();
    return kExitUsage;
  }
  const Command& cmd = *it;

  CLI::App app(cmd.description, "wcw " + cmd.name);
  app.set_help_flag("--help", "Print this help message and exit");
  app.option_defaults()->always_capture_default();
  Options o;
  cmd.setup(app, o);
  add_out(app, o);

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, cmd.name, "usage", e.what());
    return kExitInput;
  }

  try {
    const std::string output = cmd.execute(o);
    const std::string man = manifest(cmd, app, o);
    if (o.out.empty()) {
      out << output;
      err << man << '\n';
    } else {
      write_text(o.out, output);
      write_text(o.out + ".manifest.json", man + "\n");
    }
  } catch (const Error& e) {
    json details = json::object();
    for (const auto& [k, v] : e.details()) details[k] = detail_json(v);
    report_error(err, cmd.name, to_string(e.kind()), e.what(), details);
    return kExitInput;
  } catch (const std::exception& e) {
    report_error(err, cmd.name, "internal", e.what());
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace wcw::cli
