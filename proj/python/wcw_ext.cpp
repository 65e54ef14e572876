#include "wcw/error.hpp"
#include "wcw/exact.hpp"
#include "wcw/growth.hpp"
#include "wcw/mean_field.hpp"
#include "wcw/model.hpp"
#include "wcw/monte_carlo.hpp"
#include "wcw/netstats.hpp"
#include "wcw/reductions.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

namespace py = pybind11;
using namespace wcw;

namespace {

UnitKind parse_kind(const std::string& kind) {
  if (kind == "pm1") return UnitKind::PlusMinusOne;
  if (kind == "01") return UnitKind::ZeroOne;
  throw Error(ErrorKind::Domain, "kind must be 'pm1' or '01'", {{"kind", kind}});
}

InitPreset parse_init(const std::string& init) {
  if (init == "zero") return InitPreset::Zero;
  if (init == "positive") return InitPreset::Positive;
  if (init == "random") return InitPreset::Random;
  throw Error(ErrorKind::Domain, "init must be zero, positive or random", {{"init", init}});
}

BipartiteForm parse_form(const std::string& form) {
  if (form == "unnormalized") return BipartiteForm::Unnormalized;
  if (form == "canonical") return BipartiteForm::Canonical;
  throw Error(ErrorKind::Domain, "form must be unnormalized or canonical", {{"form", form}});
}

MeanFieldOptions solver_options(double damping, double tol, int max_iter, const std::string& init,
                                std::uint64_t seed) {
  MeanFieldOptions o;
  o.damping = damping;
  o.tol = tol;
  o.max_iter = max_iter;
  o.init = parse_init(init);
  o.seed = seed;
  return o;
}

py::dict observables_dict(const Observables& o) {
  py::dict d;
  d["log_z"] = o.log_z;
  d["free_energy_per_unit"] = o.free_energy_per_unit;
  d["magnetization"] = o.magnetization;
  d["susceptibility"] = o.susceptibility;
  return d;
}

py::dict fit_dict(const PowerLawFit& f) {
  py::dict d;
  d["exponent"] = f.exponent;
  d["intercept"] = f.intercept;
  d["r_squared"] = f.r_squared;
  d["decades"] = f.decades;
  d["hill_exponent"] = f.hill_exponent;
  d["hill_xmin"] = f.hill_xmin;
  d["points"] = f.points;
  d["verdict"] = to_string(f.verdict);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted Curie-Weiss models: exact, mean-field and Monte Carlo solvers, reductions, network statistics";

  static py::exception<Error> wcw_error(m, "WcwError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::dict details;
      for (const auto& [k, v] : e.details()) std::visit([&](const auto& x) { details[k.c_str()] = x; }, v);
      py::object exc = py::handle(wcw_error.ptr())(std::string(to_string(e.kind())) + ": " + e.what());
      exc.attr("kind") = to_string(e.kind());
      exc.attr("details") = details;
      PyErr_SetObject(wcw_error.ptr(), exc.ptr());
    }
  });

  py::class_<WeightedSystem>(m, "WeightedSystem")
      .def(py::init([](Eigen::MatrixXd w, double h, const std::string& kind) {
             return WeightedSystem(std::move(w), h, parse_kind(kind));
           }),
           py::arg("w"), py::arg("h") = 0.0, py::arg("kind") = "pm1")
      .def_static("constant_coupling",
                  [](int n, double j, double h, const std::string& kind) {
                    return WeightedSystem::constant_coupling(n, j, h, parse_kind(kind));
                  },
                  py::arg("n"), py::arg("j"), py::arg("h") = 0.0, py::arg("kind") = "pm1")
      .def_property_readonly("n", &WeightedSystem::n)
      .def_property_readonly("w", &WeightedSystem::w)
      .def_property_readonly("h", &WeightedSystem::h)
      .def_property_readonly("kind", [](const WeightedSystem& s) { return to_string(s.kind()); })
      .def("energy", [](const WeightedSystem& s, std::vector<int> state) { return energy(s, SpinState{std::move(state)}); });

  py::class_<BipartiteSystem>(m, "BipartiteSystem")
      .def(py::init<Eigen::MatrixXd, double>(), py::arg("w"), py::arg("h") = 0.0)
      .def_property_readonly("n_a", &BipartiteSystem::n_a)
      .def_property_readonly("n_b", &BipartiteSystem::n_b)
      .def_readonly("w", &BipartiteSystem::w)
      .def_readonly("h", &BipartiteSystem::h);

  m.def("exact",
        [](const WeightedSystem& s, double temperature, unsigned threads) {
          Observables o;
          {
            py::gil_scoped_release release;
            o = exact_observables(s, Thermodynamics(temperature), {threads});
          }
          return observables_dict(o);
        },
        py::arg("system"), py::arg("temperature"), py::arg("threads") = 0);

  m.def("exact_susceptibility_fd",
        [](const WeightedSystem& s, double temperature, double dh) {
          return exact_susceptibility_fd(s, Thermodynamics(temperature), dh);
        },
        py::arg("system"), py::arg("temperature"), py::arg("dh") = 1e-4);

  m.def("mean_field",
        [](const WeightedSystem& s, double temperature, double damping, double tol, int max_iter,
           const std::string& init, std::uint64_t seed) {
          const Thermodynamics t(temperature);
          const auto st = solve_mean_field(s, t, solver_options(damping, tol, max_iter, init, seed));
          py::dict d;
          d["v"] = st.v;
          d["m"] = magnetization(st);
          d["converged"] = st.converged;
          d["iterations"] = st.iterations;
          d["residual"] = st.residual;
          d["free_energy"] = st.converged ? py::cast(mean_field_free_energy(s, t, st)) : py::none();
          return d;
        },
        py::arg("system"), py::arg("temperature"), py::arg("damping") = 0.5, py::arg("tol") = 1e-10,
        py::arg("max_iter") = 100000, py::arg("init") = "zero", py::arg("seed") = 0);

  m.def("susceptibility",
        [](const WeightedSystem& s, double temperature, const std::string& init) {
          const Thermodynamics t(temperature);
          MeanFieldOptions o;
          o.init = parse_init(init);
          o.tol = 1e-12;
          const auto r = susceptibility(s, t, solve_mean_field(s, t, o));
          py::dict d;
          d["chi"] = r.chi;
          d["dv_dh"] = r.dv_dh;
          d["min_eigen_gap"] = r.min_eigen_gap;
          return d;
        },
        py::arg("system"), py::arg("temperature"), py::arg("init") = "zero");

  m.def("critical_temperature",
        [](const WeightedSystem& s, double t_min, double t_max, double tol) {
          const auto cp = find_critical_temperature(s, {t_min, t_max}, tol);
          py::dict d;
          d["t_c"] = cp.t_c;
          d["bracket"] = py::make_tuple(cp.bracket.first, cp.bracket.second);
          d["residual_gap"] = cp.residual_gap;
          return d;
        },
        py::arg("system"), py::arg("t_min"), py::arg("t_max"), py::arg("tol") = 1e-6);

  m.def("sweep",
        [](const WeightedSystem& s, const std::vector<double>& t_grid, double h, const std::string& init, double tol,
           int max_iter, bool warm_start) {
          SweepOptions o;
          o.solver.init = parse_init(init);
          o.solver.tol = tol;
          o.solver.max_iter = max_iter;
          o.warm_start = warm_start;
          py::list rows;
          for (const auto& r : sweep(s, t_grid, h, o)) {
            rows.append(py::dict(py::arg("T") = r.temperature, py::arg("m") = r.m, py::arg("chi") = r.chi,
                                 py::arg("F") = r.free_energy, py::arg("status") = to_string(r.status)));
          }
          return rows;
        },
        py::arg("system"), py::arg("t_grid"), py::arg("h") = 0.0, py::arg("init") = "positive",
        py::arg("tol") = 1e-10, py::arg("max_iter") = 100000, py::arg("warm_start") = true);

  m.def("metropolis",
        [](const WeightedSystem& s, double temperature, std::uint64_t seed, int sweeps, int burn_in, int chains,
           int thinning, unsigned threads) {
          McConfig c;
          c.seed = seed;
          c.n_sweeps = sweeps;
          c.burn_in = burn_in;
          c.n_chains = chains;
          c.thinning = thinning;
          c.threads = threads;
          McEstimate e;
          {
            py::gil_scoped_release release;
            e = metropolis_run(s, Thermodynamics(temperature), c);
          }
          py::dict d;
          d["m_mean"] = e.m_mean;
          d["m_err"] = e.m_err;
          d["chi_est"] = e.chi_est;
          d["chi_err"] = e.chi_err;
          d["n_chains"] = e.n_chains;
          d["samples_per_chain"] = e.samples_per_chain;
          return d;
        },
        py::arg("system"), py::arg("temperature"), py::arg("seed") = 12345, py::arg("sweeps") = 10000,
        py::arg("burn_in") = 1000, py::arg("chains") = 8, py::arg("thinning") = 1, py::arg("threads") = 0);

  m.def("zero_one_to_pm",
        [](const WeightedSystem& s, double temperature) {
          const auto tr = zero_one_to_pm(s, Thermodynamics(temperature));
          py::dict d;
          d["target_system"] = tr.target_system;
          d["log_constant"] = tr.log_constant;
          d["energy_offset"] = tr.energy_offset;
          d["shifted_field"] = tr.shifted_field;
          d["extended"] = tr.extended;
          return d;
        },
        py::arg("system"), py::arg("temperature") = 1.0);

  m.def("bipartite_reduce",
        [](const BipartiteSystem& b, const std::string& form, double temperature) {
          const auto r = bipartite_reduce(b, parse_form(form), Thermodynamics(temperature));
          py::dict d;
          d["system"] = r.system;
          d["w_prime"] = r.coupling.w_prime;
          d["coupling_scale"] = r.coupling_scale;
          d["log_constant"] = r.log_constant;
          d["extended"] = r.extended;
          d["normalization"] = r.normalization;
          return d;
        },
        py::arg("system"), py::arg("form") = "unnormalized", py::arg("temperature") = 1.0);

  m.def("exact_bipartite",
        [](const BipartiteSystem& b, double temperature, const std::string& form) {
          return observables_dict(exact_observables_bipartite(b, Thermodynamics(temperature), parse_form(form)));
        },
        py::arg("system"), py::arg("temperature"), py::arg("form") = "unnormalized");

  m.def("reduction_error",
        [](const BipartiteSystem& b, const std::vector<double>& scales, const std::string& form, double temperature) {
          const auto rep = reduction_error(b, scales, parse_form(form), Thermodynamics(temperature));
          std::vector<std::pair<double, double>> rows;
          for (const auto& r : rep.rows) rows.emplace_back(r.scale, r.defect);
          py::dict d;
          d["rows"] = rows;
          d["slope"] = rep.slope;
          return d;
        },
        py::arg("system"), py::arg("scales"), py::arg("form") = "unnormalized", py::arg("temperature") = 1.0);

  m.def("fit_rank_counts",
        [](const std::vector<std::int64_t>& counts) {
          RankFrequency rf;
          for (std::size_t i = 0; i < counts.size(); ++i) {
            rf.ranks.push_back(static_cast<std::int64_t>(i) + 1);
            rf.counts.push_back(counts[i]);
            rf.first_index.push_back(static_cast<std::int64_t>(i));
          }
          return fit_dict(fit_power_law(rf));
        },
        py::arg("counts"), "Fit counts already sorted in non-increasing rank order.");

  m.def("fit_observations",
        [](const std::vector<double>& obs) { return fit_dict(fit_power_law(std::span<const double>(obs))); },
        py::arg("observations"));

  m.def("pattern_frequencies",
        [](const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>& traces, double threshold) {
          const TraceSet ts(static_cast<int>(traces.rows()), static_cast<int>(traces.cols()),
                            std::vector<double>(traces.data(), traces.data() + traces.size()));
          return pattern_frequencies(ts, threshold).counts;
        },
        py::arg("traces"), py::arg("threshold") = 0.0);

  m.def("grow",
        [](int n, int m0, int m_edges, double alpha, std::uint64_t seed, bool directed) {
          GrowthConfig c;
          c.n_final = n;
          c.m0 = m0;
          c.m_edges = m_edges;
          c.alpha = alpha;
          c.seed = seed;
          c.directed = directed;
          const auto g = grow(c);
          std::vector<std::pair<int, int>> edges;
          edges.reserve(g.edges.size());
          for (const auto& e : g.edges) edges.emplace_back(e.src, e.dst);
          py::dict d;
          d["degrees"] = g.degrees;
          d["edges"] = edges;
          return d;
        },
        py::arg("n") = 1000, py::arg("m0") = 3, py::arg("m") = 2, py::arg("alpha") = 1.0, py::arg("seed") = 1,
        py::arg("directed") = false);
}
