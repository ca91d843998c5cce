#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <sstream>

#include "metastab/blume_capel.hpp"
#include "metastab/capacity.hpp"
#include "metastab/gates.hpp"
#include "metastab/heights.hpp"
#include "metastab/markov.hpp"
#include "metastab/polyomino.hpp"
#include "metastab/relaxation.hpp"

namespace py = pybind11;
using namespace metastab;

namespace {

py::object opt_number(double x) { return std::isnan(x) ? py::none() : py::object(py::float_(x)); }

py::dict relaxation_dict(const RelaxationReport& r) {
    py::dict d;
    d["gamma_m"] = r.gamma_m ? py::object(py::float_(*r.gamma_m)) : py::none();
    d["metastable_set"] = r.metastable_set;
    d["ground_states"] = r.ground_states;
    py::list stab;
    for (double v : r.stability) stab.append(opt_number(v));
    d["stability"] = stab;
    d["partition_m"] = r.partition_m;
    d["partition_s"] = r.partition_s;
    return d;
}

EnergyLandscape build_landscape(std::vector<double> energies, const std::vector<std::pair<StateId, StateId>>& edges,
                                const std::optional<std::vector<std::pair<double, double>>>& costs) {
    if (costs && costs->size() != edges.size()) throw InputError("costs must have one pair per edge");
    LandscapeBuilder b(std::move(energies), costs ? CostMode::explicit_costs : CostMode::metropolis);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (costs) b.add_edge(edges[i].first, edges[i].second, (*costs)[i].first, (*costs)[i].second);
        else b.add_edge(edges[i].first, edges[i].second);
    }
    return std::move(b).build();
}

Connectivity connectivity_or_uniform(const EnergyLandscape& land, const std::optional<double>& q) {
    if (!q) return uniform_connectivity(land);
    std::vector<EdgeWeight> w;
    for (const Edge& e : land.edges()) w.push_back({e.a, e.b, *q});
    return connectivity_from(land, w);
}

py::dict exit_dict(const ExitTimeStats& s) {
    py::list rows;
    for (const auto& r : s.per_beta) {
        py::dict d;
        d["beta"] = r.beta;
        d["n"] = r.n;
        d["censored"] = r.censored;
        d["mean_tau"] = opt_number(r.mean_tau);
        d["median_tau"] = opt_number(r.median_tau);
        d["excluded"] = r.excluded;
        rows.append(d);
    }
    py::dict out;
    out["rows"] = rows;
    out["slope"] = s.fitted ? py::object(py::float_(s.slope)) : py::none();
    out["slope_stderr"] = s.fitted ? py::object(py::float_(s.slope_stderr)) : py::none();
    return out;
}

SimConfig sim_config(std::vector<double> betas, std::size_t replicas, std::uint64_t seed, std::uint64_t cap,
                     unsigned threads) {
    SimConfig c;
    c.betas = std::move(betas);
    c.replicas = replicas;
    c.seed = seed;
    c.step_cap = cap;
    c.threads = threads;
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Metastability analysis of finite energy landscapes";

    auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", input_error.ptr());
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);

    py::class_<EnergyLandscape>(m, "Landscape")
        .def(py::init(&build_landscape), py::arg("energies"), py::arg("edges"), py::arg("costs") = py::none(),
             "Metropolis landscape, or explicit costs (cost_ab, cost_ba) per edge")
        .def_static("from_text", [](const std::string& text) {
            std::istringstream in(text);
            return read_landscape(in);
        })
        .def_static("from_file", &read_landscape_file)
        .def("to_text", [](const EnergyLandscape& l) {
            std::ostringstream out;
            write_landscape(out, l);
            return out.str();
        })
        .def("__len__", &EnergyLandscape::size)
        .def_property_readonly("energies", [](const EnergyLandscape& l) {
            return std::vector<double>(l.energies().begin(), l.energies().end());
        })
        .def_property_readonly("edges", [](const EnergyLandscape& l) {
            std::vector<std::tuple<StateId, StateId, double>> out;
            for (const Edge& e : l.edges()) out.emplace_back(e.a, e.b, e.height);
            return out;
        })
        .def_property_readonly("explicit_costs", [](const EnergyLandscape& l) { return l.mode() == CostMode::explicit_costs; });

    m.def("validate", [](const EnergyLandscape& l) {
        const auto d = validate_landscape(l);
        py::dict out;
        out["pass"] = d.pass();
        out["connected"] = d.connected;
        out["components"] = d.components;
        out["max_residual"] = d.max_residual;
        out["irreversible_edges"] = d.irreversible.size();
        out["negative_costs"] = d.negative_cost.size();
        return out;
    });
    m.def("communication_height", &communication_height, py::arg("landscape"), py::arg("y"), py::arg("z"));
    m.def("stability_level", &stability_level, py::arg("landscape"), py::arg("x"));
    m.def("relaxation_analysis", [](const EnergyLandscape& l) { return relaxation_dict(relaxation_analysis(l)); });
    m.def("relaxation_bruteforce", [](const EnergyLandscape& l) { return relaxation_dict(relaxation_bruteforce(l)); });
    m.def("check_sufficient_conditions",
          [](const EnergyLandscape& l, const std::vector<StateId>& a_set, double a, const std::string& mode) {
              if (mode != "path" && mode != "stability") throw InputError("mode must be 'path' or 'stability'");
              const auto v = check_sufficient_conditions(l, a_set, a, mode == "path" ? ConditionMode::path : ConditionMode::stability);
              return py::make_tuple(v.pass, v.message);
          },
          py::arg("landscape"), py::arg("a_set"), py::arg("a"), py::arg("mode") = "path");
    m.def("optimal_saddles", &optimal_saddles, py::arg("landscape"), py::arg("sigma"), py::arg("eta"));
    m.def("minimal_gates", &minimal_gates, py::arg("landscape"), py::arg("sigma"), py::arg("eta"),
          py::arg("max_candidates") = kGateEnumerationBound);

    m.def("capacity",
          [](const EnergyLandscape& l, const std::vector<StateId>& a, const std::vector<StateId>& b, double beta,
             std::optional<double> q) {
              const MarkovChain chain(l, connectivity_or_uniform(l, q), beta);
              const auto r = capacity_of(chain, a, b);
              py::dict d;
              d["capacity"] = r.capacity;
              d["log_capacity"] = r.log_capacity;
              d["potential"] = r.potential;
              return d;
          },
          py::arg("landscape"), py::arg("a"), py::arg("b"), py::arg("beta"), py::arg("q") = py::none());
    m.def("absorption_probability",
          [](const EnergyLandscape& l, const std::vector<StateId>& a, const std::vector<StateId>& b, double beta,
             std::optional<double> q) {
              const MarkovChain chain(l, connectivity_or_uniform(l, q), beta);
              return absorption_probability(chain, a, b);
          },
          py::arg("landscape"), py::arg("a"), py::arg("b"), py::arg("beta"), py::arg("q") = py::none());
    m.def("mean_hitting_time",
          [](const EnergyLandscape& l, StateId x, const std::vector<StateId>& j, double beta, std::optional<double> q) {
              const MarkovChain chain(l, connectivity_or_uniform(l, q), beta);
              const auto r = mean_hitting_exact(chain, x, j);
              py::dict d;
              d["exact"] = r.exact;
              d["estimate"] = r.estimate;
              d["ratio"] = r.ratio;
              return d;
          },
          py::arg("landscape"), py::arg("x"), py::arg("targets"), py::arg("beta"), py::arg("q") = py::none());
    m.def("exit_times",
          [](const EnergyLandscape& l, StateId start, const std::vector<StateId>& targets, std::vector<double> betas,
             std::size_t replicas, std::uint64_t seed, std::uint64_t cap, unsigned threads) {
              const LandscapeDynamics dyn(l, uniform_connectivity(l));
              std::vector<char> hit(l.size(), 0);
              for (StateId t : targets) {
                  if (t >= l.size()) throw InputError("target out of range");
                  hit[t] = 1;
              }
              ExitTimeStats stats;
              {
                  py::gil_scoped_release release;
                  stats = exit_time_experiment(dyn, start, [&](StateId x) { return hit[x] != 0; },
                                               sim_config(std::move(betas), replicas, seed, cap, threads));
              }
              return exit_dict(stats);
          },
          py::arg("landscape"), py::arg("start"), py::arg("targets"), py::arg("betas"), py::arg("replicas") = 100,
          py::arg("seed") = 0, py::arg("cap") = 1'000'000'000ULL, py::arg("threads") = 1);

    auto bcm = m.def_submodule("bc", "Blume-Capel model on the L x L torus");
    bcm.def("critical_quantities", [](double h, int L) {
        const auto q = bc::critical_quantities({L, h, 0.0});
        py::dict d;
        d["lc"] = q.lc;
        d["gamma_c"] = q.gamma_c;
        d["bounds_hold"] = q.bounds_hold;
        d["condition_ok"] = q.condition.ok;
        d["warnings"] = q.condition.warnings;
        return d;
    }, py::arg("h"), py::arg("L") = 15);
    bcm.def("hamiltonian", [](const std::string& grid, double h, double lambda) {
        const auto c = bc::parse_grid(grid);
        return bc::hamiltonian(c, {c.side(), h, lambda});
    }, py::arg("grid"), py::arg("h"), py::arg("lambda_") = 0.0);
    bcm.def("reference_path", [](double h, int L) {
        const auto p = bc::reference_path({L, h, 0.0});
        py::dict d;
        d["energy"] = p.energy;
        d["zero_index"] = p.zero_index;
        d["leg1_excess"] = p.leg1_excess;
        d["leg2_excess"] = p.leg2_excess;
        return d;
    }, py::arg("h"), py::arg("L") = 15);
    bcm.def("enumerate", [](int L, double h, double lambda) { return bc::enumerate_torus({L, h, lambda}); },
            py::arg("L"), py::arg("h"), py::arg("lambda_") = 0.0);
    bcm.def("exit_times",
            [](int L, double h, std::vector<double> betas, std::size_t replicas, std::uint64_t seed, std::uint64_t cap,
               unsigned threads) {
                const bc::Dynamics dyn({L, h, 0.0});
                const long all_plus = static_cast<long>(L) * L;
                ExitTimeStats stats;
                {
                    py::gil_scoped_release release;
                    stats = exit_time_experiment(dyn, bc::Dynamics::State(bc::phase_d(L)),
                                                 [&](const bc::Dynamics::State& s) { return s.parts.magnet == all_plus; },
                                                 sim_config(std::move(betas), replicas, seed, cap, threads));
                }
                return exit_dict(stats);
            },
            py::arg("L"), py::arg("h"), py::arg("betas"), py::arg("replicas") = 100, py::arg("seed") = 0,
            py::arg("cap") = 1'000'000'000ULL, py::arg("threads") = 1);

    auto poly = m.def_submodule("poly", "Polyominoes and minimal perimeters");
    poly.def("min_perimeter", &min_perimeter, py::arg("n"));
    poly.def("minimal_shape", [](long n) {
        const auto s = minimal_shape(n);
        py::dict d;
        d["case"] = s.shape_case == ShapeCase::i ? "i" : "ii";
        d["s"] = s.s;
        d["k"] = s.k;
        d["min_perimeter"] = s.min_perimeter;
        const Polyomino shape = minimal_polyomino(n);
        std::vector<std::pair<int, int>> cells;
        for (const Cell& c : shape.cells()) cells.emplace_back(c.r, c.c);
        d["cells"] = cells;
        return d;
    }, py::arg("n"));
    poly.def("perimeter", [](const std::vector<std::pair<int, int>>& cells) {
        std::vector<Cell> cs;
        for (auto [r, c] : cells) cs.push_back({r, c});
        return measure(Polyomino(cs)).perimeter;
    }, py::arg("cells"));
    poly.def("count", [](int n, bool connected) {
        long k = 0;
        for_each_polyomino(n, connected, [&](const Polyomino&) { ++k; });
        return k;
    }, py::arg("n"), py::arg("connected") = true);
}
