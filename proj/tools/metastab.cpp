#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "metastab/blume_capel.hpp"
#include "metastab/capacity.hpp"
#include "metastab/gates.hpp"
#include "metastab/heights.hpp"
#include "metastab/polyomino.hpp"
#include "metastab/relaxation.hpp"
#include "metastab/report_io.hpp"

using namespace metastab;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kAnalysisFailure = 1, kInputError = 2, kResourceError = 3 };

struct AnalysisFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "start:stop:step" (inclusive within 1e-12), "a,b,c" or a single value.
std::vector<double> parse_betas(const std::string& text) {
    std::vector<double> out;
    auto num = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || !std::isfinite(v)) throw InputError("bad number in beta grid: '" + s + "'");
        return v;
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw InputError("beta grid must be start:stop:step");
        const double a = num(parts[0]), b = num(parts[1]), h = num(parts[2]);
        if (!(h > 0) || b < a) throw InputError("beta grid needs step > 0 and stop >= start");
        for (long k = 0;; ++k) {
            const double v = a + static_cast<double>(k) * h;
            if (v > b + 1e-12) break;
            out.push_back(std::min(v, b));
        }
    } else {
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ',');) out.push_back(num(p));
    }
    if (out.empty()) throw InputError("empty beta grid");
    return out;
}

StateSet parse_set(const std::string& text) {
    StateSet out;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(p, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != p.size() || p.empty()) throw InputError("bad state id '" + p + "'");
        out.push_back(static_cast<StateId>(v));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) throw InputError("empty state set");
    return out;
}

struct Common {
    std::string out_dir;
    std::string format = "json";
    unsigned threads = 1;
};

/// Collects named outputs; with --out they become files next to
/// manifest.json, otherwise one JSON document goes to stdout.
class Emitter {
public:
    Emitter(const Common& common, RunManifest manifest) : common_(common), manifest_(std::move(manifest)) {
        manifest_.timestamp = utc_timestamp();
    }
    void json(const std::string& name, const Json& value) { json_.emplace_back(name, value); }
    void csv(const std::string& name, const std::string& table) { csv_.emplace_back(name, table); }
    void text(const std::string& message) { notes_.push_back(message); }

    void finish() {
        if (!common_.out_dir.empty()) {
            fs::create_directories(common_.out_dir);
            const fs::path dir(common_.out_dir);
            for (const auto& [name, value] : json_) write_file((dir / (name + ".json")).string(), value.dump(2) + "\n");
            for (const auto& [name, table] : csv_) write_file((dir / (name + ".csv")).string(), table);
            write_file((dir / "manifest.json").string(), manifest_.to_json().dump(2) + "\n");
            for (const auto& n : notes_) std::cerr << n << "\n";
            std::cout << "wrote " << json_.size() + csv_.size() + 1 << " files to " << common_.out_dir << "\n";
            return;
        }
        if (common_.format == "csv" && !csv_.empty()) {
            for (const auto& [name, table] : csv_) std::cout << table;
            return;
        }
        Json doc;
        doc["manifest"] = manifest_.to_json();
        for (const auto& [name, value] : json_) doc[name] = value;
        for (const auto& [name, table] : csv_) doc[name + "_csv"] = table;
        if (!notes_.empty()) doc["notes"] = notes_;
        std::cout << doc.dump(2) << "\n";
    }

private:
    Common common_;
    RunManifest manifest_;
    std::vector<std::pair<std::string, Json>> json_;
    std::vector<std::pair<std::string, std::string>> csv_;
    std::vector<std::string> notes_;
};

RunManifest manifest_for(const std::string& command, Json params, std::uint64_t seed = 0) {
    RunManifest m;
    m.command = command;
    m.parameters = std::move(params);
    m.seed = seed;
    return m;
}

// ---- landscape commands

int cmd_validate(const Common& common, const std::string& path) {
    const EnergyLandscape land = read_landscape_file(path);
    const auto diag = validate_landscape(land);
    auto m = manifest_for("validate", {{"file", path}});
    m.add_input(path);
    Emitter out(common, m);
    out.json("diagnostics", diagnostics_json(diag));
    out.finish();
    return diag.pass() ? kOk : kAnalysisFailure;
}

struct AnalyzeOptions {
    std::string path;
    bool oracle = false;
    std::vector<StateId> gates;
    std::size_t max_candidates = kGateEnumerationBound;
};

Json gates_json(const EnergyLandscape& land, StateId a, StateId b, std::size_t bound) {
    const auto gates = minimal_gates(land, a, b, bound);
    return {{"sigma", a},
            {"eta", b},
            {"phi", communication_height(land, a, b)},
            {"saddles", optimal_saddles(land, a, b)},
            {"minimal_gates", state_sets_json(gates)},
            {"essential_saddles", essential_saddles(gates)}};
}

bool same_report(const RelaxationReport& x, const RelaxationReport& y) {
    if (x.gamma_m.has_value() != y.gamma_m.has_value()) return false;
    if (x.gamma_m && !same_energy(*x.gamma_m, *y.gamma_m)) return false;
    if (x.metastable_set != y.metastable_set || x.ground_states != y.ground_states) return false;
    for (std::size_t i = 0; i < x.stability.size(); ++i) {
        const double a = x.stability[i], b = y.stability[i];
        if (std::isnan(a) != std::isnan(b) || (!std::isnan(a) && !same_energy(a, b))) return false;
    }
    return true;
}

int cmd_analyze(const Common& common, const AnalyzeOptions& opt) {
    const EnergyLandscape land = read_landscape_file(opt.path);
    require_valid(land);
    Json params{{"file", opt.path}, {"oracle", opt.oracle}, {"max_gate_candidates", opt.max_candidates}};
    if (!opt.gates.empty()) params["gates"] = opt.gates;
    auto m = manifest_for("analyze", params);
    m.add_input(opt.path);
    Emitter out(common, m);
    const auto report = relaxation_analysis(land);
    out.json("relaxation", relaxation_json(report));
    const auto nec = verify_necessity(land);
    out.json("necessity", {{"pass", nec.pass}, {"message", nec.message}});
    int code = nec.pass ? kOk : kAnalysisFailure;
    if (opt.oracle) {
        const bool agree = same_report(report, relaxation_bruteforce(land));
        out.json("oracle", {{"agree", agree}});
        if (!agree) code = kAnalysisFailure;
    }
    if (!opt.gates.empty()) {
        if (opt.gates[0] >= land.size() || opt.gates[1] >= land.size()) throw InputError("gate state out of range");
        out.json("gates", gates_json(land, opt.gates[0], opt.gates[1], opt.max_candidates));
    }
    out.finish();
    return code;
}

struct CapacityOptions {
    std::string path;
    std::string a, b, pta, betas = "1:10:1";
};

int cmd_capacity(const Common& common, const CapacityOptions& opt) {
    const EnergyLandscape land = read_landscape_file(opt.path);
    require_valid(land);
    const auto betas = parse_betas(opt.betas);
    Json params{{"file", opt.path}, {"betas", betas}};
    auto m = manifest_for("capacity", params);
    m.add_input(opt.path);
    Emitter out(common, m);
    const Connectivity q = uniform_connectivity(land);
    if (!opt.a.empty() || !opt.b.empty()) {
        if (opt.a.empty() || opt.b.empty()) throw InputError("--a and --b go together");
        const StateSet a = parse_set(opt.a), b = parse_set(opt.b);
        const auto probe = easy_bounds_probe(land, q, a, b, betas);
        out.csv("easy_bounds", easy_bounds_csv(probe));
        Json rows = Json::array();
        for (double beta : betas) {
            const MarkovChain chain(land, q, beta);
            const auto cap = capacity_of(chain, a, b);
            Json row{{"beta", beta}, {"capacity", cap.capacity}, {"log_capacity", cap.log_capacity}};
            if (land.size() <= 2000) {
                const auto h2 = absorption_probability(chain, a, b);
                double diff = 0.0;
                for (std::size_t x = 0; x < h2.size(); ++x) diff = std::max(diff, std::abs(h2[x] - cap.potential[x]));
                row["potential_residual"] = diff;
            }
            rows.push_back(row);
        }
        out.json("capacity",
                 {{"a_set", a}, {"b_set", b}, {"min_g", probe.min_g}, {"max_g", probe.max_g},
                  {"final_slope", probe.final_slope}, {"per_beta", rows}});
    }
    if (!opt.pta.empty()) {
        const StateSet mset = parse_set(opt.pta);
        out.json("pta", pta_decay_json(pta_decay(land, q, mset, betas)));
    }
    out.finish();
    return kOk;
}

// ---- Blume-Capel

struct BcOptions {
    double h = 0.7;
    double lambda = 0.0;
    int L = 3;
    std::string betas = "1:2:0.25";
    std::size_t replicas = 200;
    std::uint64_t seed = 42;
    std::uint64_t cap = 0;
    double memory_budget = bc::kDefaultMemoryBudget;
    std::size_t max_candidates = 64;
};

bc::ModelParams model(const BcOptions& o) {
    bc::ModelParams p{o.L, o.h, o.lambda};
    bc::validate_params(p);
    return p;
}

Json condition_json(const bc::ConditionReport& r) {
    return {{"ok", r.ok},
            {"h_in_unit_interval", r.h_in_unit_interval},
            {"two_over_h_not_integer", r.two_over_h_not_integer},
            {"volume_ok", r.volume_ok},
            {"volume_required", r.volume_required},
            {"warnings", r.warnings}};
}

Json bc_params_json(const BcOptions& o) { return {{"h", o.h}, {"lambda", o.lambda}, {"L", o.L}}; }

int cmd_bc_quantities(const Common& common, const BcOptions& o) {
    const auto p = model(o);
    const auto q = bc::critical_quantities(p);
    Emitter out(common, manifest_for("bc quantities", bc_params_json(o)));
    out.json("quantities", {{"lc", q.lc},
                            {"gamma_c", q.gamma_c},
                            {"bounds_hold", q.bounds_hold},
                            {"condition", condition_json(q.condition)}});
    out.finish();
    return kOk;
}

int cmd_bc_exact(const Common& common, const BcOptions& o) {
    const auto p = model(o);
    Json params = bc_params_json(o);
    params["memory_budget"] = o.memory_budget;
    params["max_gate_candidates"] = o.max_candidates;
    Emitter out(common, manifest_for("bc exact", params));
    const EnergyLandscape land = bc::enumerate_torus(p, o.memory_budget);
    const auto report = relaxation_analysis(land);
    const StateId d = static_cast<StateId>(bc::phase_d(o.L).encode());
    const StateId z = static_cast<StateId>(bc::phase_0(o.L).encode());
    const StateId u = static_cast<StateId>(bc::phase_u(o.L).encode());
    Json summary{{"states", land.size()},
                 {"edges", land.edges().size()},
                 {"gamma_m", report.gamma_m ? Json(*report.gamma_m) : Json(nullptr)},
                 {"metastable_set", report.metastable_set},
                 {"ground_states", report.ground_states},
                 {"d", d},
                 {"zero", z},
                 {"u", u},
                 {"condition", condition_json(bc::condition_report(p))}};
    Json grids = Json::object();
    for (StateId x : report.metastable_set) grids[std::to_string(x)] = bc::to_grid(bc::SpinConfiguration::decode(o.L, x));
    summary["metastable_grids"] = grids;
    if (p.lambda == 0.0 && p.h > 0.0) {
        const auto q = bc::critical_quantities(p);
        summary["gamma_c"] = q.gamma_c;
        summary["gamma_m_equals_gamma_c"] = report.gamma_m && same_energy(*report.gamma_m, q.gamma_c);
    }
    out.json("summary", summary);
    out.json("gates_d_u", gates_json(land, d, u, o.max_candidates));
    out.finish();
    return kOk;
}

int cmd_bc_path(const Common& common, const BcOptions& o) {
    const auto p = model(o);
    const auto path = bc::reference_path(p);
    const auto q = bc::critical_quantities(p);
    Emitter out(common, manifest_for("bc path", bc_params_json(o)));
    std::string csv = "step,leg,energy,excess\n";
    auto leg_summary = [&](const std::vector<double>& ex, std::size_t offset, bc::DropletSet which) {
        double mx = -INFINITY;
        for (double v : ex) mx = std::max(mx, v);
        std::size_t hits = 0, at = 0;
        for (std::size_t j = 0; j < ex.size(); ++j)
            if (same_energy(ex[j], mx)) {
                ++hits;
                at = j;
            }
        return Json{{"max_excess", mx},
                    {"attained", hits},
                    {"at_step", offset + at},
                    {"critical_droplet", bc::is_critical_droplet(path.states[offset + at], p, which)},
                    {"grid", bc::to_grid(path.states[offset + at])}};
    };
    for (std::size_t j = 0; j < path.energy.size(); ++j) {
        const bool leg1 = j <= path.zero_index;
        const double ex = leg1 ? path.leg1_excess[j] : path.leg2_excess[j - path.zero_index];
        csv += std::to_string(j) + ',' + (leg1 ? "1" : "2") + ',' + format_double(path.energy[j]) + ',' +
               format_double(ex) + '\n';
    }
    out.csv("profile", csv);
    out.json("path", {{"gamma_c", q.gamma_c},
                      {"steps", path.states.size() - 1},
                      {"zero_index", path.zero_index},
                      {"first_step_costs", {path.leg1_excess[1], path.leg1_excess[2] - path.leg1_excess[1]}},
                      {"leg1", leg_summary(path.leg1_excess, 0, bc::DropletSet::P_c)},
                      {"leg2", leg_summary(path.leg2_excess, path.zero_index, bc::DropletSet::Q_c)}});
    out.finish();
    return kOk;
}

std::vector<std::uint64_t> caps_for(const BcOptions& o, const bc::ModelParams& p, const std::vector<double>& betas) {
    if (o.cap) return std::vector<std::uint64_t>(betas.size(), o.cap);
    if (p.lambda == 0.0 && p.h > 0.0) return default_step_caps(betas, bc::critical_quantities(p).gamma_c);
    return std::vector<std::uint64_t>(betas.size(), 1'000'000'000ULL);
}

Json sim_params(const BcOptions& o, const std::vector<double>& betas, const std::vector<std::uint64_t>& caps) {
    Json j = bc_params_json(o);
    j["betas"] = betas;
    j["replicas"] = o.replicas;
    j["seed"] = o.seed;
    j["caps"] = caps;
    return j;
}

int cmd_bc_sim(const Common& common, const BcOptions& o) {
    const auto p = model(o);
    const auto betas = parse_betas(o.betas);
    const auto caps = caps_for(o, p, betas);
    Emitter out(common, manifest_for("bc sim", sim_params(o, betas, caps), o.seed));
    SimConfig cfg;
    cfg.betas = betas;
    cfg.replicas = o.replicas;
    cfg.seed = o.seed;
    cfg.step_caps = caps;
    cfg.threads = common.threads;
    const bc::Dynamics dyn(p);
    const long all_plus = static_cast<long>(o.L) * o.L;
    const auto stats = exit_time_experiment(dyn, bc::Dynamics::State(bc::phase_d(o.L)),
                                            [&](const bc::Dynamics::State& s) { return s.parts.magnet == all_plus; },
                                            cfg);
    out.csv("exit_times", exit_stats_csv(stats));
    out.json("exit_fit", exit_stats_json(stats));
    out.finish();
    return kOk;
}

int cmd_bc_gate(const Common& common, const BcOptions& o) {
    const auto p = model(o);
    const auto betas = parse_betas(o.betas);
    const auto caps = caps_for(o, p, betas);
    Json params = sim_params(o, betas, caps);
    const bc::Dynamics dyn(p);
    const long all_plus = static_cast<long>(o.L) * o.L;
    auto is_u = [&](const bc::Dynamics::State& s) { return s.parts.magnet == all_plus; };
    std::vector<GatePassage> rows;
    std::string gate_kind;
    if (o.L <= 3) {
        // Enumerable: the gate is the union of the minimal gates for (d, u).
        const EnergyLandscape land = bc::enumerate_torus(p, o.memory_budget);
        const StateId d = 0, u = static_cast<StateId>(land.size() - 1);
        const StateSet g = essential_saddles(minimal_gates(land, d, u, o.max_candidates));
        gate_kind = "essential_saddles";
        params["gate_size"] = g.size();
        for (std::size_t i = 0; i < betas.size(); ++i)
            rows.push_back(gate_passage_experiment(
                dyn, bc::Dynamics::State(bc::phase_d(o.L)),
                [&](const bc::Dynamics::State& s) {
                    return std::binary_search(g.begin(), g.end(), static_cast<StateId>(s.config.encode()));
                },
                is_u, betas[i], o.replicas, o.seed + i, caps[i], common.threads));
    } else {
        const auto q = bc::critical_quantities(p);
        const long droplet = static_cast<long>(q.lc) * (q.lc - 1) + 1;
        gate_kind = "P_c";
        for (std::size_t i = 0; i < betas.size(); ++i)
            rows.push_back(gate_passage_experiment(
                dyn, bc::Dynamics::State(bc::phase_d(o.L)),
                [&](const bc::Dynamics::State& s) {
                    return s.plus() == 0 && s.zero() == droplet && bc::is_critical_droplet(s.config, p, bc::DropletSet::P_c);
                },
                is_u, betas[i], o.replicas, o.seed + i, caps[i], common.threads));
    }
    params["gate"] = gate_kind;
    Emitter out(common, manifest_for("bc gate", params, o.seed));
    out.csv("gate_passage", gate_passage_csv(rows));
    Json summary = Json::array();
    for (const auto& r : rows)
        summary.push_back({{"beta", r.beta}, {"fraction", r.fraction}, {"n", r.n}, {"censored", r.censored}});
    out.json("gate_passage", {{"gate", gate_kind}, {"rows", summary}});
    out.finish();
    return kOk;
}

// ---- polyominoes

int cmd_poly(const Common& common, long n, bool enumerate, bool disconnected, bool ascii) {
    const MinimalShape shape = minimal_shape(n);
    const Polyomino canon = minimal_polyomino(n);
    Emitter out(common, manifest_for("poly", {{"n", n}, {"enumerate", enumerate}, {"disconnected", disconnected}}));
    Json j{{"n", n},
           {"case", shape.shape_case == ShapeCase::i ? "i" : "ii"},
           {"s", shape.s},
           {"k", shape.k},
           {"min_perimeter", shape.min_perimeter},
           {"canonical", Json::parse(polyomino_json(canon))},
           {"canonical_perimeter", measure(canon).perimeter},
           {"ascii", render_ascii(canon)}};
    if (enumerate) {
        long count = 0, best = -1;
        std::vector<Polyomino> minimizers;
        for_each_polyomino(static_cast<int>(n), !disconnected, [&](const Polyomino& p) {
            ++count;
            const long per = measure(p).perimeter;
            if (best < 0 || per < best) {
                best = per;
                minimizers.clear();
            }
            if (per == best) minimizers.push_back(p);
        });
        Json mins = Json::array();
        bool all_convex = true;
        for (const auto& p : minimizers) {
            const auto c = classify(p);
            all_convex = all_convex && c.connected && c.convex;
            mins.push_back(Json::parse(polyomino_json(p)));
        }
        j["enumeration"] = {{"count", count},
                            {"min_perimeter", best},
                            {"minimizers", mins.size()},
                            {"minimizers_connected_convex", all_convex},
                            {"minimizer_cells", mins}};
    }
    out.json("poly", j);
    if (ascii) {
        std::cout << render_ascii(canon);
        return kOk;
    }
    out.finish();
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metastability analysis of finite energy landscapes"};
    // "--h" is the magnetic field, so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--out", common.out_dir, "Write outputs and manifest.json to this directory");
    app.add_option("--format", common.format, "Stdout format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--threads", common.threads, "Worker threads for replicas (results do not depend on it)");

    std::string file;
    auto* validate = app.add_subcommand("validate", "Check a landscape file");
    validate->add_option("file", file)->required();

    AnalyzeOptions aopt;
    auto* analyze = app.add_subcommand("analyze", "Relaxation heights, metastable set, gates");
    analyze->add_option("file", aopt.path)->required();
    analyze->add_flag("--oracle", aopt.oracle, "Cross-check against the brute-force oracle");
    analyze->add_option("--gates", aopt.gates, "Minimal gates between two states")->expected(2);
    analyze->add_option("--max-gate-candidates", aopt.max_candidates);

    CapacityOptions copt;
    auto* capacity = app.add_subcommand("capacity", "Capacities, easy bounds and p.t.a. decay");
    capacity->add_option("file", copt.path)->required();
    capacity->add_option("--a", copt.a, "Comma-separated set A");
    capacity->add_option("--b", copt.b, "Comma-separated set B");
    capacity->add_option("--pta", copt.pta, "Candidate set M for the ratio decay");
    capacity->add_option("--betas", copt.betas);

    BcOptions bopt;
    auto* bcmd = app.add_subcommand("bc", "Blume-Capel model");
    bcmd->require_subcommand(1);
    bcmd->fallthrough();
    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--h", bopt.h);
        sub->add_option("--lambda", bopt.lambda);
        sub->add_option("--L", bopt.L);
    };
    auto add_sim = [&](CLI::App* sub) {
        sub->add_option("--betas", bopt.betas);
        sub->add_option("--replicas", bopt.replicas);
        sub->add_option("--seed", bopt.seed);
        sub->add_option("--cap", bopt.cap, "Step cap per replica (default 100 exp(beta gamma_c))");
    };
    auto* quantities = bcmd->add_subcommand("quantities", "Critical length, barrier and condition report");
    add_model(quantities);
    auto* exact = bcmd->add_subcommand("exact", "Full enumeration (L <= 3, L = 4 with a large budget)");
    add_model(exact);
    exact->add_option("--memory-budget", bopt.memory_budget);
    exact->add_option("--max-gate-candidates", bopt.max_candidates);
    auto* path = bcmd->add_subcommand("path", "Reference path and height profile");
    add_model(path);
    auto* sim = bcmd->add_subcommand("sim", "Exit times from d to u");
    add_model(sim);
    add_sim(sim);
    auto* gate = bcmd->add_subcommand("gate", "Gate passage before u");
    add_model(gate);
    add_sim(gate);
    gate->add_option("--memory-budget", bopt.memory_budget);
    gate->add_option("--max-gate-candidates", bopt.max_candidates);

    long poly_n = 0;
    bool poly_enum = false, poly_disc = false, poly_ascii = false;
    auto* poly = app.add_subcommand("poly", "Minimal polyomino of area n");
    poly->add_option("n", poly_n)->required();
    poly->add_flag("--enumerate", poly_enum, "Brute-force all polyominoes of area n");
    poly->add_flag("--disconnected", poly_disc, "Include disconnected sets (n <= 6)");
    poly->add_flag("--ascii", poly_ascii, "Print only the canonical shape");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }
    try {
        if (*validate) return cmd_validate(common, file);
        if (*analyze) return cmd_analyze(common, aopt);
        if (*capacity) return cmd_capacity(common, copt);
        if (*quantities) return cmd_bc_quantities(common, bopt);
        if (*exact) return cmd_bc_exact(common, bopt);
        if (*path) return cmd_bc_path(common, bopt);
        if (*sim) return cmd_bc_sim(common, bopt);
        if (*gate) return cmd_bc_gate(common, bopt);
        if (*poly) return cmd_poly(common, poly_n, poly_enum, poly_disc, poly_ascii);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResourceError;
    } catch (const AnalysisFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kAnalysisFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kAnalysisFailure;
    }
    return kOk;
}
