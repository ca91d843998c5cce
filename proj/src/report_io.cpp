#include "metastab/report_io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

namespace metastab {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {
Json number(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

Json residuals(const std::vector<EdgeResidual>& rs) {
    Json out = Json::array();
    for (const auto& r : rs) out.push_back({{"edge", r.edge}, {"a", r.a}, {"b", r.b}, {"residual", number(r.residual)}});
    return out;
}
}  // namespace

Json diagnostics_json(const LandscapeDiagnostics& diag) {
    return {{"pass", diag.pass()},
            {"connected", diag.connected},
            {"components", diag.components},
            {"max_residual", number(diag.max_residual)},
            {"irreversible", residuals(diag.irreversible)},
            {"negative_cost", residuals(diag.negative_cost)}};
}

Json state_sets_json(const std::vector<StateSet>& sets) {
    Json out = Json::array();
    for (const auto& s : sets) out.push_back(s);
    return out;
}

Json relaxation_json(const RelaxationReport& report) {
    Json stability = Json::object();
    for (std::size_t x = 0; x < report.stability.size(); ++x) stability[std::to_string(x)] = number(report.stability[x]);
    Json out;
    out["gamma_m"] = report.gamma_m ? number(*report.gamma_m) : Json(nullptr);
    out["metastable_set"] = report.metastable_set;
    out["ground_states"] = report.ground_states;
    out["stability"] = std::move(stability);
    out["partition_m"] = state_sets_json(report.partition_m);
    out["partition_s"] = state_sets_json(report.partition_s);
    return out;
}

Json capacity_json(const CapacityResult& r) {
    Json pot = Json::array();
    for (double v : r.potential) pot.push_back(number(v));
    return {{"a_set", r.a_set},
            {"b_set", r.b_set},
            {"beta", r.beta},
            {"capacity", number(r.capacity)},
            {"log_capacity", number(r.log_capacity)},
            {"potential", std::move(pot)}};
}

Json exit_stats_json(const ExitTimeStats& stats) {
    Json rows = Json::array();
    for (const auto& b : stats.per_beta)
        rows.push_back({{"beta", b.beta},
                        {"n", b.n},
                        {"censored", b.censored},
                        {"mean_tau", number(b.mean_tau)},
                        {"median_tau", number(b.median_tau)},
                        {"ln_mean", number(b.ln_mean)},
                        {"excluded", b.excluded}});
    Json out{{"per_beta", std::move(rows)}, {"fitted", stats.fitted}};
    if (stats.fitted) {
        out["slope"] = number(stats.slope);
        out["slope_stderr"] = number(stats.slope_stderr);
        out["intercept"] = number(stats.intercept);
    }
    return out;
}

Json pta_decay_json(const PtaDecay& d) {
    Json lr = Json::array();
    for (double v : d.log_ratio) lr.push_back(number(v));
    return {{"beta", d.beta}, {"log_ratio", std::move(lr)}, {"slope", number(d.slope)}, {"metastable", d.metastable}};
}

std::string exit_stats_csv(const ExitTimeStats& stats) {
    std::string out = "beta,n,censored,mean_tau,median_tau,ln_mean\n";
    for (const auto& b : stats.per_beta)
        out += format_double(b.beta) + ',' + std::to_string(b.n) + ',' + std::to_string(b.censored) + ',' +
               format_double(b.mean_tau) + ',' + format_double(b.median_tau) + ',' + format_double(b.ln_mean) + '\n';
    return out;
}

std::string gate_passage_csv(const std::vector<GatePassage>& rows) {
    std::string out = "beta,fraction,n,censored\n";
    for (const auto& g : rows)
        out += format_double(g.beta) + ',' + format_double(g.fraction) + ',' + std::to_string(g.n) + ',' +
               std::to_string(g.censored) + '\n';
    return out;
}

std::string easy_bounds_csv(const EasyBoundsProbe& probe) {
    std::string out = "beta,g,log_g\n";
    for (std::size_t i = 0; i < probe.beta.size(); ++i)
        out += format_double(probe.beta[i]) + ',' + format_double(probe.g[i]) + ',' + format_double(probe.log_g[i]) + '\n';
    return out;
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << content;
    if (!out) throw InputError("write failed: " + path);
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void RunManifest::add_input(const std::string& path) { input_digests[path] = fnv1a64_hex(read_file(path)); }

Json RunManifest::to_json() const {
    return {{"command", command},
            {"parameters", parameters},
            {"seed", seed},
            {"version", version},
            {"input_digests", input_digests},
            {"timestamp", timestamp}};
}

}  // namespace metastab
