#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "metastab/capacity.hpp"
#include "metastab/landscape.hpp"
#include "metastab/markov.hpp"
#include "metastab/relaxation.hpp"

namespace metastab {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

// Shortest text that reads back to the same double; "nan", "inf", "-inf".
std::string format_double(double x);

Json diagnostics_json(const LandscapeDiagnostics& diag);
Json relaxation_json(const RelaxationReport& report);
Json state_sets_json(const std::vector<StateSet>& sets);
Json capacity_json(const CapacityResult& result);
Json exit_stats_json(const ExitTimeStats& stats);
Json pta_decay_json(const PtaDecay& decay);

// beta,n,censored,mean_tau,median_tau,ln_mean
std::string exit_stats_csv(const ExitTimeStats& stats);
// beta,fraction,n,censored
std::string gate_passage_csv(const std::vector<GatePassage>& rows);
// beta,g,log_g
std::string easy_bounds_csv(const EasyBoundsProbe& probe);

/// Provenance written next to every output. Only `timestamp` varies
/// between identical reruns, and it lives in manifest.json alone.
struct RunManifest {
    std::string command;
    Json parameters = Json::object();
    std::uint64_t seed = 0;
    std::string version = kVersion;
    Json input_digests = Json::object();  // path -> fnv1a64 hex
    std::string timestamp;

    void add_input(const std::string& path);
    Json to_json() const;
};

std::string fnv1a64_hex(const std::string& bytes);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
std::string utc_timestamp();

}  // namespace metastab
