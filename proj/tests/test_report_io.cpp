#include <cmath>
#include <limits>

#include "doctest.h"
#include "metastab/report_io.hpp"
#include "support/fixtures.hpp"

using namespace metastab;

TEST_CASE("double formatting round-trips") {
    CHECK(format_double(7.1) == "7.1");
    CHECK(format_double(0.1 + 0.2) == "0.30000000000000004");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    for (double x : {1e-300, 123456.789, -2.5e17}) CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("relaxation json") {
    const auto j = relaxation_json(relaxation_analysis(fixtures::chain()));
    CHECK(j["gamma_m"] == 7.0);
    CHECK(j["metastable_set"] == Json::array({0, 2}));
    CHECK(j.contains("partition_m"));
    CHECK(j.contains("partition_s"));
}

TEST_CASE("csv headers") {
    ExitTimeStats stats;
    BetaExitStats row;
    row.beta = 1.5;
    row.n = 3;
    row.mean_tau = 10;
    row.median_tau = 9;
    row.ln_mean = std::log(10.0);
    stats.per_beta.push_back(row);
    const auto csv = exit_stats_csv(stats);
    CHECK(csv.rfind("beta,n,censored,mean_tau,median_tau,ln_mean\n", 0) == 0);
    CHECK(csv.find("1.5,3,0,10,9,") != std::string::npos);
    CHECK(gate_passage_csv({}).rfind("beta,fraction,n,censored", 0) == 0);
}

TEST_CASE("manifest and digests") {
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
    RunManifest m;
    m.command = "analyze";
    m.seed = 5;
    const auto j = m.to_json();
    CHECK(j["command"] == "analyze");
    CHECK(j["seed"] == 5);
    CHECK(j["version"] == kVersion);
    CHECK(utc_timestamp().back() == 'Z');
}
