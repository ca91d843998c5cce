#include <cmath>

#include "doctest.h"
#include "metastab/capacity.hpp"
#include "metastab/markov.hpp"
#include "support/fixtures.hpp"

using namespace metastab;

TEST_CASE("seed mixing and uniform draws") {
    CHECK(mix_seed(1, 0, 0) != mix_seed(1, 0, 1));
    CHECK(mix_seed(1, 0, 1) != mix_seed(1, 1, 0));
    CHECK(mix_seed(7, 3, 9) == mix_seed(7, 3, 9));
    Rng rng(3);
    std::vector<int> counts(3, 0);
    for (int i = 0; i < 30000; ++i) ++counts[uniform_below(rng, 3)];
    for (int c : counts) CHECK(std::abs(c - 10000) < 400);
    for (int i = 0; i < 1000; ++i) {
        const double u = uniform01(rng);
        CHECK((u >= 0.0 && u < 1.0));
    }
}

TEST_CASE("uphill acceptance frequency") {
    const auto land = fixtures::chain({0, 1.5});
    const LandscapeDynamics dyn(land, uniform_connectivity(land));
    const double beta = 1.0;
    const auto s = dyn.at_beta(beta);
    Rng rng(17);
    const int trials = 100000;
    int moved = 0;
    for (int i = 0; i < trials; ++i) {
        StateId x = 0;
        moved += s.step(x, rng);
    }
    const double p = std::exp(-1.5 * beta);  // q = 1
    const double sigma = std::sqrt(trials * p * (1 - p));
    CHECK(std::abs(moved - trials * p) <= 3 * sigma);

    // downhill always accepted; beta = 0 is a plain walk
    StateId x = 1;
    CHECK(s.step(x, rng));
    CHECK(x == 0);
    const auto hot = dyn.at_beta(0.0);
    StateId y = 0;
    CHECK(hot.step(y, rng));
}

TEST_CASE("hitting times: start, censoring, geometric mean") {
    const auto land = fixtures::chain({0, 1});
    const LandscapeDynamics dyn(land, uniform_connectivity(land));
    const auto s = dyn.at_beta(2.0);
    Rng rng(5);
    auto at1 = [](StateId x) { return x == 1; };
    CHECK(hitting_time(s, StateId{1}, at1, 10, rng) == 0u);
    CHECK_FALSE(hitting_time(s, StateId{0}, [](StateId) { return false; }, 50, rng).has_value());

    SimConfig cfg;
    cfg.betas = {2.0};
    cfg.replicas = 4000;
    cfg.seed = 9;
    const auto stats = exit_time_experiment(dyn, StateId{0}, at1, cfg);
    // geometric with success probability q e^{-beta}, q = 1
    CHECK(stats.per_beta[0].mean_tau == doctest::Approx(std::exp(2.0)).epsilon(0.1));
    CHECK(stats.per_beta[0].censored == 0);
}

TEST_CASE("exit-time slope on the chain") {
    const auto land = fixtures::chain();
    const LandscapeDynamics dyn(land, uniform_connectivity(land));
    SimConfig cfg;
    cfg.betas = {1.0, 1.25, 1.5, 1.75, 2.0};
    cfg.replicas = 100;
    cfg.seed = 42;
    const auto stats = exit_time_experiment(dyn, StateId{0}, [](StateId x) { return x == 4; }, cfg);
    REQUIRE(stats.fitted);
    CHECK(std::abs(stats.slope - 7.0) <= 0.7);
}

TEST_CASE("results do not depend on thread count") {
    const auto land = fixtures::chain();
    const LandscapeDynamics dyn(land, uniform_connectivity(land));
    SimConfig cfg;
    cfg.betas = {0.5, 0.75, 1.0};
    cfg.replicas = 40;
    cfg.seed = 1;
    auto target = [](StateId x) { return x == 4; };
    const auto a = exit_time_experiment(dyn, StateId{0}, target, cfg);
    cfg.threads = 3;
    const auto b = exit_time_experiment(dyn, StateId{0}, target, cfg);
    for (std::size_t i = 0; i < a.per_beta.size(); ++i) {
        CHECK(a.per_beta[i].mean_tau == b.per_beta[i].mean_tau);
        CHECK(a.per_beta[i].median_tau == b.per_beta[i].median_tau);
    }
    CHECK(a.slope == b.slope);
}

TEST_CASE("summaries exclude censored samples") {
    const std::vector<std::optional<std::uint64_t>> xs{10, std::nullopt, 20, 30};
    const auto s = summarize_exit_times(1.0, xs);
    CHECK(s.n == 4);
    CHECK(s.censored == 1);
    CHECK(s.mean_tau == 20);
    CHECK(s.median_tau == 20);
    const std::vector<std::optional<std::uint64_t>> none{std::nullopt, std::nullopt};
    CHECK(summarize_exit_times(1.0, none).excluded);
}

TEST_CASE("barrier regression") {
    ExitTimeStats stats;
    Rng rng(4);
    std::normal_distribution<double> noise(0.0, 0.05);
    for (double b = 1.0; b <= 3.0001; b += 0.25) {
        BetaExitStats row;
        row.beta = b;
        row.ln_mean = 7 * b + 1 + noise(rng);
        row.mean_tau = std::exp(row.ln_mean);
        stats.per_beta.push_back(row);
    }
    const auto fit = estimate_barrier(stats);
    CHECK(std::abs(fit.slope - 7) <= 0.1);
    for (auto& r : stats.per_beta) r.ln_mean = 2.0, r.mean_tau = std::exp(2.0);
    CHECK(estimate_barrier(stats).slope == doctest::Approx(0.0).epsilon(1e-12));
    stats.per_beta.resize(2);
    CHECK_THROWS_AS(estimate_barrier(stats), InputError);
}

TEST_CASE("config validation") {
    SimConfig cfg;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg.betas = {2.0, 1.0};
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg.betas = {1.0};
    cfg.step_cap = 0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    const std::vector<double> betas{1.0, 2.0};
    const auto caps = default_step_caps(betas, 3.0);
    CHECK(caps[0] == static_cast<std::uint64_t>(100 * std::exp(3.0)));
    CHECK(default_step_caps(std::vector<double>{100.0}, 3.0)[0] == 1'000'000'000'000ULL);
}

TEST_CASE("long-run occupation matches the Gibbs measure") {
    // a mild landscape that mixes at beta = 2
    LandscapeBuilder b({0.0, 0.4, 0.2, 0.6, 0.1}, CostMode::metropolis);
    b.add_edge(0, 1).add_edge(1, 2).add_edge(2, 3).add_edge(3, 4).add_edge(4, 0);
    const auto land = std::move(b).build();
    const auto q = uniform_connectivity(land);
    const LandscapeDynamics dyn(land, q);
    const double beta = 2.0;
    Rng rng(2);
    const std::uint64_t steps = 10'000'000, thin = 50;
    const auto freq = occupation_frequencies(dyn.at_beta(beta), StateId{0}, land.size(), steps, thin, rng);
    const auto mu = gibbs_measure(land, beta);
    const double n = static_cast<double>(steps / thin);
    for (StateId x = 0; x < land.size(); ++x) {
        const double sigma = std::sqrt(mu.prob[x] * (1 - mu.prob[x]) / n);
        CHECK(std::abs(freq[x] - mu.prob[x]) <= 3 * sigma);
    }
}

TEST_CASE("gate passage") {
    const auto land = fixtures::chain();
    const LandscapeDynamics dyn(land, uniform_connectivity(land));
    auto at4 = [](StateId x) { return x == 4; };
    const auto start_in_gate = gate_passage_experiment(dyn, StateId{0}, [](StateId) { return true; }, at4, 1.0, 10, 1, 1000);
    CHECK(start_in_gate.fraction == 1.0);
    // every path from s0 to s4 crosses s1
    const auto g = gate_passage_experiment(dyn, StateId{0}, [](StateId x) { return x == 1; }, at4, 1.0, 50, 1, 100'000'000);
    CHECK(g.fraction == 1.0);
    CHECK(g.censored == 0);
}
