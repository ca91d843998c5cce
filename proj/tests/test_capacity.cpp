#include <cmath>

#include "doctest.h"
#include "metastab/capacity.hpp"
#include "metastab/heights.hpp"
#include "support/fixtures.hpp"

using namespace metastab;

namespace {
double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}
}  // namespace

TEST_CASE("connectivity construction") {
    const auto land = fixtures::chain();
    const auto q = uniform_connectivity(land);
    for (double w : q.q) CHECK(w == 0.5);
    const EdgeWeight ok[] = {{0, 1, 0.5}, {1, 2, 0.5}, {2, 3, 0.5}, {3, 4, 0.5}};
    CHECK(connectivity_from(land, ok).q.size() == 4);
    const EdgeWeight non_edge[] = {{0, 2, 0.5}};
    CHECK_THROWS_AS(connectivity_from(land, non_edge), InputError);
    const EdgeWeight too_much[] = {{0, 1, 0.7}, {1, 2, 0.7}, {2, 3, 0.5}, {3, 4, 0.5}};
    CHECK_THROWS_AS(connectivity_from(land, too_much), InputError);
    const EdgeWeight missing[] = {{0, 1, 0.5}};
    CHECK_THROWS_AS(connectivity_from(land, missing), InputError);
    const EdgeWeight asym[] = {{0, 1, 0.5}, {1, 0, 0.4}, {1, 2, 0.5}, {2, 3, 0.5}, {3, 4, 0.5}};
    CHECK_THROWS_AS(connectivity_from(land, asym), InputError);
}

TEST_CASE("chain is stochastic and reversible") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto land = fixtures::random_landscape(rng, 10 + trial, trial % 2 == 0);
        for (double beta : {0.05, 1.0, 5.0, 40.0}) {
            const MarkovChain chain(land, uniform_connectivity(land), beta);
            CHECK(chain.max_row_sum_error() <= 1e-12);
            CHECK(chain.detailed_balance_residual() <= 1e-12);
            double total = 0.0;
            for (double p : chain.gibbs().prob) total += p;
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("two solvers agree and capacity is symmetric") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const auto land = fixtures::random_landscape(rng, 3 + trial % 38, trial % 3 == 0);
        const auto q = uniform_connectivity(land);
        const auto n = static_cast<StateId>(land.size());
        const StateId a[] = {0};
        const StateId b[] = {n - 1};
        for (double beta : {0.5, 2.0, 8.0}) {
            const MarkovChain chain(land, q, beta);
            const auto h1 = equilibrium_potential(chain, a, b);
            const auto h2 = absorption_probability(chain, a, b);
            CHECK(sup_diff(h1, h2) <= 1e-10);
            const auto ab = capacity_of(chain, a, b), ba = capacity_of(chain, b, a);
            CHECK(std::abs(ab.log_capacity - ba.log_capacity) <= 1e-12 * std::max(1.0, std::abs(ab.log_capacity)));
            // Dirichlet principle: perturbing the potential raises the form
            auto h = ab.potential;
            for (StateId x = 1; x + 1 < n; ++x) h[x] = std::clamp(h[x] + 0.01, 0.0, 1.0);
            CHECK(dirichlet_form(chain, h).log_value >= ab.log_capacity - 1e-12);
        }
    }
}

TEST_CASE("easy bounds on the chain stay bounded") {
    const auto land = fixtures::chain();
    const std::vector<double> betas{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const StateId a[] = {0};
    const StateId b[] = {4};
    const auto probe = easy_bounds_probe(land, uniform_connectivity(land), a, b, betas);
    CHECK(probe.min_g > 0);
    CHECK(std::isfinite(probe.max_g));
    CHECK(probe.final_slope <= 0.1);
    // g tends to the inverse resistance of the series path: q/2 over two saddle edges
    CHECK(probe.g.back() == doctest::Approx(0.25).epsilon(1e-6));
    const std::vector<double> few{1, 2, 3};
    CHECK_THROWS_AS(easy_bounds_probe(land, uniform_connectivity(land), a, b, few), InputError);
}

TEST_CASE("ratio decay separates a metastable candidate from a bad one") {
    const auto land = fixtures::chain();
    const auto q = uniform_connectivity(land);
    const std::vector<double> betas{4, 6, 8, 10};
    const StateId good[] = {0, 2, 4};
    const auto d = pta_decay(land, q, good, betas);
    CHECK(d.metastable);
    CHECK(d.slope == doctest::Approx(-7).epsilon(0.01));
    const StateId bad[] = {1, 4};
    CHECK_FALSE(pta_decay(land, q, bad, betas).metastable);
    const StateId one[] = {4};
    CHECK_THROWS_AS(pta_ratio(land, q, one, 1.0), InputError);
}

TEST_CASE("mean hitting time on the chain") {
    const auto land = fixtures::chain();
    const auto q = uniform_connectivity(land);
    const StateId j[] = {4};
    const MarkovChain c1(land, q, 1.0);
    CHECK(mean_hitting_exact(c1, 0, j).exact == doctest::Approx(9371.26).epsilon(1e-5));
    const MarkovChain c12(land, q, 12.0);
    const auto m = mean_hitting_exact(c12, 0, j);
    CHECK(m.log_exact / 12.0 == doctest::Approx(7.0).epsilon(0.05));
    // from s2 the walk crosses the 8-barrier long before the 10-barrier, so the
    // valley of s0 relative to {s0, s4} is {s0, s1}; the ratio settles at 2
    const MarkovChain c8(land, q, 8.0);
    CHECK(mean_hitting_exact(c8, 0, j).ratio == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(mean_hitting_exact(c1, 4, j).exact == 0.0);
    const StateId m_set[] = {0, 4};
    CHECK(valley_of(c8, m_set, 0) == StateSet{0, 1});
}

TEST_CASE("lumped chain reproduces hitting times on a symmetric landscape") {
    // a ring of 6 states around a hub: rotation-symmetric, blocks {hub}, {even}, {odd}
    LandscapeBuilder b({0, 3, 2, 3, 2, 3, 2}, CostMode::metropolis);
    for (StateId i = 1; i <= 6; ++i) {
        b.add_edge(0, i);
        b.add_edge(i, i % 6 + 1);
    }
    const auto land = std::move(b).build();
    const MarkovChain chain(land, uniform_connectivity(land), 1.7);
    const std::uint32_t blocks[] = {0, 1, 2, 1, 2, 1, 2};
    const LumpedChain lumped(chain, blocks);
    CHECK(lumped.blocks() == 3);
    CHECK(lumped.lumpability_residual() <= 1e-15);
    const StateId j[] = {0};
    const auto full = mean_hitting_times(chain, j);
    const std::uint32_t jb[] = {0};
    const auto small = lumped.mean_hitting_times(jb);
    CHECK(small[1] == doctest::Approx(full[1]).epsilon(1e-12));
    CHECK(small[2] == doctest::Approx(full[2]).epsilon(1e-12));
    const std::uint32_t bad[] = {0, 1, 1, 2, 2, 2, 2};
    CHECK_THROWS_AS(LumpedChain(chain, bad), InputError);
}
