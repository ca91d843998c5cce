#include <cmath>

#include "doctest.h"
#include "metastab/heights.hpp"
#include "metastab/relaxation.hpp"
#include "support/fixtures.hpp"

using namespace metastab;

namespace {
void check_same(const RelaxationReport& a, const RelaxationReport& b) {
    REQUIRE(a.gamma_m.has_value() == b.gamma_m.has_value());
    if (a.gamma_m) CHECK(std::abs(*a.gamma_m - *b.gamma_m) <= kEnergyTol);
    CHECK(a.metastable_set == b.metastable_set);
    CHECK(a.ground_states == b.ground_states);
    REQUIRE(a.stability.size() == b.stability.size());
    for (std::size_t x = 0; x < a.stability.size(); ++x) {
        CHECK(std::isnan(a.stability[x]) == std::isnan(b.stability[x]));
        if (!std::isnan(a.stability[x])) CHECK(std::abs(a.stability[x] - b.stability[x]) <= kEnergyTol);
    }
}
}  // namespace

TEST_CASE("chain fixture") {
    const auto land = fixtures::chain();
    const auto r = relaxation_analysis(land);
    REQUIRE(r.gamma_m);
    CHECK(*r.gamma_m == 7);
    CHECK(r.metastable_set == StateSet{0, 2});
    CHECK(r.ground_states == StateSet{4});
    CHECK(r.stability[1] == 0);
    CHECK(r.stability[3] == 0);
    CHECK(std::isnan(r.stability[4]));
    check_same(r, relaxation_bruteforce(land));
    CHECK(r.partition_m == std::vector<StateSet>{{0}, {2}});
    const auto cand = pta_candidate_set(land, r);
    CHECK(cand.states == StateSet{0, 2, 4});
    CHECK(cand.choices == 1);
}

TEST_CASE("trivial and fully attracted landscapes") {
    LandscapeBuilder flat({1, 1, 1}, CostMode::metropolis);
    flat.add_edge(0, 1).add_edge(1, 2);
    const auto r = relaxation_analysis(std::move(flat).build());
    CHECK(r.trivial());
    CHECK(r.metastable_set.empty());

    // A downhill staircase: every non-ground state relaxes for free.
    const auto stairs = fixtures::chain({4, 3, 2, 1, 0});
    const auto s = relaxation_analysis(stairs);
    REQUIRE(s.gamma_m);
    CHECK(*s.gamma_m == 0);
    CHECK(s.metastable_set == StateSet{0, 1, 2, 3});
}

TEST_CASE("merge sweep matches the brute-force oracle on random landscapes") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 150; ++trial) {
        const auto land = fixtures::random_landscape(rng, 2 + trial % 59, trial % 3 == 0);
        check_same(relaxation_analysis(land), relaxation_bruteforce(land));
    }
}

TEST_CASE("stability level properties") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const auto land = fixtures::random_landscape(rng, 5 + trial, trial % 2 == 0);
        const auto r = relaxation_analysis(land);
        for (StateId x = 0; x < land.size(); ++x) {
            if (std::isnan(r.stability[x])) continue;
            CHECK(r.stability[x] >= -kEnergyTol);
            CHECK(std::abs(r.stability[x] - stability_level(land, x)) <= kEnergyTol);
            // V_x = 0 iff something strictly lower is reachable without climbing
            bool free_exit = false;
            for (StateId y = 0; y < land.size() && !free_exit; ++y)
                free_exit = strictly_below(land.energy(y), land.energy(x)) &&
                            communication_height(land, x, y) <= land.energy(x) + kEnergyTol;
            CHECK(free_exit == (r.stability[x] <= kEnergyTol));
        }
        // fully attracted iff Gamma_m = 0
        if (r.gamma_m) {
            bool all_free = true;
            for (StateId x = 0; x < land.size(); ++x)
                if (!std::isnan(r.stability[x]) && r.stability[x] > kEnergyTol) all_free = false;
            CHECK(all_free == (*r.gamma_m <= kEnergyTol));
        }
    }
}

TEST_CASE("sufficient conditions close the loop with necessity") {
    std::mt19937_64 rng(77);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto land = fixtures::random_landscape(rng, 4 + trial % 30, trial % 2 == 1);
        const auto r = relaxation_bruteforce(land);
        if (r.trivial()) continue;
        ++checked;
        CHECK(verify_necessity(land).pass);
        if (*r.gamma_m <= 0) continue;
        for (auto mode : {ConditionMode::path, ConditionMode::stability}) {
            CHECK(check_sufficient_conditions(land, r.metastable_set, *r.gamma_m, mode).pass);
            CHECK_FALSE(check_sufficient_conditions(land, r.metastable_set, *r.gamma_m + 0.5, mode).pass);
            if (*r.gamma_m > 0.5)
                CHECK_FALSE(check_sufficient_conditions(land, r.metastable_set, *r.gamma_m - 0.5, mode).pass);
            if (r.metastable_set.size() > 1) {
                StateSet fewer(r.metastable_set.begin() + 1, r.metastable_set.end());
                CHECK_FALSE(check_sufficient_conditions(land, fewer, *r.gamma_m, mode).pass);
            }
        }
    }
    CHECK(checked > 30);
}

TEST_CASE("condition checker argument errors") {
    const auto land = fixtures::chain();
    const StateId ground[] = {4};
    CHECK_THROWS_AS(check_sufficient_conditions(land, ground, 1, ConditionMode::path), InputError);
    const StateId a[] = {0};
    CHECK_THROWS_AS(check_sufficient_conditions(land, a, 0, ConditionMode::path), InputError);
    CHECK_THROWS_AS(check_sufficient_conditions(land, {}, 1, ConditionMode::path), InputError);
    LandscapeBuilder flat({1, 1}, CostMode::metropolis);
    flat.add_edge(0, 1);
    CHECK_THROWS_AS(verify_necessity(std::move(flat).build()), InputError);
}

TEST_CASE("pta candidate choices and hypothesis") {
    Partitions p{{{0, 1}, {2}}, {{3, 4, 5}}};
    const auto c = pta_candidate_set(p, true);
    CHECK(c.states == StateSet{0, 2, 3});
    CHECK(c.choices == 6);
    try {
        pta_candidate_set(p, false);
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("theorem hypothesis violated") != std::string::npos);
    }
}

TEST_CASE("equivalence classes group states that reach each other below gamma_m") {
    // two wells {0,1,2} at the same depth joined internally by a low ridge
    const auto land = fixtures::chain({2, 3, 2, 9, 0});
    const auto r = relaxation_analysis(land);
    REQUIRE(r.gamma_m);
    CHECK(*r.gamma_m == 7);
    CHECK(r.metastable_set == StateSet{0, 2});
    CHECK(r.partition_m == std::vector<StateSet>{{0, 2}});
}
