#include <algorithm>

#include "doctest.h"
#include "metastab/gates.hpp"
#include "metastab/heights.hpp"
#include "support/fixtures.hpp"

using namespace metastab;

namespace {

// Every subset of the saddle set, checked with is_gate; keeps the
// inclusion-minimal ones.
std::vector<StateSet> gates_by_subsets(const EnergyLandscape& land, StateId s, StateId t) {
    const StateSet saddles = optimal_saddles(land, s, t);
    REQUIRE(saddles.size() <= 16);
    std::vector<std::uint32_t> gate_masks;
    const std::uint32_t full = 1u << saddles.size();
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        StateSet ys;
        for (std::size_t i = 0; i < saddles.size(); ++i)
            if (mask >> i & 1u) ys.push_back(saddles[i]);
        if (is_gate(land, ys, s, t)) gate_masks.push_back(mask);
    }
    std::vector<StateSet> out;
    for (auto m : gate_masks) {
        bool minimal = true;
        for (auto o : gate_masks)
            if (o != m && (o & m) == o) minimal = false;
        if (!minimal) continue;
        StateSet ys;
        for (std::size_t i = 0; i < saddles.size(); ++i)
            if (m >> i & 1u) ys.push_back(saddles[i]);
        out.push_back(ys);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("chain gates") {
    const auto land = fixtures::chain();
    CHECK(optimal_saddles(land, 0, 4) == StateSet{1});
    const StateId g[] = {1};
    CHECK(is_gate(land, g, 0, 4));
    const StateId wrong[] = {3};
    CHECK_FALSE(is_gate(land, wrong, 0, 4));
    const auto gates = minimal_gates(land, 0, 4);
    CHECK(gates == std::vector<StateSet>{{1}});
    CHECK(essential_saddles(gates) == StateSet{1});
    CHECK_THROWS_AS(optimal_saddles(land, 2, 2), InputError);
}

TEST_CASE("parallel saddles form one two-element gate") {
    // 0 - a - 3 and 0 - b - 3 with a, b at the same height
    LandscapeBuilder b({0, 5, 5, 1}, CostMode::metropolis);
    b.add_edge(0, 1).add_edge(1, 3).add_edge(0, 2).add_edge(2, 3);
    const auto land = std::move(b).build();
    CHECK(minimal_gates(land, 0, 3) == std::vector<StateSet>{{1, 2}});

    // make one branch higher: only the lower saddle is used
    LandscapeBuilder c({0, 5, 6, 1}, CostMode::metropolis);
    c.add_edge(0, 1).add_edge(1, 3).add_edge(0, 2).add_edge(2, 3);
    CHECK(minimal_gates(std::move(c).build(), 0, 3) == std::vector<StateSet>{{1}});

    // saddles in series: either one is a gate
    LandscapeBuilder d({0, 5, 2, 5, 1}, CostMode::metropolis);
    d.add_edge(0, 1).add_edge(1, 2).add_edge(2, 3).add_edge(3, 4);
    CHECK(minimal_gates(std::move(d).build(), 0, 4) == std::vector<StateSet>{{1}, {3}});
}

TEST_CASE("endpoint at the saddle level is its own gate") {
    const auto land = fixtures::chain({0, 5});
    CHECK(optimal_saddles(land, 0, 1) == StateSet{1});
    CHECK(minimal_gates(land, 0, 1) == std::vector<StateSet>{{1}});
}

TEST_CASE("separator enumeration matches subset search on random landscapes") {
    std::mt19937_64 rng(99);
    int compared = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const auto land = fixtures::random_landscape(rng, 4 + trial % 18, trial % 4 == 3);
        std::uniform_int_distribution<StateId> pick(0, static_cast<StateId>(land.size() - 1));
        const StateId s = pick(rng), t = pick(rng);
        if (s == t) continue;
        if (optimal_saddles(land, s, t).size() > 14) continue;
        const auto fast = minimal_gates(land, s, t, 64);
        CHECK(fast == gates_by_subsets(land, s, t));
        for (const auto& g : fast) {
            CHECK(is_gate(land, g, s, t));
            for (std::size_t i = 0; i < g.size(); ++i) {
                StateSet smaller = g;
                smaller.erase(smaller.begin() + static_cast<long>(i));
                if (!smaller.empty()) CHECK_FALSE(is_gate(land, smaller, s, t));
            }
        }
        ++compared;
    }
    CHECK(compared > 300);
}

TEST_CASE("gates are invariant under relabeling") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const auto land = fixtures::random_landscape(rng, 12, false);
        const auto n = static_cast<StateId>(land.size());
        std::vector<StateId> perm(n);
        for (StateId i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> e(n);
        for (StateId x = 0; x < n; ++x) e[perm[x]] = land.energy(x);
        LandscapeBuilder b(e, CostMode::metropolis);
        for (const auto& ed : land.edges()) b.add_edge(perm[ed.a], perm[ed.b]);
        const auto moved = std::move(b).build();
        const auto g1 = essential_saddles(minimal_gates(land, 0, n - 1, 64));
        StateSet mapped;
        for (StateId x : g1) mapped.push_back(perm[x]);
        std::sort(mapped.begin(), mapped.end());
        CHECK(mapped == essential_saddles(minimal_gates(moved, perm[0], perm[n - 1], 64)));
    }
}

TEST_CASE("enumeration bound") {
    // a star of 30 parallel saddles between two wells
    std::vector<double> e{0, 1};
    for (int i = 0; i < 30; ++i) e.push_back(5);
    LandscapeBuilder b(e, CostMode::metropolis);
    for (StateId i = 2; i < e.size(); ++i) b.add_edge(0, i).add_edge(i, 1);
    const auto land = std::move(b).build();
    try {
        minimal_gates(land, 0, 1);
        FAIL("expected a resource error");
    } catch (const ResourceError& err) {
        CHECK(std::string(err.what()).find("exceeds enumeration bound") != std::string::npos);
    }
    CHECK(minimal_gates(land, 0, 1, 30).size() == 1);
}
