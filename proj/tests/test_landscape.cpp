#include <sstream>

#include "doctest.h"
#include "metastab/heights.hpp"
#include "metastab/landscape.hpp"
#include "support/fixtures.hpp"

using namespace metastab;

TEST_CASE("builder rejects malformed structure") {
    CHECK_THROWS_AS(LandscapeBuilder({0, 1}, CostMode::metropolis).add_edge(0, 0), InputError);
    CHECK_THROWS_AS(LandscapeBuilder({0, 1}, CostMode::metropolis).add_edge(0, 2), InputError);
    CHECK_THROWS_AS(LandscapeBuilder({0, NAN}, CostMode::metropolis), InputError);
    LandscapeBuilder dup({0, 1}, CostMode::metropolis);
    dup.add_edge(0, 1).add_edge(1, 0);
    CHECK_THROWS_AS(std::move(dup).build(), InputError);
}

TEST_CASE("validation reports reversibility residuals and connectivity") {
    LandscapeBuilder b({0, 1, 2}, CostMode::explicit_costs);
    b.add_edge(0, 1, 1, 0).add_edge(1, 2, 1.5, 0);
    const auto land = std::move(b).build();
    const auto diag = validate_landscape(land);
    CHECK_FALSE(diag.pass());
    REQUIRE(diag.irreversible.size() == 1);
    CHECK(diag.irreversible[0].a == 1);
    CHECK(diag.max_residual == doctest::Approx(0.5));

    LandscapeBuilder split({0, 1, 2}, CostMode::metropolis);
    split.add_edge(0, 1);
    const auto diag2 = validate_landscape(std::move(split).build());
    CHECK_FALSE(diag2.connected);
    CHECK(diag2.components == 2);
    CHECK(validate_landscape(fixtures::chain()).pass());
}

TEST_CASE("text format round trip and line-numbered errors") {
    const auto land = fixtures::chain();
    std::stringstream ss;
    write_landscape(ss, land);
    const auto back = read_landscape(ss);
    REQUIRE(back.size() == land.size());
    for (StateId x = 0; x < land.size(); ++x) CHECK(back.energy(x) == land.energy(x));
    CHECK(back.edges().size() == land.edges().size());

    std::istringstream bad("landscape v1\nmode metropolis\nstates 2\ns 0 0\ns 1 zz\ne 0 1\n");
    try {
        read_landscape(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 5);
    }
    std::istringstream header("landscape v2\n");
    CHECK_THROWS_AS(read_landscape(header), ParseError);
}

TEST_CASE("communication heights on the chain") {
    const auto land = fixtures::chain();
    CHECK(communication_height(land, 0, 4) == 10);
    CHECK(communication_height(land, 2, 4) == 8);
    CHECK(communication_height(land, 3, 3) == 8);
    const StateId path[] = {0, 1, 2};
    CHECK(path_height(land, path) == 10);
    const StateId single[] = {0};
    CHECK_THROWS_AS(path_height(land, single), InputError);
    CHECK(stability_level(land, 0) == 7);
    CHECK(stability_level(land, 2) == 7);
    CHECK(stability_level(land, 1) == 0);
    CHECK_THROWS_AS(stability_level(land, 4), InputError);
    CHECK(ground_states(land) == std::vector<StateId>{4});
}

TEST_CASE("explicit costs add to the path height") {
    LandscapeBuilder b({0, 2}, CostMode::explicit_costs);
    b.add_edge(0, 1, 5, 3);
    const auto land = std::move(b).build();
    CHECK(communication_height(land, 0, 1) == 5);
    CHECK(land.cost(0, 0) == 5);
    CHECK(land.cost(1, 0) == 3);
}

TEST_CASE("Phi is symmetric and metropolis Phi is the classical min-max energy") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const bool expl = trial % 2 == 1;
        const auto land = fixtures::random_landscape(rng, 8 + trial % 20, expl);
        REQUIRE(validate_landscape(land).pass());
        const auto n = static_cast<StateId>(land.size());
        for (StateId y = 0; y < n; y += 3)
            for (StateId z = 0; z < n; z += 2) {
                const double f = communication_height(land, y, z);
                CHECK(f == communication_height(land, z, y));
                CHECK(f >= std::max(land.energy(y), land.energy(z)) - kEnergyTol);
            }
        if (!expl) {
            // widest path by brute force: smallest level at which y and z connect
            std::vector<double> levels(land.energies().begin(), land.energies().end());
            std::sort(levels.begin(), levels.end());
            for (StateId z = 1; z < n; ++z) {
                double found = INFINITY;
                for (double lvl : levels) {
                    std::vector<char> seen(n, 0);
                    std::vector<StateId> stack;
                    if (land.energy(0) <= lvl) {
                        stack.push_back(0);
                        seen[0] = 1;
                    }
                    while (!stack.empty()) {
                        const StateId x = stack.back();
                        stack.pop_back();
                        for (const auto& nb : land.neighbors(x))
                            if (!seen[nb.to] && land.energy(nb.to) <= lvl) {
                                seen[nb.to] = 1;
                                stack.push_back(nb.to);
                            }
                    }
                    if (seen[z]) {
                        found = lvl;
                        break;
                    }
                }
                CHECK(communication_height(land, 0, z) == found);
            }
        }
    }
}
