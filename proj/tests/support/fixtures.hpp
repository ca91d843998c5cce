#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "metastab/landscape.hpp"

namespace fixtures {

using metastab::CostMode;
using metastab::EnergyLandscape;
using metastab::LandscapeBuilder;
using metastab::StateId;

inline EnergyLandscape chain(std::vector<double> energies = {3, 10, 1, 8, 0}) {
    LandscapeBuilder b(energies, CostMode::metropolis);
    for (StateId i = 0; i + 1 < energies.size(); ++i) b.add_edge(i, i + 1);
    return std::move(b).build();
}

// Connected landscape on n states: a random spanning tree plus extra edges.
// Energies come from a small integer range half the time so ties occur;
// explicit-mode edges sit at random heights above both endpoints.
inline EnergyLandscape random_landscape(std::mt19937_64& rng, std::size_t n, bool explicit_costs) {
    std::uniform_int_distribution<int> coin(0, 1);
    const bool integer = coin(rng) == 1;
    std::uniform_int_distribution<int> small(0, 6);
    std::uniform_real_distribution<double> real(0.0, 10.0);
    std::vector<double> energy(n);
    for (auto& e : energy) e = integer ? small(rng) : real(rng);
    LandscapeBuilder b(energy, explicit_costs ? CostMode::explicit_costs : CostMode::metropolis);
    std::vector<std::pair<StateId, StateId>> edges;
    for (StateId x = 1; x < n; ++x) {
        std::uniform_int_distribution<StateId> pick(0, x - 1);
        edges.emplace_back(pick(rng), x);
    }
    std::uniform_int_distribution<StateId> any(0, static_cast<StateId>(n - 1));
    const std::size_t extra = n / 2 + n % 3;
    for (std::size_t k = 0; k < extra; ++k) {
        StateId a = any(rng), c = any(rng);
        if (a == c) continue;
        if (a > c) std::swap(a, c);
        if (std::find(edges.begin(), edges.end(), std::make_pair(a, c)) != edges.end()) continue;
        edges.emplace_back(a, c);
    }
    std::uniform_int_distribution<int> lift(0, 3);
    for (auto [a, c] : edges) {
        if (!explicit_costs) {
            b.add_edge(a, c);
            continue;
        }
        const double top = std::max(energy[a], energy[c]);
        const double height = top + (integer ? lift(rng) : real(rng) * 0.3);
        b.add_edge(a, c, height - energy[a], height - energy[c]);
    }
    return std::move(b).build();
}

}  // namespace fixtures
