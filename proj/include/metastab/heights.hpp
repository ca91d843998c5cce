#pragma once

#include <span>
#include <vector>

#include "metastab/landscape.hpp"

namespace metastab {

// max_i H(w_i) + Delta(w_i, w_{i+1}); needs at least one transition.
double path_height(const EnergyLandscape& landscape, std::span<const StateId> path);

// Phi(y, z). Phi(x, x) = H(x).
double communication_height(const EnergyLandscape& landscape, StateId y, StateId z);

// Phi(sources, x) for every x, by a multi-source min-max Dijkstra.
std::vector<double> communication_levels(const EnergyLandscape& landscape, std::span<const StateId> sources);

// min over y in Y, z in Z of Phi(y, z).
double communication_height_sets(const EnergyLandscape& landscape, std::span<const StateId> ys,
                                 std::span<const StateId> zs);

// F(Y): states of Y at minimal energy, ascending ids.
std::vector<StateId> minima_of(const EnergyLandscape& landscape, std::span<const StateId> ys);
std::vector<StateId> ground_states(const EnergyLandscape& landscape);

// V_x = Phi(x, I_x) - H(x). Throws for ground states.
double stability_level(const EnergyLandscape& landscape, StateId x);

}  // namespace metastab
