#pragma once

#include <span>
#include <vector>

#include "metastab/landscape.hpp"
#include "metastab/relaxation.hpp"

namespace metastab {

inline constexpr std::size_t kGateEnumerationBound = 25;

// States at energy Phi(sigma, eta) on some optimal path from sigma to eta.
// When Phi equals the higher endpoint energy that endpoint is the saddle.
StateSet optimal_saddles(const EnergyLandscape& landscape, StateId sigma, StateId eta);

// Every state of `ys` sits at Phi(sigma, eta) and every optimal path meets `ys`.
bool is_gate(const EnergyLandscape& landscape, std::span<const StateId> ys, StateId sigma, StateId eta);

/// Inclusion-minimal gates for (sigma, eta), sorted lexicographically.
///
/// Optimal paths live in the sub-landscape reachable from sigma through
/// edges no higher than Phi(sigma, eta). Sub-saddle states there cannot be
/// removed, so each connected cluster of them is contracted into one
/// undeletable node; minimal gates are then the minimal vertex separators
/// of sigma and eta made of saddle nodes only, listed by moving one
/// separator vertex at a time to the sigma side.
///
/// Throws ResourceError when more than `max_candidates` saddles can belong
/// to a minimal gate (those adjacent to both the sigma and eta sides of the
/// saddle level).
std::vector<StateSet> minimal_gates(const EnergyLandscape& landscape, StateId sigma, StateId eta,
                                    std::size_t max_candidates = kGateEnumerationBound);

// Union of the minimal gates.
StateSet essential_saddles(std::span<const StateSet> gates);

}  // namespace metastab
