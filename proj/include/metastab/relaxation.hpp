#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metastab/landscape.hpp"

namespace metastab {

using StateSet = std::vector<StateId>;  // sorted, unique

/// Maximal stability level, metastable set and the ~ partitions.
///
/// `stability[x]` is V_x for non-ground states and NaN for ground states.
/// When every state is a ground state the landscape is trivial: `gamma_m`
/// is empty and `metastable_set` is empty.
struct RelaxationReport {
    std::optional<double> gamma_m;
    StateSet metastable_set;
    StateSet ground_states;
    std::vector<double> stability;
    std::vector<StateSet> partition_m;
    std::vector<StateSet> partition_s;

    bool trivial() const { return !gamma_m.has_value(); }
};

// Merge sweep over edges sorted by height (Kruskal order); equal heights
// within kEnergyTol are one batch.
RelaxationReport relaxation_analysis(const EnergyLandscape& landscape);

// Independent oracle: one min-max Dijkstra per non-ground state.
RelaxationReport relaxation_bruteforce(const EnergyLandscape& landscape);

struct Partitions {
    std::vector<StateSet> metastable;
    std::vector<StateSet> ground;
};

// Classes of x ~ y  <=>  Phi(x,y) - H(x) < gamma_m and Phi(y,x) - H(y) < gamma_m,
// restricted to X_m and to X_s. Classes are ordered by their smallest member.
Partitions equivalence_partition(const EnergyLandscape& landscape, double gamma_m,
                                 std::span<const StateId> metastable_set,
                                 std::span<const StateId> ground_states);

struct PtaCandidate {
    StateSet states;          // lowest id of each class
    std::uint64_t choices;    // product of class sizes (saturating)
};

// One representative per class of X_m and X_s. `non_trivial_rest` must say
// whether X \ (X_s u X_m) is nonempty; the construction needs it.
PtaCandidate pta_candidate_set(const Partitions& partitions, bool non_trivial_rest);
PtaCandidate pta_candidate_set(const EnergyLandscape& landscape, const RelaxationReport& report);

enum class ConditionMode { path, stability };

struct ConditionVerdict {
    bool pass = false;
    int failed_clause = 0;                  // 1 or 2 when failing
    std::optional<StateId> violating_state;
    std::string message;
};

// Checks the two hypotheses that certify Gamma_m = a and X_m = A.
ConditionVerdict check_sufficient_conditions(const EnergyLandscape& landscape, std::span<const StateId> a_set,
                                             double a, ConditionMode mode);

// Phi(x, X_s) - H(x) = Gamma_m on X_m and < Gamma_m on the other non-ground states.
ConditionVerdict verify_necessity(const EnergyLandscape& landscape);

}  // namespace metastab
