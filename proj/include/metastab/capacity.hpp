#pragma once

#include <span>
#include <vector>

#include "metastab/landscape.hpp"
#include "metastab/relaxation.hpp"

namespace metastab {

// Symmetric connectivity weights q, one per undirected edge of the landscape.
struct Connectivity {
    std::vector<double> q;
};

// q = 1 / (max degree) on every edge; rows sum to at most one.
Connectivity uniform_connectivity(const EnergyLandscape& landscape);

struct EdgeWeight {
    StateId x;
    StateId y;
    double q;
};
// Throws InputError for a weight on a non-edge, asymmetric duplicates, a
// missing edge, or a row sum above one.
Connectivity connectivity_from(const EnergyLandscape& landscape, std::span<const EdgeWeight> weights);

struct GibbsMeasure {
    double beta = 0.0;
    double log_partition = 0.0;      // log Z_beta
    std::vector<double> log_prob;    // log mu_beta(x)
    std::vector<double> prob;        // mu_beta(x); may underflow to 0

    double log_mass(std::span<const StateId> set) const;
};

GibbsMeasure gibbs_measure(const EnergyLandscape& landscape, double beta);

/// Metropolis-type chain p_beta(x,y) = q(x,y) exp(-beta Delta(x,y)) off the
/// diagonal, holding probability on the diagonal.
///
/// Delta is taken as (edge height - H(x)) so that detailed balance holds to
/// rounding even for explicit costs that are reversible only within 1e-9.
/// The chain keeps a pointer to the landscape, which must outlive it.
class MarkovChain {
public:
    MarkovChain(const EnergyLandscape& landscape, Connectivity connectivity, double beta);

    const EnergyLandscape& landscape() const { return *landscape_; }
    double beta() const { return beta_; }
    const GibbsMeasure& gibbs() const { return gibbs_; }
    double q(std::uint32_t edge) const { return connectivity_.q[edge]; }
    const Connectivity& connectivity() const { return connectivity_; }

    // p_beta(x, y) along edge `e` leaving x.
    double transition(StateId x, std::uint32_t e) const;
    double log_transition(StateId x, std::uint32_t e) const;
    // sum over y != x of p_beta(x, y), summed directly (no 1 - p(x,x)).
    double escape(StateId x) const { return escape_[x]; }
    double holding(StateId x) const { return 1.0 - escape_[x]; }
    // log of the edge conductance mu(x) p(x,y), symmetric.
    double log_conductance(std::uint32_t e) const;

    double max_row_sum_error() const;
    double detailed_balance_residual() const;

private:
    const EnergyLandscape* landscape_;
    Connectivity connectivity_;
    double beta_;
    GibbsMeasure gibbs_;
    std::vector<double> escape_;
};

// Half the sum over ordered pairs of mu(x) p(x,y) (h(x) - h(y))^2.
struct FormValue {
    double value = 0.0;
    double log_value = 0.0;  // -inf when value is zero
};
FormValue dirichlet_form(const MarkovChain& chain, std::span<const double> h);

// h*_{A,B}: harmonic off A u B, 1 on A, 0 on B. Direct LU on the harmonic
// equations (dense up to 2000 states, sparse LU above).
std::vector<double> equilibrium_potential(const MarkovChain& chain, std::span<const StateId> a_set,
                                          std::span<const StateId> b_set);

// P_x(tau_A < tau_B) by eliminating the free states one at a time from the
// absorbing chain (GTH-style, subtraction free). Dense; intended as the
// cross-check of equilibrium_potential.
std::vector<double> absorption_probability(const MarkovChain& chain, std::span<const StateId> a_set,
                                           std::span<const StateId> b_set);

struct CapacityResult {
    StateSet a_set;
    StateSet b_set;
    double beta = 0.0;
    double capacity = 0.0;
    double log_capacity = 0.0;
    std::vector<double> potential;
};

CapacityResult capacity_of(const MarkovChain& chain, std::span<const StateId> a_set, std::span<const StateId> b_set);

struct EasyBoundsProbe {
    std::vector<double> beta;
    std::vector<double> g;      // e^{beta Phi(A,B)} Z_beta CAP_beta(A,B); inf if out of range
    std::vector<double> log_g;
    double min_g = 0.0;
    double max_g = 0.0;
    double final_slope = 0.0;   // |d log g / d beta| over the last grid step
};

EasyBoundsProbe easy_bounds_probe(const EnergyLandscape& landscape, const Connectivity& connectivity,
                                  std::span<const StateId> a_set, std::span<const StateId> b_set,
                                  std::span<const double> beta_grid);

struct PtaRatio {
    double ratio = 0.0;
    double log_ratio = 0.0;
};

// max_{x not in M} mu(x)/CAP(x,M) over min_{x in M} mu(x)/CAP(x, M\{x}).
PtaRatio pta_ratio(const EnergyLandscape& landscape, const Connectivity& connectivity,
                   std::span<const StateId> m_set, double beta);

struct PtaDecay {
    std::vector<double> beta;
    std::vector<double> log_ratio;
    double slope = 0.0;
    bool metastable = false;  // slope < -0.01
};

inline constexpr double kPtaSlopeThreshold = -0.01;

PtaDecay pta_decay(const EnergyLandscape& landscape, const Connectivity& connectivity,
                   std::span<const StateId> m_set, std::span<const double> beta_grid);

// A(x) = {y : P_y(tau_x = tau_M) = max_z P_y(tau_z = tau_M)}.
StateSet valley_of(const MarkovChain& chain, std::span<const StateId> m_set, StateId x);

struct MeanHitting {
    double exact = 0.0;           // E_x[tau_J]
    double log_exact = 0.0;
    double estimate = 0.0;        // mu(A(x)) / CAP(x, J), valley taken w.r.t. {x} u J
    double log_estimate = 0.0;
    double ratio = 1.0;           // exact / estimate
};

MeanHitting mean_hitting_exact(const MarkovChain& chain, StateId x, std::span<const StateId> j_set);

// E_x[tau_J] for every x (0 on J).
std::vector<double> mean_hitting_times(const MarkovChain& chain, std::span<const StateId> j_set);

/// The chain lumped along a partition it respects: every member of a block
/// sends the same mass into each other block. Dense, up to 2000 blocks.
class LumpedChain {
public:
    LumpedChain(const MarkovChain& chain, std::span<const std::uint32_t> block_of);

    std::size_t blocks() const { return reps_.size(); }
    std::uint32_t block_of(StateId x) const { return block_of_[x]; }
    StateId representative(std::uint32_t b) const { return reps_[b]; }
    // Largest deviation between members of a block; InputError above 1e-9.
    double lumpability_residual() const { return residual_; }

    // E[tau_J] from each block (0 on J).
    std::vector<double> mean_hitting_times(std::span<const std::uint32_t> j_blocks) const;
    // P(tau_A < tau_B) from each block.
    std::vector<double> hitting_probability(std::span<const std::uint32_t> a_blocks,
                                            std::span<const std::uint32_t> b_blocks) const;

private:
    std::vector<std::uint32_t> block_of_;
    std::vector<StateId> reps_;
    std::vector<double> jump_;  // blocks x blocks, mass into other blocks, row-major
    double residual_ = 0.0;
};

}  // namespace metastab
