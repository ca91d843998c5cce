#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "metastab/landscape.hpp"
#include "metastab/markov.hpp"
#include "metastab/polyomino.hpp"

namespace metastab::bc {

struct ModelParams {
    int L = 2;
    double h = 0.0;
    double lambda = 0.0;
};

// Checks of the standing assumptions on (h, L). Violations are warnings.
struct ConditionReport {
    bool h_in_unit_interval = false;    // 0 < h < 1
    bool two_over_h_not_integer = false;
    bool volume_ok = false;             // L^2 >= 49 / h^4
    double volume_required = 0.0;       // 49 / h^4
    bool ok = false;
    std::vector<std::string> warnings;
};

ConditionReport condition_report(const ModelParams& params);
// L >= 2 and finite h, lambda; throws InputError otherwise.
void validate_params(const ModelParams& params);
// Droplet, path and barrier statements only hold at lambda = 0.
void require_zero_lambda(const ModelParams& params);

using Spin = std::int8_t;

/// Spins on an L x L torus, row-major.
class SpinConfiguration {
public:
    SpinConfiguration(int L, Spin fill);
    SpinConfiguration(int L, std::vector<Spin> spins);

    int side() const { return L_; }
    std::size_t sites() const { return spins_.size(); }
    Spin operator[](std::size_t i) const { return spins_[i]; }
    Spin at(int r, int c) const { return spins_[index(r, c)]; }
    void set(std::size_t i, Spin s);
    void set(int r, int c, Spin s) { set(index(r, c), s); }
    std::size_t index(int r, int c) const;
    std::array<std::size_t, 4> neighbors(std::size_t i) const;
    const std::vector<Spin>& spins() const { return spins_; }

    // Base-3 digits in row-major order, digit = spin + 1, site 0 most
    // significant. Needs L <= 5.
    std::uint64_t encode() const;
    static SpinConfiguration decode(int L, std::uint64_t id);

    bool operator==(const SpinConfiguration&) const = default;

private:
    int L_;
    std::vector<Spin> spins_;
};

// d = all minus, 0 = all zero, u = all plus.
SpinConfiguration phase_d(int L);
SpinConfiguration phase_0(int L);
SpinConfiguration phase_u(int L);

// H = bond - lambda * nonzero - h * magnet with integer parts.
struct EnergyParts {
    long bond = 0;     // sum over the 2L^2 torus bonds of (s_i - s_j)^2
    long magnet = 0;   // sum of spins
    long nonzero = 0;  // sum of s_i^2
    double value(const ModelParams& p) const {
        return static_cast<double>(bond) - p.lambda * static_cast<double>(nonzero) - p.h * static_cast<double>(magnet);
    }
    bool operator==(const EnergyParts&) const = default;
};

EnergyParts energy_parts(const SpinConfiguration& config);
double hamiltonian(const SpinConfiguration& config, const ModelParams& params);

// Change of each part when `site` is set to new_spin.
EnergyParts single_flip_parts(const SpinConfiguration& config, std::size_t site, Spin new_spin);
// H(config with site set to new_spin) - H(config), from the four neighbours.
double single_flip_delta(const SpinConfiguration& config, std::size_t site, Spin new_spin,
                         const ModelParams& params);

struct CriticalQuantities {
    int lc = 0;
    double gamma_c = 0.0;
    bool bounds_hold = false;  // 2/h < lc < 2/h + 1 and lc >= 3
    ConditionReport condition;
};
// lc = floor(2/h) + 1, gamma_c = 4 lc - h (lc (lc - 1) + 1).
CriticalQuantities critical_quantities(const ModelParams& params);

enum class PhasePair { zero_in_minus, plus_in_zero };
enum class DropletSet { P_c, Q_c };

Spin background_spin(PhasePair phases);
Spin foreground_spin(PhasePair phases);

/// lc x (lc - 1) rectangle plus one protuberance on a longest side.
struct DropletSpec {
    int row = 0;               // top-left corner of the rectangle
    int col = 0;
    bool horizontal = true;    // true: lc columns, lc-1 rows (long sides top/bottom)
    bool far_side = false;     // false: top (or left) long side; true: bottom (or right)
    int offset = 0;            // 0 <= offset < lc along the long side
    PhasePair phases = PhasePair::zero_in_minus;
};

SpinConfiguration droplet_config(const DropletSpec& spec, const ModelParams& params);
bool is_critical_droplet(const SpinConfiguration& config, const ModelParams& params, DropletSet which);

struct ReferencePath {
    std::vector<SpinConfiguration> states;  // d ... 0 ... u
    std::vector<double> energy;
    std::size_t zero_index = 0;             // position of the all-zero state
    // Energies relative to the leg's start, leg 1 from d, leg 2 from 0.
    std::vector<double> leg1_excess;
    std::vector<double> leg2_excess;
};
ReferencePath reference_path(const ModelParams& params);

enum class Manifold { X_minus, X_zero };
bool manifold_membership(const SpinConfiguration& config, const ModelParams& params, Manifold which);

// Energy of the droplet over its background phase: perimeter - h area, plus
// the lambda term.
double droplet_energy(const Polyomino& poly, const ModelParams& params, PhasePair phases);
// The polyomino placed at the origin on the background phase.
SpinConfiguration realize(const Polyomino& poly, int L, PhasePair phases);

// Bytes needed to materialize the landscape of an L x L torus.
double enumeration_memory_estimate(int L);
inline constexpr double kDefaultMemoryBudget = 2.0 * 1024 * 1024 * 1024;
// All 3^(L^2) configurations, metropolis mode, single-flip edges. State ids
// are the base-3 codes.
EnergyLandscape enumerate_torus(const ModelParams& params, double memory_budget = kDefaultMemoryBudget);

// Orbit label of every base-3 code under torus translations and the eight
// lattice symmetries; labels are numbered in order of first appearance.
std::vector<std::uint32_t> symmetry_blocks(int L);

std::string to_grid(const SpinConfiguration& config);
SpinConfiguration parse_grid(std::istream& in);
SpinConfiguration parse_grid(const std::string& text);

/// Single-flip Metropolis dynamics: pick a site uniformly, then one of its
/// two other values, so q = 1/(2 L^2) per proposal.
class Dynamics {
public:
    explicit Dynamics(ModelParams params);

    struct State {
        SpinConfiguration config;
        EnergyParts parts;
        explicit State(SpinConfiguration c) : config(std::move(c)), parts(energy_parts(config)) {}
        long plus() const { return (parts.nonzero + parts.magnet) / 2; }
        long minus() const { return (parts.nonzero - parts.magnet) / 2; }
        long zero() const { return static_cast<long>(config.sites()) - parts.nonzero; }
    };

    class Sampler {
    public:
        using State = Dynamics::State;
        bool step(State& s, Rng& rng) const;

    private:
        friend class Dynamics;
        // Acceptance indexed by (d bond + 16, d magnet + 2, d nonzero + 1).
        std::vector<double> accept_;
    };

    Sampler at_beta(double beta) const;
    const ModelParams& params() const { return params_; }
    std::size_t proposals() const { return 2u * static_cast<std::size_t>(params_.L) * params_.L; }
    double proposal_probability() const { return 1.0 / static_cast<double>(proposals()); }

private:
    ModelParams params_;
};

}  // namespace metastab::bc
