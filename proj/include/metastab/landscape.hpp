#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "metastab/common.hpp"

namespace metastab {

enum class CostMode { metropolis, explicit_costs };

// Undirected edge of the connectivity relation with its two directed costs.
// `height` is the common value H(a)+cost_ab = H(b)+cost_ba used by every
// min-max search, so both directions see the same number.
struct Edge {
    StateId a;
    StateId b;
    double cost_ab;
    double cost_ba;
    double height;
};

struct Neighbor {
    StateId to;
    std::uint32_t edge;
};

class LandscapeBuilder;

/// Finite energy landscape (X, Q, H, Delta). Immutable once built; use
/// LandscapeBuilder to assemble one.
class EnergyLandscape {
public:
    std::size_t size() const { return energy_.size(); }
    CostMode mode() const { return mode_; }

    double energy(StateId x) const { return energy_[x]; }
    std::span<const double> energies() const { return energy_; }

    std::span<const Edge> edges() const { return edges_; }
    std::span<const Neighbor> neighbors(StateId x) const {
        return {adjacency_.data() + offsets_[x], adjacency_.data() + offsets_[x + 1]};
    }
    std::size_t degree(StateId x) const { return offsets_[x + 1] - offsets_[x]; }

    // Delta(from, to) along edge `e`, which must join the two states.
    double cost(StateId from, std::uint32_t e) const {
        const Edge& ed = edges_[e];
        return from == ed.a ? ed.cost_ab : ed.cost_ba;
    }
    // Index of the edge joining x and y, or -1.
    long find_edge(StateId x, StateId y) const;

    double min_energy() const { return min_energy_; }

private:
    friend class LandscapeBuilder;
    EnergyLandscape() = default;

    CostMode mode_ = CostMode::metropolis;
    std::vector<double> energy_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<Neighbor> adjacency_;
    double min_energy_ = 0.0;
};

class LandscapeBuilder {
public:
    LandscapeBuilder(std::vector<double> energy, CostMode mode);

    // Metropolis edge: costs are derived from the energies.
    LandscapeBuilder& add_edge(StateId a, StateId b);
    // Explicit edge with both directed costs.
    LandscapeBuilder& add_edge(StateId a, StateId b, double cost_ab, double cost_ba);

    std::size_t size() const { return energy_.size(); }
    EnergyLandscape build() &&;

private:
    void check_pair(StateId a, StateId b) const;

    CostMode mode_;
    std::vector<double> energy_;
    std::vector<Edge> edges_;
};

struct EdgeResidual {
    std::uint32_t edge;
    StateId a;
    StateId b;
    double residual;
};

struct LandscapeDiagnostics {
    bool connected = false;
    std::size_t components = 0;
    double max_residual = 0.0;
    std::vector<EdgeResidual> irreversible;  // residual > 1e-9
    std::vector<EdgeResidual> negative_cost;  // some directed cost < 0
    bool pass() const { return connected && irreversible.empty() && negative_cost.empty(); }
};

inline constexpr double kReversibilityTol = 1e-9;

LandscapeDiagnostics validate_landscape(const EnergyLandscape& landscape);

// Throws InputError unless validate_landscape passes.
void require_valid(const EnergyLandscape& landscape);

// Text format "landscape v1". Parse errors throw ParseError with a line number.
class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

EnergyLandscape read_landscape(std::istream& in);
EnergyLandscape read_landscape_file(const std::string& path);
void write_landscape(std::ostream& out, const EnergyLandscape& landscape);

}  // namespace metastab
