#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace metastab {

using StateId = std::uint32_t;

// Energies closer than this are the same energy.
inline constexpr double kEnergyTol = 1e-9;

inline bool same_energy(double a, double b) { return a - b <= kEnergyTol && b - a <= kEnergyTol; }
inline bool strictly_below(double a, double b) { return a < b - kEnergyTol; }

// Malformed input: bad arguments, unparsable files, violated preconditions.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A desk-scale bound (memory budget, enumeration bound) was exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace metastab
