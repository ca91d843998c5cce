#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "metastab/blume_capel.hpp"

namespace checks {

struct FlipTally {
    long item1 = 0, item2 = 0, item3 = 0;
    long violations = 0;
    long mismatches = 0;  // incremental delta != full recompute
};

inline metastab::bc::SpinConfiguration random_config(int L, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> spin(-1, 1);
    // mix fully random lattices with droplet-like ones so that all premises occur
    std::bernoulli_distribution biased(0.5);
    const bool droplet = biased(rng);
    std::vector<metastab::bc::Spin> s(static_cast<std::size_t>(L) * L);
    std::uniform_int_distribution<int> pos(0, L - 1), len(1, L / 2 + 1);
    if (!droplet) {
        for (auto& x : s) x = static_cast<metastab::bc::Spin>(spin(rng));
    } else {
        const auto bg = static_cast<metastab::bc::Spin>(spin(rng));
        for (auto& x : s) x = bg;
        const int r0 = pos(rng), c0 = pos(rng), h = len(rng), w = len(rng);
        const auto fg = static_cast<metastab::bc::Spin>(spin(rng));
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) s[((r0 + r) % L) * L + (c0 + c) % L] = fg;
        if (biased(rng)) s[pos(rng) * L + pos(rng)] = static_cast<metastab::bc::Spin>(spin(rng));
    }
    return {L, std::move(s)};
}

// One flip checked against full recomputation: integer parts exactly, the
// real-valued delta to rounding. Returns the real-valued discrepancy.
inline double check_incremental(const metastab::bc::SpinConfiguration& config, std::size_t site,
                                metastab::bc::Spin a, const metastab::bc::ModelParams& p, FlipTally& t) {
    using namespace metastab::bc;
    const EnergyParts base = energy_parts(config);
    auto flipped = config;
    flipped.set(site, a);
    const EnergyParts full = energy_parts(flipped);
    const EnergyParts d = single_flip_parts(config, site, a);
    const EnergyParts inc{base.bond + d.bond, base.magnet + d.magnet, base.nonzero + d.nonzero};
    const double gap = std::abs(single_flip_delta(config, site, a, p) - (full.value(p) - base.value(p)));
    if (!(inc == full) || gap > 1e-9) ++t.mismatches;
    return gap;
}

// Every site matching one of the three flip-energy premises, each stated as
// H(sigma) - H(flipped) = h (item 1) or >= h (items 2, 3).
inline void check_flip_bounds(const metastab::bc::SpinConfiguration& config, const metastab::bc::ModelParams& p,
                              FlipTally& t) {
    using namespace metastab::bc;
    const double h = p.h;
    for (std::size_t i = 0; i < config.sites(); ++i) {
        int nm = 0, nz = 0, np = 0;
        for (auto j : config.neighbors(i)) {
            const Spin s = config[j];
            nm += s == -1;
            nz += s == 0;
            np += s == 1;
        }
        const Spin si = config[i];
        if (si == -1 && nm == 3 && np == 1) {
            ++t.item1;
            if (std::abs(single_flip_delta(config, i, 0, p) + h) > 1e-12) ++t.violations;
        }
        if (si == -1 && nm <= 2) {
            ++t.item2;
            if (-single_flip_delta(config, i, 0, p) < h - 1e-12) ++t.violations;
        }
        if (si == 0 && nz <= 2 && nz + np == 4) {
            ++t.item3;
            if (-single_flip_delta(config, i, 1, p) < h - 1e-12) ++t.violations;
        }
    }
}

// Both checks, with every alternative spin at every site recomputed in full.
inline void check_flips(const metastab::bc::SpinConfiguration& config, const metastab::bc::ModelParams& p,
                        FlipTally& t) {
    for (std::size_t i = 0; i < config.sites(); ++i)
        for (metastab::bc::Spin a = -1; a <= 1; ++a)
            if (a != config[i]) check_incremental(config, i, a, p, t);
    check_flip_bounds(config, p, t);
}

}  // namespace checks
