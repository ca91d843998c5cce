#pragma once

#include <cmath>
#include <concepts>
#include <functional>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "metastab/capacity.hpp"
#include "metastab/landscape.hpp"
#include "metastab/stats.hpp"

namespace metastab {

using Rng = std::mt19937_64;

// splitmix64 finalizer; replica streams are seeded with
// mix(master, beta index, replica) so results do not depend on scheduling.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t beta_index, std::uint64_t replica);

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
// Uniform integer in [0, n), n > 0, by rejection.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

/// A dynamics bound to one inverse temperature. `step` performs one
/// Metropolis transition (propose w with probability q(x,w), accept with
/// probability exp(-beta Delta)) and reports whether the state moved.
template <class S>
concept MetropolisSampler = requires(const S& s, typename S::State& state, Rng& rng) {
    typename S::State;
    { s.step(state, rng) } -> std::same_as<bool>;
};

template <class M>
concept MetropolisModel = requires(const M& m, double beta) {
    { m.at_beta(beta) } -> MetropolisSampler;
};

template <MetropolisSampler S>
bool simulate_step(const S& sampler, typename S::State& state, Rng& rng) {
    return sampler.step(state, rng);
}

// Steps until `target(state)` first holds; 0 if it holds at start; nullopt
// when `cap` steps pass without a hit.
template <MetropolisSampler S, class Pred>
std::optional<std::uint64_t> hitting_time(const S& sampler, typename S::State state, Pred&& target,
                                          std::uint64_t cap, Rng& rng) {
    if (target(state)) return 0;
    for (std::uint64_t t = 1; t <= cap; ++t) {
        if (sampler.step(state, rng) && target(state)) return t;
    }
    return std::nullopt;
}

/// Metropolis chain on an explicit landscape with connectivity q. The
/// remaining row mass 1 - sum q(x, .) proposes to stay.
class LandscapeDynamics {
public:
    LandscapeDynamics(const EnergyLandscape& landscape, Connectivity connectivity);

    class Sampler {
    public:
        using State = StateId;
        bool step(State& x, Rng& rng) const;

    private:
        friend class LandscapeDynamics;
        const LandscapeDynamics* owner_ = nullptr;
        std::vector<double> accept_;  // per adjacency slot
    };

    Sampler at_beta(double beta) const;
    const EnergyLandscape& landscape() const { return *landscape_; }

private:
    const EnergyLandscape* landscape_;
    Connectivity connectivity_;
    std::vector<double> cumulative_;  // per adjacency slot, cumulative q along the row
};

struct SimConfig {
    std::vector<double> betas;
    std::size_t replicas = 1;
    std::uint64_t seed = 0;
    std::uint64_t step_cap = 1'000'000'000;
    // Per-beta caps override step_cap when nonempty.
    std::vector<std::uint64_t> step_caps;
    unsigned threads = 1;

    void validate() const;
    std::uint64_t cap_for(std::size_t beta_index) const {
        return step_caps.empty() ? step_cap : step_caps.at(beta_index);
    }
};

// 100 e^{beta * barrier} per beta, clamped to [1, 1e12].
std::vector<std::uint64_t> default_step_caps(std::span<const double> betas, double barrier_estimate);

struct BetaExitStats {
    double beta = 0.0;
    std::size_t n = 0;
    std::size_t censored = 0;
    double mean_tau = 0.0;
    double median_tau = 0.0;
    double ln_mean = 0.0;
    bool excluded = false;  // every replica censored
};

struct ExitTimeStats {
    std::vector<BetaExitStats> per_beta;
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
    bool fitted = false;
};

// Summaries from raw samples (nullopt = censored), in replica order.
BetaExitStats summarize_exit_times(double beta, std::span<const std::optional<std::uint64_t>> samples);

// Least squares of ln(mean tau) against beta over non-excluded betas.
LineFit estimate_barrier(const ExitTimeStats& stats);

namespace detail {
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);
}

template <MetropolisModel M, class Target>
ExitTimeStats exit_time_experiment(const M& model, const typename decltype(model.at_beta(1.0))::State& start,
                                   Target&& target, const SimConfig& config) {
    config.validate();
    ExitTimeStats stats;
    for (std::size_t bi = 0; bi < config.betas.size(); ++bi) {
        const auto sampler = model.at_beta(config.betas[bi]);
        std::vector<std::optional<std::uint64_t>> samples(config.replicas);
        const std::uint64_t cap = config.cap_for(bi);
        detail::parallel_for(config.replicas, config.threads, [&](std::size_t r) {
            Rng rng(mix_seed(config.seed, bi, r));
            samples[r] = hitting_time(sampler, start, target, cap, rng);
        });
        stats.per_beta.push_back(summarize_exit_times(config.betas[bi], samples));
    }
    std::size_t usable = 0;
    for (const auto& b : stats.per_beta) usable += b.excluded ? 0 : 1;
    if (usable >= 3) {
        const auto fit = estimate_barrier(stats);
        stats.slope = fit.slope;
        stats.slope_stderr = fit.slope_stderr;
        stats.intercept = fit.intercept;
        stats.fitted = true;
    }
    return stats;
}

struct GatePassage {
    double beta = 0.0;
    std::size_t n = 0;
    std::size_t censored = 0;
    std::size_t gate_first = 0;
    double fraction = 0.0;  // gate_first / (n - censored)
};

// Fraction of replicas that satisfy `gate` strictly before `target`.
template <MetropolisModel M, class Gate, class Target>
GatePassage gate_passage_experiment(const M& model, const typename decltype(model.at_beta(1.0))::State& start,
                                    Gate&& gate, Target&& target, double beta, std::size_t replicas,
                                    std::uint64_t seed, std::uint64_t cap, unsigned threads = 1) {
    if (replicas == 0) throw InputError("replicas must be >= 1");
    const auto sampler = model.at_beta(beta);
    std::vector<signed char> outcome(replicas, 0);  // 1 gate first, 0 target first, -1 censored
    detail::parallel_for(replicas, threads, [&](std::size_t r) {
        Rng rng(mix_seed(seed, 0, r));
        auto state = start;
        if (gate(state) && !target(state)) {
            outcome[r] = 1;
            return;
        }
        if (target(state)) return;
        for (std::uint64_t t = 1; t <= cap; ++t) {
            if (!sampler.step(state, rng)) continue;
            const bool hit_target = target(state);
            if (hit_target) return;
            if (gate(state)) {
                outcome[r] = 1;
                return;
            }
        }
        outcome[r] = -1;
    });
    GatePassage g;
    g.beta = beta;
    g.n = replicas;
    for (auto o : outcome) {
        if (o < 0) ++g.censored;
        if (o > 0) ++g.gate_first;
    }
    const auto done = g.n - g.censored;
    g.fraction = done ? static_cast<double>(g.gate_first) / static_cast<double>(done) : 0.0;
    return g;
}

// Long-run occupation frequencies sampled every `thin` steps.
template <MetropolisSampler S>
std::vector<double> occupation_frequencies(const S& sampler, typename S::State start, std::size_t states,
                                           std::uint64_t steps, std::uint64_t thin, Rng& rng) {
    std::vector<double> freq(states, 0.0);
    std::uint64_t samples = 0;
    for (std::uint64_t t = 1; t <= steps; ++t) {
        sampler.step(start, rng);
        if (t % thin == 0) {
            freq[start] += 1.0;
            ++samples;
        }
    }
    for (double& f : freq) f /= static_cast<double>(samples);
    return freq;
}

}  // namespace metastab
