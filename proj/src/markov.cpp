#include "metastab/markov.hpp"

#include <algorithm>
#include <thread>

namespace metastab {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t beta_index, std::uint64_t replica) {
    auto splitmix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return splitmix(splitmix(splitmix(master) ^ beta_index) ^ replica);
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = Rng::max() - (Rng::max() % n + 1) % n;
    std::uint64_t v;
    do v = rng();
    while (v > limit);
    return v % n;
}

LandscapeDynamics::LandscapeDynamics(const EnergyLandscape& landscape, Connectivity connectivity)
    : landscape_(&landscape), connectivity_(std::move(connectivity)) {
    if (connectivity_.q.size() != landscape.edges().size()) throw InputError("q must have one weight per edge");
    for (StateId x = 0; x < landscape.size(); ++x) {
        double acc = 0.0;
        for (const Neighbor& nb : landscape.neighbors(x)) {
            acc += connectivity_.q[nb.edge];
            cumulative_.push_back(acc);
        }
        if (acc > 1.0 + 1e-12) throw InputError("q row sum exceeds one");
    }
}

LandscapeDynamics::Sampler LandscapeDynamics::at_beta(double beta) const {
    if (!(beta >= 0.0)) throw InputError("beta must be nonnegative");
    Sampler s;
    s.owner_ = this;
    s.accept_.reserve(cumulative_.size());
    for (StateId x = 0; x < landscape_->size(); ++x)
        for (const Neighbor& nb : landscape_->neighbors(x)) {
            const double cost = landscape_->edges()[nb.edge].height - landscape_->energy(x);
            s.accept_.push_back(cost <= 0.0 ? 1.0 : std::exp(-beta * cost));
        }
    return s;
}

bool LandscapeDynamics::Sampler::step(State& x, Rng& rng) const {
    const EnergyLandscape& land = *owner_->landscape_;
    const auto nbs = land.neighbors(x);
    if (nbs.empty()) return false;
    const std::size_t base = static_cast<std::size_t>(nbs.data() - land.neighbors(0).data());
    const double u = uniform01(rng);
    const auto first = owner_->cumulative_.begin() + static_cast<std::ptrdiff_t>(base);
    const auto last = first + static_cast<std::ptrdiff_t>(nbs.size());
    const auto it = std::upper_bound(first, last, u);
    if (it == last) return false;  // holding mass
    const std::size_t k = static_cast<std::size_t>(it - first);
    const double a = accept_[base + k];
    if (a < 1.0 && uniform01(rng) >= a) return false;
    x = nbs[k].to;
    return true;
}

void SimConfig::validate() const {
    if (betas.empty()) throw InputError("need at least one beta");
    for (std::size_t i = 1; i < betas.size(); ++i)
        if (!(betas[i] > betas[i - 1])) throw InputError("betas must be strictly increasing");
    if (replicas < 1) throw InputError("replicas must be >= 1");
    if (step_cap < 1) throw InputError("step cap must be >= 1");
    if (!step_caps.empty() && step_caps.size() != betas.size()) throw InputError("one step cap per beta");
    for (auto c : step_caps)
        if (c < 1) throw InputError("step cap must be >= 1");
}

std::vector<std::uint64_t> default_step_caps(std::span<const double> betas, double barrier_estimate) {
    std::vector<std::uint64_t> caps;
    for (double b : betas) {
        const double c = 100.0 * std::exp(b * barrier_estimate);
        caps.push_back(static_cast<std::uint64_t>(std::clamp(c, 1.0, 1e12)));
    }
    return caps;
}

BetaExitStats summarize_exit_times(double beta, std::span<const std::optional<std::uint64_t>> samples) {
    BetaExitStats s;
    s.beta = beta;
    s.n = samples.size();
    std::vector<double> taus;
    for (const auto& t : samples) {
        if (t) taus.push_back(static_cast<double>(*t));
        else ++s.censored;
    }
    if (taus.empty()) {
        s.excluded = true;
        return s;
    }
    double sum = 0.0;
    for (double t : taus) sum += t;  // replica order
    s.mean_tau = sum / static_cast<double>(taus.size());
    std::sort(taus.begin(), taus.end());
    const std::size_t m = taus.size();
    s.median_tau = m % 2 ? taus[m / 2] : 0.5 * (taus[m / 2 - 1] + taus[m / 2]);
    s.ln_mean = std::log(s.mean_tau);
    return s;
}

LineFit estimate_barrier(const ExitTimeStats& stats) {
    std::vector<double> xs, ys;
    for (const auto& b : stats.per_beta) {
        if (b.excluded || !(b.mean_tau > 0.0)) continue;
        xs.push_back(b.beta);
        ys.push_back(b.ln_mean);
    }
    if (xs.size() < 3) throw InputError("need at least 3 uncensored beta points");
    return fit_line(xs, ys);
}

namespace detail {

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += threads) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

}  // namespace metastab
