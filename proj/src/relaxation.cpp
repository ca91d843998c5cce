#include "metastab/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

#include "metastab/heights.hpp"
#include "metastab/union_find.hpp"

namespace metastab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

void finish_report(const EnergyLandscape& landscape, RelaxationReport& report) {
    double gamma = -kInf;
    for (StateId x = 0; x < landscape.size(); ++x)
        if (!std::isnan(report.stability[x])) gamma = std::max(gamma, report.stability[x]);
    if (gamma == -kInf) return;  // X = X_s
    report.gamma_m = gamma;
    for (StateId x = 0; x < landscape.size(); ++x)
        if (!std::isnan(report.stability[x]) && same_energy(report.stability[x], gamma))
            report.metastable_set.push_back(x);
    auto parts = equivalence_partition(landscape, gamma, report.metastable_set, report.ground_states);
    report.partition_m = std::move(parts.metastable);
    report.partition_s = std::move(parts.ground);
}

}  // namespace

RelaxationReport relaxation_analysis(const EnergyLandscape& landscape) {
    const std::size_t n = landscape.size();
    const auto edges = landscape.edges();
    RelaxationReport report;
    report.stability.assign(n, kNaN);
    report.ground_states = ground_states(landscape);

    // Per component root: lowest energy and the states sitting at that energy
    // that have not yet seen anything lower.
    UnionFind uf(n);
    std::vector<double> comp_min(landscape.energies().begin(), landscape.energies().end());
    std::vector<std::vector<StateId>> pending(n);
    for (StateId x = 0; x < n; ++x) pending[x].push_back(x);

    std::vector<std::uint32_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t i, std::uint32_t j) { return edges[i].height < edges[j].height; });

    std::vector<std::uint32_t> old_roots;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> groups;  // (new root, old root)
    std::size_t i = 0;
    while (i < order.size()) {
        const double level = edges[order[i]].height;
        std::size_t j = i;
        old_roots.clear();
        while (j < order.size() && edges[order[j]].height - level <= kEnergyTol) {
            const Edge& e = edges[order[j]];
            const auto ra = uf.find(e.a), rb = uf.find(e.b);
            if (ra != rb) {
                old_roots.push_back(ra);
                old_roots.push_back(rb);
            }
            ++j;
        }
        for (std::size_t k = i; k < j; ++k) uf.merge(edges[order[k]].a, edges[order[k]].b);
        i = j;
        if (old_roots.empty()) continue;

        std::sort(old_roots.begin(), old_roots.end());
        old_roots.erase(std::unique(old_roots.begin(), old_roots.end()), old_roots.end());
        groups.clear();
        for (auto r : old_roots) groups.emplace_back(uf.find(r), r);
        std::sort(groups.begin(), groups.end());

        for (std::size_t g = 0; g < groups.size();) {
            std::size_t h = g;
            double lo = kInf;
            while (h < groups.size() && groups[h].first == groups[g].first) lo = std::min(lo, comp_min[groups[h++].second]);
            std::vector<StateId> kept;
            for (std::size_t k = g; k < h; ++k) {
                auto& pend = pending[groups[k].second];
                if (same_energy(comp_min[groups[k].second], lo)) {
                    if (kept.size() < pend.size()) std::swap(kept, pend);
                    kept.insert(kept.end(), pend.begin(), pend.end());
                } else {
                    for (StateId x : pend) report.stability[x] = level - landscape.energy(x);
                }
                pend.clear();
                pend.shrink_to_fit();
            }
            const auto root = groups[g].first;
            comp_min[root] = lo;
            pending[root] = std::move(kept);
            g = h;
        }
    }
    // Whatever never saw a lower state is a ground state (connected input).
    for (StateId x : report.ground_states) report.stability[x] = kNaN;
    finish_report(landscape, report);
    return report;
}

RelaxationReport relaxation_bruteforce(const EnergyLandscape& landscape) {
    RelaxationReport report;
    report.stability.assign(landscape.size(), kNaN);
    report.ground_states = ground_states(landscape);
    for (StateId x = 0; x < landscape.size(); ++x)
        if (strictly_below(landscape.min_energy(), landscape.energy(x)))
            report.stability[x] = stability_level(landscape, x);
    finish_report(landscape, report);
    return report;
}

namespace {

// Classes of ~ inside `members`. From each member, a min-max Dijkstra that
// only expands levels strictly below H(x) + gamma.
std::vector<StateSet> partition_set(const EnergyLandscape& landscape, double gamma,
                                    std::span<const StateId> members) {
    using Entry = std::pair<double, StateId>;
    const std::size_t n = landscape.size();
    const auto edges = landscape.edges();
    std::vector<std::int64_t> slot(n, -1);
    for (std::size_t k = 0; k < members.size(); ++k) slot[members[k]] = static_cast<std::int64_t>(k);

    UnionFind uf(members.size());
    std::vector<double> level(n, kInf);
    std::vector<StateId> touched;
    for (std::size_t k = 0; k < members.size(); ++k) {
        const StateId x = members[k];
        const double hx = landscape.energy(x);
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
        for (StateId t : touched) level[t] = kInf;
        touched.clear();
        level[x] = hx;
        touched.push_back(x);
        heap.emplace(hx, x);
        while (!heap.empty()) {
            auto [lv, y] = heap.top();
            heap.pop();
            if (lv > level[y]) continue;
            if (slot[y] >= 0 && y != x && strictly_below(lv - landscape.energy(y), gamma))
                uf.merge(static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(slot[y]));
            for (const Neighbor& nb : landscape.neighbors(y)) {
                const double cand = std::max(lv, edges[nb.edge].height);
                if (!strictly_below(cand - hx, gamma)) continue;
                if (cand < level[nb.to]) {
                    if (level[nb.to] == kInf) touched.push_back(nb.to);
                    level[nb.to] = cand;
                    heap.emplace(cand, nb.to);
                }
            }
        }
    }
    std::vector<StateSet> classes;
    std::vector<std::int64_t> class_of(members.size(), -1);
    std::vector<std::size_t> idx(members.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return members[a] < members[b]; });
    for (auto k : idx) {
        const auto r = uf.find(static_cast<std::uint32_t>(k));
        if (class_of[r] < 0) {
            class_of[r] = static_cast<std::int64_t>(classes.size());
            classes.emplace_back();
        }
        classes[class_of[r]].push_back(members[k]);
    }
    return classes;
}

}  // namespace

Partitions equivalence_partition(const EnergyLandscape& landscape, double gamma_m,
                                 std::span<const StateId> metastable_set, std::span<const StateId> ground) {
    return {partition_set(landscape, gamma_m, metastable_set), partition_set(landscape, gamma_m, ground)};
}

PtaCandidate pta_candidate_set(const Partitions& partitions, bool non_trivial_rest) {
    if (partitions.metastable.empty() || partitions.ground.empty())
        throw InputError("pta candidate needs nonempty partitions");
    if (!non_trivial_rest) throw InputError("theorem hypothesis violated: X \\ (X_s u X_m) is empty");
    PtaCandidate out{{}, 1};
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    auto take = [&](const std::vector<StateSet>& classes) {
        for (const auto& c : classes) {
            out.states.push_back(*std::min_element(c.begin(), c.end()));
            out.choices = out.choices > kMax / c.size() ? kMax : out.choices * c.size();
        }
    };
    take(partitions.metastable);
    take(partitions.ground);
    std::sort(out.states.begin(), out.states.end());
    return out;
}

PtaCandidate pta_candidate_set(const EnergyLandscape& landscape, const RelaxationReport& report) {
    if (report.trivial()) throw InputError("trivial landscape has no metastable states");
    const bool rest = report.metastable_set.size() + report.ground_states.size() < landscape.size();
    return pta_candidate_set(Partitions{report.partition_m, report.partition_s}, rest);
}

ConditionVerdict check_sufficient_conditions(const EnergyLandscape& landscape, std::span<const StateId> a_set,
                                             double a, ConditionMode mode) {
    if (a_set.empty()) throw InputError("A must be nonempty");
    if (!(a > 0.0)) throw InputError("a must be positive");
    const auto ground = ground_states(landscape);
    std::vector<char> in_a(landscape.size(), 0), in_s(landscape.size(), 0);
    for (StateId x : ground) in_s[x] = 1;
    for (StateId x : a_set) {
        if (x >= landscape.size()) throw InputError("state id out of range");
        if (in_s[x]) throw InputError("A must avoid ground states");
        in_a[x] = 1;
    }
    const auto level = communication_levels(landscape, ground);
    ConditionVerdict v;
    for (StateId x = 0; x < landscape.size(); ++x) {
        if (!in_a[x]) continue;
        if (!same_energy(level[x] - landscape.energy(x), a)) {
            v.failed_clause = 1;
            v.violating_state = x;
            v.message = "Phi(x, X_s) - H(x) != a for x = " + std::to_string(x);
            return v;
        }
    }
    std::vector<double> stability;
    if (mode == ConditionMode::stability) stability = relaxation_analysis(landscape).stability;
    for (StateId x = 0; x < landscape.size(); ++x) {
        if (in_a[x] || in_s[x]) continue;
        const double value = mode == ConditionMode::path ? level[x] - landscape.energy(x) : stability[x];
        if (!strictly_below(value, a)) {
            v.failed_clause = 2;
            v.violating_state = x;
            v.message = std::string(mode == ConditionMode::path ? "Phi(x, X_s) - H(x)" : "V_x") +
                        " >= a for x = " + std::to_string(x);
            return v;
        }
    }
    v.pass = true;
    return v;
}

ConditionVerdict verify_necessity(const EnergyLandscape& landscape) {
    const auto report = relaxation_analysis(landscape);
    if (report.trivial()) throw InputError("trivial landscape: every state is a ground state");
    const double gamma = *report.gamma_m;
    const auto level = communication_levels(landscape, report.ground_states);
    std::vector<char> in_m(landscape.size(), 0);
    for (StateId x : report.metastable_set) in_m[x] = 1;
    ConditionVerdict v;
    for (StateId x = 0; x < landscape.size(); ++x) {
        if (std::isnan(report.stability[x])) continue;
        const double barrier = level[x] - landscape.energy(x);
        const bool ok = in_m[x] ? same_energy(barrier, gamma) : strictly_below(barrier, gamma);
        if (!ok) {
            v.failed_clause = in_m[x] ? 1 : 2;
            v.violating_state = x;
            v.message = "barrier to ground states at x = " + std::to_string(x) + " is inconsistent with Gamma_m";
            return v;
        }
    }
    v.pass = true;
    return v;
}

}  // namespace metastab
