#include "metastab/heights.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

namespace metastab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Entry = std::pair<double, StateId>;
using MinHeap = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;

void check_state(const EnergyLandscape& landscape, StateId x) {
    if (x >= landscape.size()) throw InputError("state id " + std::to_string(x) + " out of range");
}

}  // namespace

double path_height(const EnergyLandscape& landscape, std::span<const StateId> path) {
    if (path.size() < 2) throw InputError("no transition: a path needs at least two states");
    double height = -kInf;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        check_state(landscape, path[i]);
        check_state(landscape, path[i + 1]);
        const long e = landscape.find_edge(path[i], path[i + 1]);
        if (e < 0)
            throw InputError("path step " + std::to_string(path[i]) + " -> " + std::to_string(path[i + 1]) +
                             " is not an edge");
        double h = landscape.mode() == CostMode::metropolis
                       ? std::max(landscape.energy(path[i]), landscape.energy(path[i + 1]))
                       : landscape.energy(path[i]) + landscape.cost(path[i], static_cast<std::uint32_t>(e));
        height = std::max(height, h);
    }
    return height;
}

std::vector<double> communication_levels(const EnergyLandscape& landscape, std::span<const StateId> sources) {
    std::vector<double> level(landscape.size(), kInf);
    std::vector<bool> done(landscape.size(), false);
    MinHeap heap;
    for (StateId s : sources) {
        check_state(landscape, s);
        level[s] = landscape.energy(s);
        heap.emplace(level[s], s);
    }
    const auto edges = landscape.edges();
    while (!heap.empty()) {
        auto [lv, x] = heap.top();
        heap.pop();
        if (done[x]) continue;
        done[x] = true;
        for (const Neighbor& nb : landscape.neighbors(x)) {
            const double cand = std::max(lv, edges[nb.edge].height);
            if (cand < level[nb.to]) {
                level[nb.to] = cand;
                heap.emplace(cand, nb.to);
            }
        }
    }
    return level;
}

double communication_height(const EnergyLandscape& landscape, StateId y, StateId z) {
    check_state(landscape, y);
    check_state(landscape, z);
    if (y == z) return landscape.energy(y);
    // Search from the smaller id so that Phi(y,z) and Phi(z,y) run the same
    // computation; the min-max value is order independent anyway.
    const StateId from = std::min(y, z), to = std::max(y, z);
    std::vector<double> level(landscape.size(), kInf);
    std::vector<bool> done(landscape.size(), false);
    MinHeap heap;
    level[from] = landscape.energy(from);
    heap.emplace(level[from], from);
    const auto edges = landscape.edges();
    while (!heap.empty()) {
        auto [lv, x] = heap.top();
        heap.pop();
        if (done[x]) continue;
        if (x == to) return lv;
        done[x] = true;
        for (const Neighbor& nb : landscape.neighbors(x)) {
            const double cand = std::max(lv, edges[nb.edge].height);
            if (cand < level[nb.to]) {
                level[nb.to] = cand;
                heap.emplace(cand, nb.to);
            }
        }
    }
    throw InputError("states are not connected");
}

double communication_height_sets(const EnergyLandscape& landscape, std::span<const StateId> ys,
                                 std::span<const StateId> zs) {
    if (ys.empty() || zs.empty()) throw InputError("empty set");
    const auto level = communication_levels(landscape, ys);
    double best = kInf;
    for (StateId z : zs) {
        check_state(landscape, z);
        best = std::min(best, level[z]);
    }
    return best;
}

std::vector<StateId> minima_of(const EnergyLandscape& landscape, std::span<const StateId> ys) {
    if (ys.empty()) throw InputError("empty set");
    double lo = kInf;
    for (StateId y : ys) {
        check_state(landscape, y);
        lo = std::min(lo, landscape.energy(y));
    }
    std::vector<StateId> out;
    for (StateId y : ys)
        if (same_energy(landscape.energy(y), lo)) out.push_back(y);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<StateId> ground_states(const EnergyLandscape& landscape) {
    std::vector<StateId> out;
    for (StateId x = 0; x < landscape.size(); ++x)
        if (same_energy(landscape.energy(x), landscape.min_energy())) out.push_back(x);
    return out;
}

double stability_level(const EnergyLandscape& landscape, StateId x) {
    check_state(landscape, x);
    const double hx = landscape.energy(x);
    if (!strictly_below(landscape.min_energy(), hx))
        throw InputError("ground state has no stability level");
    // Min-max Dijkstra from x; the first settled state below H(x) fixes Phi(x, I_x).
    std::vector<double> level(landscape.size(), kInf);
    std::vector<bool> done(landscape.size(), false);
    MinHeap heap;
    level[x] = hx;
    heap.emplace(hx, x);
    const auto edges = landscape.edges();
    while (!heap.empty()) {
        auto [lv, y] = heap.top();
        heap.pop();
        if (done[y]) continue;
        if (strictly_below(landscape.energy(y), hx)) return lv - hx;
        done[y] = true;
        for (const Neighbor& nb : landscape.neighbors(y)) {
            const double cand = std::max(lv, edges[nb.edge].height);
            if (cand < level[nb.to]) {
                level[nb.to] = cand;
                heap.emplace(cand, nb.to);
            }
        }
    }
    throw InputError("no lower state reachable from " + std::to_string(x));
}

}  // namespace metastab
