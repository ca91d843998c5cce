#include "metastab/gates.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "metastab/heights.hpp"
#include "metastab/union_find.hpp"

namespace metastab {

namespace {

// Sub-landscape below the saddle level of (sigma, eta).
struct SaddleLevel {
    double phi = 0.0;
    std::vector<char> reachable;
    std::vector<StateId> states;
};

SaddleLevel saddle_level(const EnergyLandscape& landscape, StateId sigma, StateId eta) {
    if (sigma >= landscape.size() || eta >= landscape.size()) throw InputError("state id out of range");
    SaddleLevel out;
    out.phi = communication_height(landscape, sigma, eta);
    out.reachable.assign(landscape.size(), 0);
    const auto edges = landscape.edges();
    std::deque<StateId> queue{sigma};
    out.reachable[sigma] = 1;
    while (!queue.empty()) {
        const StateId x = queue.front();
        queue.pop_front();
        out.states.push_back(x);
        for (const Neighbor& nb : landscape.neighbors(x)) {
            if (out.reachable[nb.to] || edges[nb.edge].height > out.phi + kEnergyTol) continue;
            out.reachable[nb.to] = 1;
            queue.push_back(nb.to);
        }
    }
    std::sort(out.states.begin(), out.states.end());
    return out;
}

// Contracted graph: undeletable clusters of sub-saddle states plus one
// deletable node per saddle state.
struct ReducedGraph {
    std::vector<std::vector<std::uint32_t>> adj;
    std::vector<char> deletable;
    std::vector<StateId> state_of;  // deletable nodes only
    std::uint32_t source = 0;
    std::uint32_t target = 0;
};

ReducedGraph reduce(const EnergyLandscape& landscape, const SaddleLevel& level, StateId sigma, StateId eta) {
    const auto edges = landscape.edges();
    const std::size_t n = landscape.size();
    auto is_saddle = [&](StateId x) { return same_energy(landscape.energy(x), level.phi); };
    UnionFind uf(n);
    for (StateId x : level.states) {
        if (is_saddle(x)) continue;
        for (const Neighbor& nb : landscape.neighbors(x))
            if (level.reachable[nb.to] && !is_saddle(nb.to) && edges[nb.edge].height <= level.phi + kEnergyTol)
                uf.merge(x, nb.to);
    }
    std::vector<std::int64_t> node(n, -1);
    ReducedGraph g;
    for (StateId x : level.states) {
        const auto key = is_saddle(x) ? x : uf.find(x);
        if (node[key] < 0) {
            node[key] = static_cast<std::int64_t>(g.deletable.size());
            g.deletable.push_back(is_saddle(x));
            g.state_of.push_back(x);
        }
        node[x] = node[key];
    }
    g.adj.resize(g.deletable.size());
    for (StateId x : level.states)
        for (const Neighbor& nb : landscape.neighbors(x)) {
            if (!level.reachable[nb.to] || edges[nb.edge].height > level.phi + kEnergyTol) continue;
            const auto u = static_cast<std::uint32_t>(node[x]), v = static_cast<std::uint32_t>(node[nb.to]);
            if (u != v) g.adj[u].push_back(v);
        }
    for (auto& a : g.adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    g.source = static_cast<std::uint32_t>(node[sigma]);
    g.target = static_cast<std::uint32_t>(node[eta]);
    return g;
}

// Nodes lying on some simple source-target path: the biconnected component
// holding a virtual source-target edge.
std::vector<char> on_simple_paths(const ReducedGraph& g) {
    const std::size_t m = g.adj.size();
    const std::uint32_t virt = static_cast<std::uint32_t>(m);  // marks the virtual edge
    auto neighbors = [&](std::uint32_t u, std::size_t k, std::uint32_t& v) {
        const auto& a = g.adj[u];
        if (k < a.size()) {
            v = a[k];
            return true;
        }
        if (k == a.size() && (u == g.source || u == g.target)) {
            v = u == g.source ? g.target : g.source;
            return true;
        }
        return false;
    };
    std::vector<std::uint32_t> disc(m, 0), low(m, 0);
    std::uint32_t timer = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_stack;
    std::vector<char> result(m, 0);
    struct Frame {
        std::uint32_t u, parent;
        std::size_t k;
        bool parent_skipped;
    };
    std::vector<Frame> stack;
    disc[g.source] = low[g.source] = ++timer;
    stack.push_back({g.source, virt, 0, false});
    while (!stack.empty()) {
        Frame& f = stack.back();
        std::uint32_t v;
        if (neighbors(f.u, f.k, v)) {
            ++f.k;
            if (v == f.parent && !f.parent_skipped) {
                f.parent_skipped = true;
                continue;
            }
            if (disc[v] == 0) {
                edge_stack.emplace_back(f.u, v);
                disc[v] = low[v] = ++timer;
                stack.push_back({v, f.u, 0, false});
            } else if (disc[v] < disc[f.u]) {
                edge_stack.emplace_back(f.u, v);
                low[f.u] = std::min(low[f.u], disc[v]);
            }
            continue;
        }
        const Frame done = f;
        stack.pop_back();
        if (stack.empty()) break;
        Frame& p = stack.back();
        low[p.u] = std::min(low[p.u], low[done.u]);
        if (low[done.u] >= disc[p.u]) {
            std::vector<std::pair<std::uint32_t, std::uint32_t>> comp;
            while (true) {
                auto e = edge_stack.back();
                edge_stack.pop_back();
                comp.push_back(e);
                if (e.first == p.u && e.second == done.u) break;
            }
            const bool has_virtual = std::any_of(comp.begin(), comp.end(), [&](auto e) {
                return (e.first == g.source && e.second == g.target) || (e.first == g.target && e.second == g.source);
            });
            if (has_virtual)
                for (auto e : comp) result[e.first] = result[e.second] = 1;
        }
    }
    return result;
}

using NodeSet = std::vector<std::uint32_t>;

// Component of `start` avoiding `blocked`.
std::vector<char> component(const ReducedGraph& g, std::uint32_t start, const std::vector<char>& blocked) {
    std::vector<char> in(g.adj.size(), 0);
    std::vector<std::uint32_t> stack{start};
    in[start] = 1;
    while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        for (auto v : g.adj[u])
            if (!in[v] && !blocked[v]) {
                in[v] = 1;
                stack.push_back(v);
            }
    }
    return in;
}

// Grow `side` through undeletable nodes until its boundary is deletable only.
// Returns false if the target gets absorbed.
bool close_side(const ReducedGraph& g, std::vector<char>& side) {
    std::vector<std::uint32_t> stack;
    for (std::uint32_t u = 0; u < side.size(); ++u)
        if (side[u]) stack.push_back(u);
    while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        for (auto v : g.adj[u])
            if (!side[v] && !g.deletable[v]) {
                side[v] = 1;
                stack.push_back(v);
            }
    }
    return !side[g.target];
}

NodeSet boundary(const ReducedGraph& g, const std::vector<char>& side) {
    NodeSet out;
    std::vector<char> mark(g.adj.size(), 0);
    for (std::uint32_t u = 0; u < side.size(); ++u)
        if (side[u])
            for (auto v : g.adj[u])
                if (!side[v] && !mark[v]) {
                    mark[v] = 1;
                    out.push_back(v);
                }
    std::sort(out.begin(), out.end());
    return out;
}

// The minimal separator close to the target inside N(side).
NodeSet separator_from_side(const ReducedGraph& g, const std::vector<char>& side) {
    const NodeSet outer = boundary(g, side);
    std::vector<char> blocked(side);
    for (auto v : outer) blocked[v] = 1;
    return boundary(g, component(g, g.target, blocked));
}

}  // namespace

StateSet optimal_saddles(const EnergyLandscape& landscape, StateId sigma, StateId eta) {
    if (sigma == eta) throw InputError("saddles need two distinct states");
    const auto level = saddle_level(landscape, sigma, eta);
    StateSet out;
    for (StateId x : level.states)
        if (same_energy(landscape.energy(x), level.phi)) out.push_back(x);
    return out;
}

bool is_gate(const EnergyLandscape& landscape, std::span<const StateId> ys, StateId sigma, StateId eta) {
    if (ys.empty()) throw InputError("gate candidate must be nonempty");
    const auto level = saddle_level(landscape, sigma, eta);
    std::vector<char> blocked(landscape.size(), 0);
    for (StateId y : ys) {
        if (y >= landscape.size()) throw InputError("state id out of range");
        if (!same_energy(landscape.energy(y), level.phi)) return false;
        blocked[y] = 1;
    }
    if (blocked[sigma] || blocked[eta]) return true;
    const auto edges = landscape.edges();
    std::vector<char> seen(landscape.size(), 0);
    std::vector<StateId> stack{sigma};
    seen[sigma] = 1;
    while (!stack.empty()) {
        const StateId x = stack.back();
        stack.pop_back();
        if (x == eta) return false;
        for (const Neighbor& nb : landscape.neighbors(x)) {
            if (seen[nb.to] || blocked[nb.to] || edges[nb.edge].height > level.phi + kEnergyTol) continue;
            seen[nb.to] = 1;
            stack.push_back(nb.to);
        }
    }
    return true;
}

std::vector<StateSet> minimal_gates(const EnergyLandscape& landscape, StateId sigma, StateId eta,
                                    std::size_t max_candidates) {
    if (sigma == eta) throw InputError("gates need two distinct states");
    const auto level = saddle_level(landscape, sigma, eta);
    ReducedGraph g = reduce(landscape, level, sigma, eta);

    std::vector<StateSet> gates;
    // An endpoint at the saddle level is a gate by itself; every other
    // minimal gate avoids both endpoints.
    for (auto end : {g.source, g.target})
        if (g.deletable[end]) gates.push_back({g.state_of[end]});
    if (g.source == g.target) return gates;
    g.deletable[g.source] = g.deletable[g.target] = 0;

    const auto relevant = on_simple_paths(g);
    std::size_t candidates = 0;
    for (std::uint32_t u = 0; u < g.adj.size(); ++u)
        if (g.deletable[u] && relevant[u]) ++candidates;
    if (candidates > max_candidates)
        throw ResourceError("exceeds enumeration bound: " + std::to_string(candidates) + " candidate saddles > " +
                            std::to_string(max_candidates));

    std::vector<char> start(g.adj.size(), 0);
    start[g.source] = 1;
    std::set<NodeSet> seen;
    std::deque<NodeSet> queue;
    auto offer = [&](std::vector<char> side) {
        if (!close_side(g, side)) return;
        NodeSet s = separator_from_side(g, side);
        if (s.empty()) return;
        if (seen.insert(s).second) queue.push_back(std::move(s));
    };
    offer(start);
    while (!queue.empty()) {
        const NodeSet s = queue.front();
        queue.pop_front();
        std::vector<char> blocked(g.adj.size(), 0);
        for (auto v : s) blocked[v] = 1;
        const auto source_side = component(g, g.source, blocked);
        for (auto x : s) {
            if (std::binary_search(g.adj[x].begin(), g.adj[x].end(), g.target)) continue;
            auto side = source_side;
            side[x] = 1;
            offer(std::move(side));
        }
    }
    for (const NodeSet& s : seen) {
        StateSet gate;
        for (auto v : s) gate.push_back(g.state_of[v]);
        std::sort(gate.begin(), gate.end());
        gates.push_back(std::move(gate));
    }
    std::sort(gates.begin(), gates.end());
    gates.erase(std::unique(gates.begin(), gates.end()), gates.end());
    return gates;
}

StateSet essential_saddles(std::span<const StateSet> gates) {
    StateSet out;
    for (const auto& g : gates) out.insert(out.end(), g.begin(), g.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace metastab
