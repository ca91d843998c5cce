#include "metastab/capacity.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "metastab/heights.hpp"
#include "metastab/stats.hpp"

namespace metastab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kDenseLimit = 2000;
constexpr double kRowSumTol = 1e-12;

void check_ids(const EnergyLandscape& landscape, std::span<const StateId> set, const char* name) {
    if (set.empty()) throw InputError(std::string(name) + " must be nonempty");
    for (StateId x : set)
        if (x >= landscape.size()) throw InputError(std::string(name) + " contains an out-of-range state");
}

// 1 for A, 2 for B, 0 elsewhere.
std::vector<char> boundary_marks(const EnergyLandscape& landscape, std::span<const StateId> a_set,
                                 std::span<const StateId> b_set) {
    check_ids(landscape, a_set, "A");
    check_ids(landscape, b_set, "B");
    std::vector<char> mark(landscape.size(), 0);
    for (StateId x : a_set) mark[x] = 1;
    for (StateId x : b_set) {
        if (mark[x] == 1) throw InputError("A and B must be disjoint");
        mark[x] = 2;
    }
    return mark;
}

// Dense nonnegative weights w(x, z) between states, zero diagonal.
struct WeightMatrix {
    std::size_t n = 0;
    std::vector<double> w;
    explicit WeightMatrix(std::size_t size) : n(size), w(size * size, 0.0) {}
    double& at(std::size_t x, std::size_t z) { return w[x * n + z]; }
    double at(std::size_t x, std::size_t z) const { return w[x * n + z]; }
};

struct Elimination {
    std::vector<double> u;
    double boundary_flow = 0.0;  // sum of reduced weights from `source` to `sink` states
};

// Solves s(x) u(x) = sum_z w(x, z) u(z) + b(x) on the free states, with u
// fixed elsewhere and s(x) = sum_z w(x, z). States are eliminated one at a
// time; diagonals are always recomputed as sums of the remaining weights, so
// no subtraction occurs and tiny escape rates keep full relative accuracy.
// Optionally reports the reduced weight flowing between two boundary classes.
Elimination eliminate(WeightMatrix w, const std::vector<char>& free, std::vector<double> u, std::vector<double> b,
                      const std::vector<char>* source = nullptr, const std::vector<char>* sink = nullptr) {
    const std::size_t n = w.n;
    std::vector<char> alive(n, 1);
    std::vector<double> s(n, 0.0);
    std::vector<std::size_t> order, nbrs;
    for (std::size_t x = 0; x < n; ++x) {
        if (!free[x]) continue;
        order.push_back(x);
        alive[x] = 0;
        nbrs.clear();
        double sum = 0.0;
        for (std::size_t z = 0; z < n; ++z)
            if (alive[z] && w.at(x, z) > 0.0) {
                nbrs.push_back(z);
                sum += w.at(x, z);
            }
        if (!(sum > 0.0)) throw InputError("singular system: a free state cannot reach the boundary");
        s[x] = sum;
        for (std::size_t y : nbrs) {
            const double f = w.at(y, x) / sum;
            if (f == 0.0) continue;
            for (std::size_t z : nbrs)
                if (z != y) w.at(y, z) += f * w.at(x, z);
            b[y] += f * b[x];
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t x = *it;
        double acc = b[x];
        for (std::size_t z = 0; z < n; ++z)
            if (alive[z] && w.at(x, z) > 0.0) acc += w.at(x, z) * u[z];
        u[x] = acc / s[x];
        alive[x] = 1;
    }
    Elimination out;
    if (source && sink)
        for (std::size_t x = 0; x < n; ++x)
            if ((*source)[x])
                for (std::size_t z = 0; z < n; ++z)
                    if ((*sink)[z]) out.boundary_flow += w.at(x, z);
    out.u = std::move(u);
    return out;
}

// Conductances mu(x) p(x, y) scaled by Z exp(beta min H), so they stay near one
// for the lowest saddles; the scale is returned in log form.
WeightMatrix conductances(const MarkovChain& chain, double& log_scale) {
    const auto& landscape = chain.landscape();
    const double ref = landscape.min_energy();
    WeightMatrix w(landscape.size());
    const auto edges = landscape.edges();
    for (std::uint32_t e = 0; e < edges.size(); ++e) {
        const double c = chain.q(e) * std::exp(-chain.beta() * (edges[e].height - ref));
        w.at(edges[e].a, edges[e].b) += c;
        w.at(edges[e].b, edges[e].a) += c;
    }
    log_scale = -chain.beta() * ref - chain.gibbs().log_partition;
    return w;
}

// Solves (I - P) u = rhs on the states with free[x] set; u is indexed by
// state and holds the boundary values elsewhere.
void solve_free(const MarkovChain& chain, const std::vector<char>& free, std::vector<double>& rhs,
                std::vector<double>& u) {
    const auto& landscape = chain.landscape();
    std::vector<std::int64_t> index(landscape.size(), -1);
    std::vector<StateId> states;
    for (StateId x = 0; x < landscape.size(); ++x)
        if (free[x]) {
            index[x] = static_cast<std::int64_t>(states.size());
            states.push_back(x);
        }
    const auto m = static_cast<Eigen::Index>(states.size());
    if (m == 0) return;
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        b[i] = rhs[states[i]];
        for (const Neighbor& nb : landscape.neighbors(states[i]))
            if (!free[nb.to]) b[i] += chain.transition(states[i], nb.edge) * u[nb.to];
    }

    if (landscape.size() <= kDenseLimit) {
        // mu(x) (I - P) is the conductance Laplacian; scale mu the same way.
        double log_scale = 0.0;
        WeightMatrix w = conductances(chain, log_scale);
        std::vector<double> bw(landscape.size(), 0.0);
        for (StateId x : states) bw[x] = std::exp(chain.gibbs().log_prob[x] - log_scale) * rhs[x];
        u = eliminate(std::move(w), free, u, std::move(bw)).u;
        return;
    }
    Eigen::VectorXd sol;
    {
        std::vector<Eigen::Triplet<double>> trips;
        for (Eigen::Index i = 0; i < m; ++i) {
            const StateId x = states[i];
            trips.emplace_back(i, i, chain.escape(x));
            for (const Neighbor& nb : landscape.neighbors(x))
                if (index[nb.to] >= 0) trips.emplace_back(i, index[nb.to], -chain.transition(x, nb.edge));
        }
        Eigen::SparseMatrix<double> mat(m, m);
        mat.setFromTriplets(trips.begin(), trips.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(mat);
        if (lu.info() != Eigen::Success) throw InputError("singular system");
        sol = lu.solve(b);
    }
    if (!sol.allFinite()) throw InputError("singular system");
    for (Eigen::Index i = 0; i < m; ++i) u[states[i]] = sol[i];
}

}  // namespace

Connectivity uniform_connectivity(const EnergyLandscape& landscape) {
    std::size_t max_deg = 0;
    for (StateId x = 0; x < landscape.size(); ++x) max_deg = std::max(max_deg, landscape.degree(x));
    return {std::vector<double>(landscape.edges().size(), max_deg ? 1.0 / static_cast<double>(max_deg) : 0.0)};
}

Connectivity connectivity_from(const EnergyLandscape& landscape, std::span<const EdgeWeight> weights) {
    std::vector<double> q(landscape.edges().size(), -1.0);
    for (const EdgeWeight& w : weights) {
        if (w.x >= landscape.size() || w.y >= landscape.size()) throw InputError("q: state out of range");
        const long e = landscape.find_edge(w.x, w.y);
        if (e < 0) throw InputError("q on a non-edge " + std::to_string(w.x) + " " + std::to_string(w.y));
        if (!(w.q > 0.0) || w.q > 1.0) throw InputError("q must lie in (0, 1]");
        if (q[e] >= 0.0 && q[e] != w.q) throw InputError("q is not symmetric");
        q[e] = w.q;
    }
    for (double v : q)
        if (v < 0.0) throw InputError("q must be given on every edge");
    std::vector<double> row(landscape.size(), 0.0);
    const auto edges = landscape.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        row[edges[e].a] += q[e];
        row[edges[e].b] += q[e];
    }
    for (double r : row)
        if (r > 1.0 + kRowSumTol) throw InputError("q row sum exceeds one");
    return {std::move(q)};
}

double GibbsMeasure::log_mass(std::span<const StateId> set) const {
    std::vector<double> v;
    v.reserve(set.size());
    for (StateId x : set) v.push_back(log_prob.at(x));
    return log_sum_exp(v);
}

GibbsMeasure gibbs_measure(const EnergyLandscape& landscape, double beta) {
    if (!(beta > 0.0)) throw InputError("beta must be positive");
    GibbsMeasure g;
    g.beta = beta;
    std::vector<double> w(landscape.size());
    for (StateId x = 0; x < landscape.size(); ++x) w[x] = -beta * landscape.energy(x);
    g.log_partition = log_sum_exp(w);
    g.log_prob.resize(w.size());
    g.prob.resize(w.size());
    for (std::size_t x = 0; x < w.size(); ++x) {
        g.log_prob[x] = w[x] - g.log_partition;
        g.prob[x] = std::exp(g.log_prob[x]);
    }
    return g;
}

MarkovChain::MarkovChain(const EnergyLandscape& landscape, Connectivity connectivity, double beta)
    : landscape_(&landscape), connectivity_(std::move(connectivity)), beta_(beta) {
    if (!(beta > 0.0)) throw InputError("beta must be positive");
    if (connectivity_.q.size() != landscape.edges().size()) throw InputError("q must have one weight per edge");
    gibbs_ = gibbs_measure(landscape, beta);
    escape_.assign(landscape.size(), 0.0);
    std::vector<double> qrow(landscape.size(), 0.0);
    for (StateId x = 0; x < landscape.size(); ++x)
        for (const Neighbor& nb : landscape.neighbors(x)) {
            const double qv = connectivity_.q[nb.edge];
            if (!(qv > 0.0)) throw InputError("q must be positive on every edge");
            qrow[x] += qv;
            escape_[x] += transition(x, nb.edge);
        }
    for (StateId x = 0; x < landscape.size(); ++x) {
        if (qrow[x] > 1.0 + kRowSumTol) throw InputError("q row sum exceeds one");
        if (escape_[x] > 1.0 + kRowSumTol) throw InputError("q inconsistent with Delta: negative holding probability");
    }
}

double MarkovChain::log_transition(StateId x, std::uint32_t e) const {
    const Edge& ed = landscape_->edges()[e];
    return std::log(connectivity_.q[e]) - beta_ * (ed.height - landscape_->energy(x));
}

double MarkovChain::transition(StateId x, std::uint32_t e) const {
    const Edge& ed = landscape_->edges()[e];
    return connectivity_.q[e] * std::exp(-beta_ * (ed.height - landscape_->energy(x)));
}

double MarkovChain::log_conductance(std::uint32_t e) const {
    return std::log(connectivity_.q[e]) - beta_ * landscape_->edges()[e].height - gibbs_.log_partition;
}

double MarkovChain::max_row_sum_error() const {
    double worst = 0.0;
    for (StateId x = 0; x < landscape_->size(); ++x) {
        const double diag = 1.0 - escape_[x];
        double row = diag;
        for (const Neighbor& nb : landscape_->neighbors(x)) row += transition(x, nb.edge);
        worst = std::max(worst, std::abs(row - 1.0));
        if (diag < 0.0) worst = std::max(worst, -diag);
    }
    return worst;
}

double MarkovChain::detailed_balance_residual() const {
    double worst = 0.0;
    for (std::uint32_t e = 0; e < landscape_->edges().size(); ++e) {
        const Edge& ed = landscape_->edges()[e];
        const double lhs = gibbs_.log_prob[ed.a] + log_transition(ed.a, e);
        const double rhs = gibbs_.log_prob[ed.b] + log_transition(ed.b, e);
        worst = std::max(worst, std::abs(std::expm1(lhs - rhs)));
    }
    return worst;
}

FormValue dirichlet_form(const MarkovChain& chain, std::span<const double> h) {
    const auto& landscape = chain.landscape();
    if (h.size() != landscape.size()) throw InputError("function must have one value per state");
    const auto edges = landscape.edges();
    std::vector<double> logs;
    logs.reserve(edges.size());
    for (std::uint32_t e = 0; e < edges.size(); ++e) {
        const double d = h[edges[e].a] - h[edges[e].b];
        if (d != 0.0) logs.push_back(chain.log_conductance(e) + 2.0 * std::log(std::abs(d)));
    }
    FormValue out;
    if (logs.empty()) {
        out.log_value = -kInf;
        return out;
    }
    out.log_value = log_sum_exp(logs);
    out.value = std::exp(out.log_value);
    return out;
}

std::vector<double> equilibrium_potential(const MarkovChain& chain, std::span<const StateId> a_set,
                                          std::span<const StateId> b_set) {
    const auto& landscape = chain.landscape();
    const auto mark = boundary_marks(landscape, a_set, b_set);
    std::vector<double> h(landscape.size(), 0.0), rhs(landscape.size(), 0.0);
    std::vector<char> free(landscape.size(), 0);
    for (StateId x = 0; x < landscape.size(); ++x) {
        if (mark[x] == 1) h[x] = 1.0;
        free[x] = mark[x] == 0;
    }
    solve_free(chain, free, rhs, h);
    return h;
}

std::vector<double> absorption_probability(const MarkovChain& chain, std::span<const StateId> a_set,
                                           std::span<const StateId> b_set) {
    const auto& landscape = chain.landscape();
    const auto mark = boundary_marks(landscape, a_set, b_set);
    const std::size_t n = landscape.size();
    if (n > kDenseLimit) throw ResourceError("absorption_probability is dense; too many states");
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (StateId x = 0; x < n; ++x)
        for (const Neighbor& nb : landscape.neighbors(x)) p(x, nb.to) = chain.transition(x, nb.edge);

    std::vector<StateId> order;
    for (StateId x = 0; x < n; ++x)
        if (mark[x] == 0) order.push_back(x);
    std::vector<char> alive(n, 1);
    std::vector<double> out_rate(n, 0.0);
    for (StateId x : order) {
        alive[x] = 0;
        double s = 0.0;
        for (StateId z = 0; z < n; ++z)
            if (alive[z]) s += p(x, z);
        if (!(s > 0.0)) throw InputError("singular system: a free state cannot reach A u B");
        out_rate[x] = s;
        for (StateId y = 0; y < n; ++y) {
            if (!alive[y] || p(y, x) == 0.0) continue;
            const double f = p(y, x) / s;
            for (StateId z = 0; z < n; ++z)
                if (alive[z] && z != y) p(y, z) += f * p(x, z);
        }
    }
    std::vector<double> h(n, 0.0);
    for (StateId x = 0; x < n; ++x)
        if (mark[x] == 1) h[x] = 1.0;
    std::fill(alive.begin(), alive.end(), 0);
    for (StateId x = 0; x < n; ++x)
        if (mark[x] != 0) alive[x] = 1;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const StateId x = *it;
        double acc = 0.0;
        for (StateId z = 0; z < n; ++z)
            if (alive[z]) acc += p(x, z) * h[z];
        h[x] = acc / out_rate[x];
        alive[x] = 1;
    }
    return h;
}

CapacityResult capacity_of(const MarkovChain& chain, std::span<const StateId> a_set, std::span<const StateId> b_set) {
    CapacityResult r;
    r.potential = equilibrium_potential(chain, a_set, b_set);
    r.a_set.assign(a_set.begin(), a_set.end());
    r.b_set.assign(b_set.begin(), b_set.end());
    std::sort(r.a_set.begin(), r.a_set.end());
    std::sort(r.b_set.begin(), r.b_set.end());
    r.beta = chain.beta();
    const auto& landscape = chain.landscape();
    if (landscape.size() <= kDenseLimit) {
        // Eliminating every free state leaves the effective conductances
        // between the two sets; CAP is their total, symmetric by construction.
        const auto mark = boundary_marks(landscape, a_set, b_set);
        std::vector<char> free(mark.size()), in_a(mark.size()), in_b(mark.size());
        for (std::size_t x = 0; x < mark.size(); ++x) {
            free[x] = mark[x] == 0;
            in_a[x] = mark[x] == 1;
            in_b[x] = mark[x] == 2;
        }
        double log_scale = 0.0;
        WeightMatrix w = conductances(chain, log_scale);
        const auto el = eliminate(std::move(w), free, r.potential, std::vector<double>(mark.size(), 0.0), &in_a, &in_b);
        r.log_capacity = el.boundary_flow > 0.0 ? std::log(el.boundary_flow) + log_scale : -kInf;
        r.capacity = std::exp(r.log_capacity);
        return r;
    }
    const auto form = dirichlet_form(chain, r.potential);
    r.capacity = form.value;
    r.log_capacity = form.log_value;
    return r;
}

EasyBoundsProbe easy_bounds_probe(const EnergyLandscape& landscape, const Connectivity& connectivity,
                                  std::span<const StateId> a_set, std::span<const StateId> b_set,
                                  std::span<const double> beta_grid) {
    if (beta_grid.size() < 4) throw InputError("beta grid needs at least 4 points");
    for (std::size_t i = 1; i < beta_grid.size(); ++i)
        if (!(beta_grid[i] > beta_grid[i - 1])) throw InputError("beta grid must be increasing");
    const double phi = communication_height_sets(landscape, a_set, b_set);
    EasyBoundsProbe probe;
    for (double beta : beta_grid) {
        MarkovChain chain(landscape, connectivity, beta);
        const auto cap = capacity_of(chain, a_set, b_set);
        // log g = beta Phi + log Z + log CAP; log Z cancels inside the conductances.
        const double log_g = beta * phi + chain.gibbs().log_partition + cap.log_capacity;
        probe.beta.push_back(beta);
        probe.log_g.push_back(log_g);
        probe.g.push_back(std::exp(log_g));
    }
    probe.min_g = *std::min_element(probe.g.begin(), probe.g.end());
    probe.max_g = *std::max_element(probe.g.begin(), probe.g.end());
    const std::size_t k = probe.beta.size() - 1;
    probe.final_slope = std::abs((probe.log_g[k] - probe.log_g[k - 1]) / (probe.beta[k] - probe.beta[k - 1]));
    return probe;
}

PtaRatio pta_ratio(const EnergyLandscape& landscape, const Connectivity& connectivity,
                   std::span<const StateId> m_set, double beta) {
    check_ids(landscape, m_set, "M");
    std::vector<char> in_m(landscape.size(), 0);
    for (StateId x : m_set) in_m[x] = 1;
    std::size_t m_size = 0;
    for (char c : in_m) m_size += c;
    if (m_size == landscape.size()) throw InputError("M = X: numerator undefined");
    if (m_size == 1) throw InputError("denominator undefined: |M| = 1");

    MarkovChain chain(landscape, connectivity, beta);
    const auto& mu = chain.gibbs();
    StateSet m_sorted;
    for (StateId x = 0; x < landscape.size(); ++x)
        if (in_m[x]) m_sorted.push_back(x);

    double num = -kInf;
    for (StateId x = 0; x < landscape.size(); ++x) {
        if (in_m[x]) continue;
        const StateId single[] = {x};
        const auto cap = capacity_of(chain, single, m_sorted);
        num = std::max(num, mu.log_prob[x] - cap.log_capacity);
    }
    double den = kInf;
    for (StateId x : m_sorted) {
        StateSet rest;
        for (StateId y : m_sorted)
            if (y != x) rest.push_back(y);
        const StateId single[] = {x};
        const auto cap = capacity_of(chain, single, rest);
        den = std::min(den, mu.log_prob[x] - cap.log_capacity);
    }
    PtaRatio r;
    r.log_ratio = num - den;
    r.ratio = std::exp(r.log_ratio);
    return r;
}

PtaDecay pta_decay(const EnergyLandscape& landscape, const Connectivity& connectivity,
                   std::span<const StateId> m_set, std::span<const double> beta_grid) {
    if (beta_grid.size() < 2) throw InputError("beta grid needs at least 2 points");
    PtaDecay d;
    for (double beta : beta_grid) {
        d.beta.push_back(beta);
        d.log_ratio.push_back(pta_ratio(landscape, connectivity, m_set, beta).log_ratio);
    }
    d.slope = fit_line(d.beta, d.log_ratio).slope;
    d.metastable = d.slope < kPtaSlopeThreshold;
    return d;
}

StateSet valley_of(const MarkovChain& chain, std::span<const StateId> m_set, StateId x) {
    const auto& landscape = chain.landscape();
    check_ids(landscape, m_set, "M");
    StateSet m(m_set.begin(), m_set.end());
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
    if (!std::binary_search(m.begin(), m.end(), x)) throw InputError("x must belong to M");
    const std::size_t n = landscape.size();
    if (m.size() == 1) {
        StateSet all(n);
        for (StateId y = 0; y < n; ++y) all[y] = y;
        return all;
    }
    // hit[k][y] = P_y(tau_{m_k} = tau_M)
    std::vector<std::vector<double>> hit;
    for (StateId z : m) {
        StateSet rest;
        for (StateId w : m)
            if (w != z) rest.push_back(w);
        const StateId single[] = {z};
        hit.push_back(equilibrium_potential(chain, single, rest));
    }
    const auto xk = static_cast<std::size_t>(std::lower_bound(m.begin(), m.end(), x) - m.begin());
    StateSet valley;
    for (StateId y = 0; y < n; ++y) {
        double best = 0.0;
        for (const auto& hz : hit) best = std::max(best, hz[y]);
        if (hit[xk][y] >= best - 1e-12 * std::max(best, 1e-300)) valley.push_back(y);
    }
    return valley;
}

std::vector<double> mean_hitting_times(const MarkovChain& chain, std::span<const StateId> j_set) {
    const auto& landscape = chain.landscape();
    check_ids(landscape, j_set, "J");
    std::vector<char> free(landscape.size(), 1);
    for (StateId y : j_set) free[y] = 0;
    std::vector<double> rhs(landscape.size(), 1.0), t(landscape.size(), 0.0);
    solve_free(chain, free, rhs, t);
    return t;
}

MeanHitting mean_hitting_exact(const MarkovChain& chain, StateId x, std::span<const StateId> j_set) {
    const auto& landscape = chain.landscape();
    check_ids(landscape, j_set, "J");
    if (x >= landscape.size()) throw InputError("state out of range");
    MeanHitting r;
    if (std::find(j_set.begin(), j_set.end(), x) != j_set.end()) {
        r.exact = 0.0;
        r.log_exact = -kInf;
        return r;
    }
    r.exact = mean_hitting_times(chain, j_set)[x];
    r.log_exact = std::log(r.exact);
    StateSet m(j_set.begin(), j_set.end());
    m.push_back(x);
    const auto valley = valley_of(chain, m, x);
    const StateId single[] = {x};
    const auto cap = capacity_of(chain, single, j_set);
    r.log_estimate = chain.gibbs().log_mass(valley) - cap.log_capacity;
    r.estimate = std::exp(r.log_estimate);
    r.ratio = std::exp(r.log_exact - r.log_estimate);
    return r;
}

LumpedChain::LumpedChain(const MarkovChain& chain, std::span<const std::uint32_t> block_of)
    : block_of_(block_of.begin(), block_of.end()) {
    const auto& landscape = chain.landscape();
    if (block_of_.size() != landscape.size()) throw InputError("need one block label per state");
    std::uint32_t nb = 0;
    for (auto b : block_of_) nb = std::max(nb, b + 1);
    if (nb > kDenseLimit) throw ResourceError("lumped chain is dense; too many blocks");
    reps_.assign(nb, static_cast<StateId>(landscape.size()));
    for (StateId x = 0; x < landscape.size(); ++x)
        if (reps_[block_of_[x]] == landscape.size()) reps_[block_of_[x]] = x;
    for (auto r : reps_)
        if (r == landscape.size()) throw InputError("block labels must be contiguous");
    jump_.assign(static_cast<std::size_t>(nb) * nb, 0.0);
    std::vector<double> row(nb, 0.0);
    std::vector<std::uint32_t> touched;
    for (StateId x = 0; x < landscape.size(); ++x) {
        const auto bx = block_of_[x];
        for (const Neighbor& n : landscape.neighbors(x)) {
            const auto by = block_of_[n.to];
            if (by == bx) continue;
            if (row[by] == 0.0) touched.push_back(by);
            row[by] += chain.transition(x, n.edge);
        }
        double* dst = &jump_[static_cast<std::size_t>(bx) * nb];
        if (reps_[bx] == x) {
            for (auto by : touched) dst[by] = row[by];
        } else {
            for (auto by : touched) residual_ = std::max(residual_, std::abs(dst[by] - row[by]));
            for (std::uint32_t by = 0; by < nb; ++by)
                if (dst[by] != 0.0 && row[by] == 0.0 && by != bx) residual_ = std::max(residual_, dst[by]);
        }
        for (auto by : touched) row[by] = 0.0;
        touched.clear();
    }
    if (residual_ > 1e-9) throw InputError("partition is not lumpable for this chain");
}

namespace {
WeightMatrix jump_weights(const std::vector<double>& jump, std::size_t nb) {
    WeightMatrix w(nb);
    w.w = jump;
    for (std::size_t i = 0; i < nb; ++i) w.at(i, i) = 0.0;
    return w;
}

std::vector<char> block_marks(std::size_t nb, std::span<const std::uint32_t> blocks, const char* what) {
    std::vector<char> mark(nb, 0);
    if (blocks.empty()) throw InputError(std::string("empty set ") + what);
    for (auto b : blocks) {
        if (b >= nb) throw InputError(std::string("block out of range in ") + what);
        mark[b] = 1;
    }
    return mark;
}
}  // namespace

std::vector<double> LumpedChain::mean_hitting_times(std::span<const std::uint32_t> j_blocks) const {
    const std::size_t nb = blocks();
    const auto fixed = block_marks(nb, j_blocks, "J");
    std::vector<char> free(nb);
    std::vector<double> rhs(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        free[i] = !fixed[i];
        rhs[i] = fixed[i] ? 0.0 : 1.0;
    }
    return eliminate(jump_weights(jump_, nb), free, std::vector<double>(nb, 0.0), std::move(rhs)).u;
}

std::vector<double> LumpedChain::hitting_probability(std::span<const std::uint32_t> a_blocks,
                                                     std::span<const std::uint32_t> b_blocks) const {
    const std::size_t nb = blocks();
    const auto in_a = block_marks(nb, a_blocks, "A");
    const auto in_b = block_marks(nb, b_blocks, "B");
    std::vector<char> free(nb, 0);
    std::vector<double> h(nb, 0.0);
    for (std::size_t i = 0; i < nb; ++i) {
        if (in_a[i] && in_b[i]) throw InputError("A and B must be disjoint");
        free[i] = !(in_a[i] || in_b[i]);
        h[i] = in_a[i] ? 1.0 : 0.0;
    }
    return eliminate(jump_weights(jump_, nb), free, std::move(h), std::vector<double>(nb, 0.0)).u;
}

}  // namespace metastab
