#include "metastab/blume_capel.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

namespace metastab::bc {

ConditionReport condition_report(const ModelParams& p) {
    ConditionReport r;
    r.h_in_unit_interval = p.h > 0.0 && p.h < 1.0;
    if (p.h > 0.0) {
        const double q = 2.0 / p.h;
        r.two_over_h_not_integer = std::abs(q - std::round(q)) > 1e-12 * q;
        r.volume_required = 49.0 / (p.h * p.h * p.h * p.h);
    } else {
        r.volume_required = INFINITY;
    }
    r.volume_ok = static_cast<double>(p.L) * p.L >= r.volume_required;
    if (!r.h_in_unit_interval) r.warnings.push_back("h outside (0, 1)");
    if (!r.two_over_h_not_integer) r.warnings.push_back("2/h is an integer");
    if (!r.volume_ok) {
        std::ostringstream os;
        os << "L^2 = " << p.L * p.L << " < 49/h^4 = " << r.volume_required;
        r.warnings.push_back(os.str());
    }
    r.ok = r.warnings.empty();
    return r;
}

void validate_params(const ModelParams& p) {
    if (p.L < 2) throw InputError("L must be >= 2");
    if (!std::isfinite(p.h) || !std::isfinite(p.lambda)) throw InputError("h and lambda must be finite");
}

void require_zero_lambda(const ModelParams& p) {
    if (p.lambda != 0.0) throw InputError("only lambda = 0 is covered by the barrier and droplet results");
}

SpinConfiguration::SpinConfiguration(int L, Spin fill) : L_(L), spins_(static_cast<std::size_t>(L) * L, fill) {
    if (L < 2) throw InputError("L must be >= 2");
    if (fill < -1 || fill > 1) throw InputError("spin must be -1, 0 or +1");
}

SpinConfiguration::SpinConfiguration(int L, std::vector<Spin> spins) : L_(L), spins_(std::move(spins)) {
    if (L < 2) throw InputError("L must be >= 2");
    if (spins_.size() != static_cast<std::size_t>(L) * L) throw InputError("need L^2 spins");
    for (Spin s : spins_)
        if (s < -1 || s > 1) throw InputError("spin must be -1, 0 or +1");
}

void SpinConfiguration::set(std::size_t i, Spin s) {
    if (s < -1 || s > 1) throw InputError("spin must be -1, 0 or +1");
    spins_.at(i) = s;
}

std::size_t SpinConfiguration::index(int r, int c) const {
    r %= L_;
    c %= L_;
    if (r < 0) r += L_;
    if (c < 0) c += L_;
    return static_cast<std::size_t>(r) * L_ + c;
}

std::array<std::size_t, 4> SpinConfiguration::neighbors(std::size_t i) const {
    const int r = static_cast<int>(i / L_), c = static_cast<int>(i % L_);
    return {index(r - 1, c), index(r + 1, c), index(r, c - 1), index(r, c + 1)};
}

std::uint64_t SpinConfiguration::encode() const {
    if (L_ > 5) throw InputError("base-3 code needs L <= 5");
    std::uint64_t id = 0;
    for (Spin s : spins_) id = id * 3 + static_cast<std::uint64_t>(s + 1);
    return id;
}

SpinConfiguration SpinConfiguration::decode(int L, std::uint64_t id) {
    if (L > 5) throw InputError("base-3 code needs L <= 5");
    std::vector<Spin> spins(static_cast<std::size_t>(L) * L);
    for (std::size_t k = spins.size(); k-- > 0;) {
        spins[k] = static_cast<Spin>(id % 3) - 1;
        id /= 3;
    }
    if (id != 0) throw InputError("code out of range");
    return SpinConfiguration(L, std::move(spins));
}

SpinConfiguration phase_d(int L) { return SpinConfiguration(L, Spin{-1}); }
SpinConfiguration phase_0(int L) { return SpinConfiguration(L, Spin{0}); }
SpinConfiguration phase_u(int L) { return SpinConfiguration(L, Spin{1}); }

EnergyParts energy_parts(const SpinConfiguration& config) {
    EnergyParts e;
    const int L = config.side();
    for (int r = 0; r < L; ++r)
        for (int c = 0; c < L; ++c) {
            const long s = config.at(r, c);
            const long down = s - config.at(r + 1, c), right = s - config.at(r, c + 1);
            e.bond += down * down + right * right;
            e.magnet += s;
            e.nonzero += s * s;
        }
    return e;
}

double hamiltonian(const SpinConfiguration& config, const ModelParams& params) {
    return energy_parts(config).value(params);
}

EnergyParts single_flip_parts(const SpinConfiguration& config, std::size_t site, Spin new_spin) {
    if (new_spin < -1 || new_spin > 1) throw InputError("spin must be -1, 0 or +1");
    const long s = config[site], a = new_spin;
    EnergyParts d;
    for (std::size_t j : config.neighbors(site)) {
        const long n = config[j];
        d.bond += (a - n) * (a - n) - (s - n) * (s - n);
    }
    d.magnet = a - s;
    d.nonzero = a * a - s * s;
    return d;
}

double single_flip_delta(const SpinConfiguration& config, std::size_t site, Spin new_spin,
                         const ModelParams& params) {
    return single_flip_parts(config, site, new_spin).value(params);
}

namespace {
int critical_length(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw InputError("h must be positive");
    return static_cast<int>(std::floor(2.0 / h)) + 1;
}
}  // namespace

CriticalQuantities critical_quantities(const ModelParams& params) {
    validate_params(params);
    require_zero_lambda(params);
    CriticalQuantities q;
    q.lc = critical_length(params.h);
    const double lc = q.lc;
    q.gamma_c = 4.0 * lc - params.h * (lc * (lc - 1.0) + 1.0);
    q.bounds_hold = 2.0 / params.h < lc && lc < 2.0 / params.h + 1.0 && q.lc >= 3;
    q.condition = condition_report(params);
    return q;
}

Spin background_spin(PhasePair phases) { return phases == PhasePair::zero_in_minus ? Spin{-1} : Spin{0}; }
Spin foreground_spin(PhasePair phases) { return phases == PhasePair::zero_in_minus ? Spin{0} : Spin{1}; }

SpinConfiguration droplet_config(const DropletSpec& spec, const ModelParams& params) {
    const CriticalQuantities q = critical_quantities(params);
    const int lc = q.lc;
    if (params.L < lc + 2) throw InputError("droplet does not fit: need L >= lc + 2");
    if (spec.offset < 0 || spec.offset >= lc) throw InputError("protuberance offset must lie along the long side");
    const int rows = spec.horizontal ? lc - 1 : lc;
    const int cols = spec.horizontal ? lc : lc - 1;
    SpinConfiguration out(params.L, background_spin(spec.phases));
    const Spin fg = foreground_spin(spec.phases);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) out.set(spec.row + r, spec.col + c, fg);
    if (spec.horizontal)
        out.set(spec.far_side ? spec.row + rows : spec.row - 1, spec.col + spec.offset, fg);
    else
        out.set(spec.row + spec.offset, spec.far_side ? spec.col + cols : spec.col - 1, fg);
    return out;
}

bool is_critical_droplet(const SpinConfiguration& config, const ModelParams& params, DropletSet which) {
    const int L = config.side();
    const int lc = critical_length(params.h);
    const PhasePair phases = which == DropletSet::P_c ? PhasePair::zero_in_minus : PhasePair::plus_in_zero;
    const Spin bg = background_spin(phases), fg = foreground_spin(phases);
    const std::size_t area = static_cast<std::size_t>(lc) * (lc - 1) + 1;
    std::size_t count = 0;
    for (Spin s : config.spins()) {
        if (s == fg) ++count;
        else if (s != bg) return false;
    }
    if (count != area || lc > L) return false;
    auto mod = [L](int v) { return ((v % L) + L) % L; };
    for (int orient = 0; orient < 2; ++orient) {
        const bool horizontal = orient == 0;
        const int rows = horizontal ? lc - 1 : lc, cols = horizontal ? lc : lc - 1;
        for (int r0 = 0; r0 < L; ++r0)
            for (int c0 = 0; c0 < L; ++c0) {
                std::vector<char> in_rect(config.sites(), 0);
                bool full = true;
                for (int r = 0; r < rows && full; ++r)
                    for (int c = 0; c < cols && full; ++c) {
                        const auto i = config.index(r0 + r, c0 + c);
                        full = config[i] == fg;
                        in_rect[i] = 1;
                    }
                if (!full) continue;
                std::size_t extra = config.sites();
                for (std::size_t i = 0; i < config.sites(); ++i)
                    if (config[i] == fg && !in_rect[i]) extra = i;
                const int pr = static_cast<int>(extra / L), pc = static_cast<int>(extra % L);
                if (horizontal) {
                    const bool on_long = pr == mod(r0 - 1) || pr == mod(r0 + rows);
                    const bool along = mod(pc - c0) < cols;
                    if (on_long && along) return true;
                } else {
                    const bool on_long = pc == mod(c0 - 1) || pc == mod(c0 + cols);
                    const bool along = mod(pr - r0) < rows;
                    if (on_long && along) return true;
                }
            }
    }
    return false;
}

namespace {
// Cells in the order the droplet grows: a protuberance on a longest side of
// the current square or quasi-square, then the rest of that slice.
std::vector<std::pair<int, int>> growth_order(int L) {
    std::vector<std::pair<int, int>> out{{0, 0}};
    int r = 1, c = 1;
    while (r < L || c < L) {
        if (r == c) {
            for (int i = 0; i < r; ++i) out.emplace_back(i, c);
            ++c;
        } else {
            for (int j = 0; j < c; ++j) out.emplace_back(r, j);
            ++r;
        }
    }
    return out;
}
}  // namespace

ReferencePath reference_path(const ModelParams& params) {
    const CriticalQuantities q = critical_quantities(params);
    if (params.L < q.lc + 2) throw InputError("lattice too small for the reference path: need L >= lc + 2");
    const auto order = growth_order(params.L);
    ReferencePath path;
    SpinConfiguration x = phase_d(params.L);
    EnergyParts parts = energy_parts(x);
    std::vector<EnergyParts> trail;
    auto push = [&] {
        path.states.push_back(x);
        path.energy.push_back(parts.value(params));
        trail.push_back(parts);
    };
    push();
    for (Spin fg : {Spin{0}, Spin{1}}) {
        for (auto [r, c] : order) {
            const auto i = x.index(r, c);
            const EnergyParts d = single_flip_parts(x, i, fg);
            parts.bond += d.bond;
            parts.magnet += d.magnet;
            parts.nonzero += d.nonzero;
            x.set(i, fg);
            push();
        }
        if (fg == 0) path.zero_index = path.states.size() - 1;
    }
    // Excess from integer differences, so it is exactly perimeter - h area.
    auto excess = [&](std::size_t j, std::size_t from) {
        return EnergyParts{trail[j].bond - trail[from].bond, trail[j].magnet - trail[from].magnet,
                           trail[j].nonzero - trail[from].nonzero}
            .value(params);
    };
    for (std::size_t j = 0; j <= path.zero_index; ++j) path.leg1_excess.push_back(excess(j, 0));
    for (std::size_t j = path.zero_index; j < path.energy.size(); ++j)
        path.leg2_excess.push_back(excess(j, path.zero_index));
    return path;
}

bool manifold_membership(const SpinConfiguration& config, const ModelParams& params, Manifold which) {
    const CriticalQuantities q = critical_quantities(params);
    const long droplet = static_cast<long>(q.lc) * (q.lc - 1) + 1;
    const long n = static_cast<long>(config.sites());
    long minus = 0, plus = 0;
    for (Spin s : config.spins()) {
        minus += s == -1;
        plus += s == 1;
    }
    if (which == Manifold::X_minus) return minus == n - droplet;
    return minus == 0 && plus == droplet;
}

SpinConfiguration realize(const Polyomino& poly, int L, PhasePair phases) {
    const Rectangle box = surrounding_rectangle(poly);
    if (box.width >= L || box.height >= L) throw InputError("formula invalid for winding sets");
    SpinConfiguration out(L, background_spin(phases));
    for (const Cell& x : poly.cells()) out.set(x.r, x.c, foreground_spin(phases));
    return out;
}

double droplet_energy(const Polyomino& poly, const ModelParams& params, PhasePair phases) {
    validate_params(params);
    const Rectangle box = surrounding_rectangle(poly);
    if (box.width >= params.L || box.height >= params.L) throw InputError("formula invalid for winding sets");
    const PolyominoMeasure m = measure(poly);
    // Each foreground cell moves the magnetization by +1 in both phase pairs;
    // s^2 drops by one for 0-in-minus and rises by one for plus-in-zero.
    const double sq = phases == PhasePair::zero_in_minus ? -1.0 : 1.0;
    return static_cast<double>(m.perimeter) - params.h * static_cast<double>(m.area) -
           params.lambda * sq * static_cast<double>(m.area);
}

double enumeration_memory_estimate(int L) {
    const double states = std::pow(3.0, static_cast<double>(L) * L);
    const double edges = states * L * L;
    // energies and offsets per state; edge records, two adjacency slots and
    // the builder's staging copy per edge.
    return states * 16.0 + edges * (sizeof(Edge) + 2 * sizeof(Neighbor) + 16.0);
}

EnergyLandscape enumerate_torus(const ModelParams& params, double memory_budget) {
    validate_params(params);
    const int L = params.L;
    const double need = enumeration_memory_estimate(L);
    if (L > 4 || need > memory_budget) {
        std::ostringstream os;
        os << "enumeration needs about " << std::llround(need) << " bytes for L = " << L << ", budget is "
           << std::llround(memory_budget) << " bytes";
        throw ResourceError(os.str());
    }
    const int sites = L * L;
    std::uint64_t n = 1;
    for (int i = 0; i < sites; ++i) n *= 3;
    std::vector<double> energy(n);
    for (std::uint64_t id = 0; id < n; ++id) energy[id] = hamiltonian(SpinConfiguration::decode(L, id), params);
    LandscapeBuilder builder(std::move(energy), CostMode::metropolis);
    std::vector<std::uint64_t> weight(sites);
    for (int i = sites - 1, w = 1; i >= 0; --i, w *= 3) weight[i] = static_cast<std::uint64_t>(w);
    for (std::uint64_t id = 0; id < n; ++id) {
        std::uint64_t rest = id;
        for (int i = sites - 1; i >= 0; --i) {
            const auto digit = rest % 3;
            rest /= 3;
            for (std::uint64_t up = digit + 1; up < 3; ++up)
                builder.add_edge(static_cast<StateId>(id), static_cast<StateId>(id + (up - digit) * weight[i]));
        }
    }
    return std::move(builder).build();
}

std::vector<std::uint32_t> symmetry_blocks(int L) {
    if (L < 2 || L > 4) throw InputError("symmetry blocks need 2 <= L <= 4");
    const int sites = L * L;
    std::uint64_t n = 1;
    for (int i = 0; i < sites; ++i) n *= 3;
    // Site permutations for every symmetry of the torus.
    std::vector<std::vector<int>> perms;
    for (int t = 0; t < 8; ++t)
        for (int dr = 0; dr < L; ++dr)
            for (int dc = 0; dc < L; ++dc) {
                std::vector<int> p(sites);
                for (int r = 0; r < L; ++r)
                    for (int c = 0; c < L; ++c) {
                        int rr = r, cc = c;
                        if (t & 1) std::swap(rr, cc);
                        if (t & 2) rr = L - 1 - rr;
                        if (t & 4) cc = L - 1 - cc;
                        p[r * L + c] = ((rr + dr) % L) * L + (cc + dc) % L;
                    }
                perms.push_back(std::move(p));
            }
    const std::uint32_t unset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> label(n, unset);
    std::uint32_t next = 0;
    std::vector<int> digits(sites), moved(sites);
    for (std::uint64_t id = 0; id < n; ++id) {
        if (label[id] != unset) continue;
        std::uint64_t rest = id;
        for (int i = sites - 1; i >= 0; --i) {
            digits[i] = static_cast<int>(rest % 3);
            rest /= 3;
        }
        for (const auto& p : perms) {
            for (int i = 0; i < sites; ++i) moved[p[i]] = digits[i];
            std::uint64_t code = 0;
            for (int i = 0; i < sites; ++i) code = code * 3 + static_cast<std::uint64_t>(moved[i]);
            label[code] = next;
        }
        ++next;
    }
    return label;
}

std::string to_grid(const SpinConfiguration& config) {
    std::string out;
    for (int r = 0; r < config.side(); ++r) {
        for (int c = 0; c < config.side(); ++c) {
            const Spin s = config.at(r, c);
            out += s < 0 ? '-' : s > 0 ? '+' : '0';
        }
        out += '\n';
    }
    return out;
}

SpinConfiguration parse_grid(std::istream& in) {
    std::vector<Spin> spins;
    std::string line;
    std::size_t lineno = 0, rows = 0, width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (rows == 0) width = line.size();
        else if (line.size() != width) throw ParseError(lineno, "row length differs from the first row");
        for (char ch : line) {
            if (ch == '-') spins.push_back(-1);
            else if (ch == '0') spins.push_back(0);
            else if (ch == '+') spins.push_back(1);
            else throw ParseError(lineno, std::string("unexpected character '") + ch + "'");
        }
        ++rows;
    }
    if (rows != width || rows < 2) throw ParseError(lineno, "grid must be square with side >= 2");
    return SpinConfiguration(static_cast<int>(rows), std::move(spins));
}

SpinConfiguration parse_grid(const std::string& text) {
    std::istringstream in(text);
    return parse_grid(in);
}

Dynamics::Dynamics(ModelParams params) : params_(params) { validate_params(params_); }

namespace {
constexpr std::size_t accept_slot(long db, long dm, long dn) {
    return static_cast<std::size_t>((db + 16) * 15 + (dm + 2) * 3 + (dn + 1));
}
}  // namespace

Dynamics::Sampler Dynamics::at_beta(double beta) const {
    if (!(beta >= 0.0)) throw InputError("beta must be nonnegative");
    Sampler s;
    s.accept_.assign(accept_slot(16, 2, 1) + 1, 0.0);
    for (long db = -16; db <= 16; ++db)
        for (long dm = -2; dm <= 2; ++dm)
            for (long dn = -1; dn <= 1; ++dn) {
                const double delta = EnergyParts{db, dm, dn}.value(params_);
                s.accept_[accept_slot(db, dm, dn)] = delta <= 0.0 ? 1.0 : std::exp(-beta * delta);
            }
    return s;
}

bool Dynamics::Sampler::step(State& st, Rng& rng) const {
    const std::size_t n = st.config.sites();
    const auto k = uniform_below(rng, 2 * n);
    const std::size_t site = k / 2;
    const Spin old = st.config[site];
    // the two values other than `old`, in increasing order
    Spin a = static_cast<Spin>(k % 2 == 0 ? -1 : 1);
    if (old == a) a = 0;
    if (old == 0 && k % 2 == 0) a = -1;
    const EnergyParts d = single_flip_parts(st.config, site, a);
    const double p = accept_[accept_slot(d.bond, d.magnet, d.nonzero)];
    if (p < 1.0 && uniform01(rng) >= p) return false;
    st.config.set(site, a);
    st.parts.bond += d.bond;
    st.parts.magnet += d.magnet;
    st.parts.nonzero += d.nonzero;
    return true;
}

}  // namespace metastab::bc
