#include "metastab/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "metastab/union_find.hpp"

namespace metastab {

long EnergyLandscape::find_edge(StateId x, StateId y) const {
    for (const Neighbor& nb : neighbors(x))
        if (nb.to == y) return nb.edge;
    return -1;
}

LandscapeBuilder::LandscapeBuilder(std::vector<double> energy, CostMode mode)
    : mode_(mode), energy_(std::move(energy)) {
    if (energy_.empty()) throw InputError("landscape needs at least one state");
    for (double e : energy_)
        if (!std::isfinite(e)) throw InputError("energies must be finite");
}

void LandscapeBuilder::check_pair(StateId a, StateId b) const {
    if (a >= energy_.size() || b >= energy_.size())
        throw InputError("edge endpoint out of range: " + std::to_string(a) + " " + std::to_string(b));
    if (a == b) throw InputError("self-loop on state " + std::to_string(a));
}

LandscapeBuilder& LandscapeBuilder::add_edge(StateId a, StateId b) {
    if (mode_ != CostMode::metropolis) throw InputError("explicit-cost landscape needs edge costs");
    check_pair(a, b);
    const double ha = energy_[a], hb = energy_[b];
    edges_.push_back({a, b, std::max(hb - ha, 0.0), std::max(ha - hb, 0.0), std::max(ha, hb)});
    return *this;
}

LandscapeBuilder& LandscapeBuilder::add_edge(StateId a, StateId b, double cost_ab, double cost_ba) {
    if (mode_ != CostMode::explicit_costs) throw InputError("metropolis landscape derives its costs");
    check_pair(a, b);
    if (!std::isfinite(cost_ab) || !std::isfinite(cost_ba)) throw InputError("costs must be finite");
    edges_.push_back({a, b, cost_ab, cost_ba,
                      std::max(energy_[a] + cost_ab, energy_[b] + cost_ba)});
    return *this;
}

EnergyLandscape LandscapeBuilder::build() && {
    const std::size_t n = energy_.size();
    std::vector<std::pair<StateId, StateId>> keys;
    keys.reserve(edges_.size());
    for (const Edge& e : edges_) keys.emplace_back(std::min(e.a, e.b), std::max(e.a, e.b));
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
        throw InputError("duplicate edge");

    EnergyLandscape out;
    out.mode_ = mode_;
    out.offsets_.assign(n + 1, 0);
    for (const Edge& e : edges_) {
        ++out.offsets_[e.a + 1];
        ++out.offsets_[e.b + 1];
    }
    for (std::size_t i = 0; i < n; ++i) out.offsets_[i + 1] += out.offsets_[i];
    out.adjacency_.resize(out.offsets_[n]);
    std::vector<std::size_t> fill(out.offsets_.begin(), out.offsets_.end() - 1);
    for (std::uint32_t i = 0; i < edges_.size(); ++i) {
        out.adjacency_[fill[edges_[i].a]++] = {edges_[i].b, i};
        out.adjacency_[fill[edges_[i].b]++] = {edges_[i].a, i};
    }
    out.min_energy_ = *std::min_element(energy_.begin(), energy_.end());
    out.energy_ = std::move(energy_);
    out.edges_ = std::move(edges_);
    return out;
}

LandscapeDiagnostics validate_landscape(const EnergyLandscape& landscape) {
    LandscapeDiagnostics diag;
    UnionFind uf(landscape.size());
    const auto edges = landscape.edges();
    for (std::uint32_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        uf.merge(e.a, e.b);
        const double r = std::abs(landscape.energy(e.a) + e.cost_ab - e.cost_ba - landscape.energy(e.b));
        diag.max_residual = std::max(diag.max_residual, r);
        if (r > kReversibilityTol) diag.irreversible.push_back({i, e.a, e.b, r});
        if (e.cost_ab < 0.0 || e.cost_ba < 0.0) diag.negative_cost.push_back({i, e.a, e.b, r});
    }
    diag.components = uf.components();
    diag.connected = diag.components == 1;
    return diag;
}

void require_valid(const EnergyLandscape& landscape) {
    const auto diag = validate_landscape(landscape);
    if (!diag.connected) throw InputError("landscape is not connected");
    if (!diag.irreversible.empty()) throw InputError("landscape is not reversible");
    if (!diag.negative_cost.empty()) throw InputError("landscape has negative costs");
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream ss(body);
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;) out.push_back(tok);
    return out;
}

double parse_real(const std::string& tok, std::size_t line) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "expected a real number, got '" + tok + "'");
    }
}

StateId parse_id(const std::string& tok, std::size_t line) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(line, "expected a state id, got '" + tok + "'");
    try {
        unsigned long v = std::stoul(tok);
        if (v > std::numeric_limits<StateId>::max()) throw std::out_of_range(tok);
        return static_cast<StateId>(v);
    } catch (const std::exception&) {
        throw ParseError(line, "state id out of range '" + tok + "'");
    }
}

}  // namespace

EnergyLandscape read_landscape(std::istream& in) {
    enum class Stage { header, mode, states, body } stage = Stage::header;
    CostMode mode = CostMode::metropolis;
    std::size_t n = 0;
    std::vector<double> energy;
    std::vector<bool> seen;
    struct RawEdge {
        std::size_t line;
        StateId a, b;
        double ab, ba;
    };
    std::vector<RawEdge> raw;

    std::string text;
    std::size_t lineno = 0;
    while (std::getline(in, text)) {
        ++lineno;
        const auto tok = tokenize(text);
        if (tok.empty()) continue;
        switch (stage) {
            case Stage::header:
                if (tok.size() != 2 || tok[0] != "landscape" || tok[1] != "v1")
                    throw ParseError(lineno, "expected header 'landscape v1'");
                stage = Stage::mode;
                break;
            case Stage::mode:
                if (tok.size() != 2 || tok[0] != "mode") throw ParseError(lineno, "expected 'mode metropolis|explicit'");
                if (tok[1] == "metropolis") mode = CostMode::metropolis;
                else if (tok[1] == "explicit") mode = CostMode::explicit_costs;
                else throw ParseError(lineno, "unknown mode '" + tok[1] + "'");
                stage = Stage::states;
                break;
            case Stage::states:
                if (tok.size() != 2 || tok[0] != "states") throw ParseError(lineno, "expected 'states N'");
                n = parse_id(tok[1], lineno);
                if (n == 0) throw ParseError(lineno, "need at least one state");
                energy.assign(n, 0.0);
                seen.assign(n, false);
                stage = Stage::body;
                break;
            case Stage::body:
                if (tok[0] == "s") {
                    if (tok.size() != 3) throw ParseError(lineno, "expected 's <id> <H>'");
                    StateId id = parse_id(tok[1], lineno);
                    if (id >= n) throw ParseError(lineno, "state id " + tok[1] + " out of range");
                    if (seen[id]) throw ParseError(lineno, "state " + tok[1] + " defined twice");
                    seen[id] = true;
                    energy[id] = parse_real(tok[2], lineno);
                } else if (tok[0] == "e") {
                    const bool expl = mode == CostMode::explicit_costs;
                    if (tok.size() != (expl ? 5u : 3u))
                        throw ParseError(lineno, expl ? "expected 'e <i> <j> <dij> <dji>'" : "expected 'e <i> <j>'");
                    RawEdge e{lineno, parse_id(tok[1], lineno), parse_id(tok[2], lineno), 0.0, 0.0};
                    if (e.a >= n || e.b >= n) throw ParseError(lineno, "edge endpoint out of range");
                    if (e.a == e.b) throw ParseError(lineno, "self-loop");
                    if (expl) {
                        e.ab = parse_real(tok[3], lineno);
                        e.ba = parse_real(tok[4], lineno);
                    }
                    raw.push_back(e);
                } else {
                    throw ParseError(lineno, "unknown record '" + tok[0] + "'");
                }
                break;
        }
    }
    if (stage != Stage::body) throw ParseError(lineno, "truncated header");
    for (std::size_t i = 0; i < n; ++i)
        if (!seen[i]) throw ParseError(lineno, "state " + std::to_string(i) + " has no energy");

    LandscapeBuilder builder(std::move(energy), mode);
    for (const RawEdge& e : raw) {
        try {
            if (mode == CostMode::metropolis) builder.add_edge(e.a, e.b);
            else builder.add_edge(e.a, e.b, e.ab, e.ba);
        } catch (const InputError& err) {
            throw ParseError(e.line, err.what());
        }
    }
    try {
        return std::move(builder).build();
    } catch (const InputError& err) {
        throw ParseError(lineno, err.what());
    }
}

EnergyLandscape read_landscape_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return read_landscape(in);
}

void write_landscape(std::ostream& out, const EnergyLandscape& landscape) {
    const bool expl = landscape.mode() == CostMode::explicit_costs;
    out << "landscape v1\n"
        << "mode " << (expl ? "explicit" : "metropolis") << "\n"
        << "states " << landscape.size() << "\n";
    out << std::setprecision(17);
    for (StateId x = 0; x < landscape.size(); ++x) out << "s " << x << ' ' << landscape.energy(x) << '\n';
    for (const Edge& e : landscape.edges()) {
        out << "e " << e.a << ' ' << e.b;
        if (expl) out << ' ' << e.cost_ab << ' ' << e.cost_ba;
        out << '\n';
    }
}

}  // namespace metastab
