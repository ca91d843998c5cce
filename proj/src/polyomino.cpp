#include "metastab/polyomino.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

namespace metastab {

Polyomino::Polyomino(std::vector<Cell> cells) : cells_(std::move(cells)) {
    if (cells_.empty()) throw InputError("polyomino must be nonempty");
    int r0 = cells_[0].r, c0 = cells_[0].c;
    for (const Cell& x : cells_) {
        r0 = std::min(r0, x.r);
        c0 = std::min(c0, x.c);
    }
    for (Cell& x : cells_) {
        x.r -= r0;
        x.c -= c0;
    }
    std::sort(cells_.begin(), cells_.end());
    if (std::adjacent_find(cells_.begin(), cells_.end()) != cells_.end()) throw InputError("duplicate cell");
}

bool Polyomino::contains(Cell x) const { return std::binary_search(cells_.begin(), cells_.end(), x); }

namespace {
constexpr Cell kSteps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
}

PolyominoMeasure measure(const Polyomino& poly) {
    long adj = 0;
    for (const Cell& x : poly.cells()) {
        if (poly.contains({x.r + 1, x.c})) ++adj;
        if (poly.contains({x.r, x.c + 1})) ++adj;
    }
    const long n = static_cast<long>(poly.area());
    return {n, 4 * n - 2 * adj};
}

Rectangle surrounding_rectangle(const Polyomino& poly) {
    int w = 0, h = 0;
    for (const Cell& x : poly.cells()) {
        h = std::max(h, x.r + 1);
        w = std::max(w, x.c + 1);
    }
    return {w, h};
}

PolyominoClass classify(const Polyomino& poly) {
    PolyominoClass out;
    const auto& cells = poly.cells();
    std::vector<char> seen(cells.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const Cell x = cells[stack.back()];
        stack.pop_back();
        for (Cell d : kSteps) {
            const Cell y{x.r + d.r, x.c + d.c};
            auto it = std::lower_bound(cells.begin(), cells.end(), y);
            if (it == cells.end() || *it != y) continue;
            const auto k = static_cast<std::size_t>(it - cells.begin());
            if (!seen[k]) {
                seen[k] = 1;
                ++reached;
                stack.push_back(k);
            }
        }
    }
    out.connected = reached == cells.size();

    const Rectangle box = surrounding_rectangle(poly);
    std::vector<int> lo_r(box.height, box.width), hi_r(box.height, -1), n_r(box.height, 0);
    std::vector<int> lo_c(box.width, box.height), hi_c(box.width, -1), n_c(box.width, 0);
    for (const Cell& x : cells) {
        lo_r[x.r] = std::min(lo_r[x.r], x.c);
        hi_r[x.r] = std::max(hi_r[x.r], x.c);
        ++n_r[x.r];
        lo_c[x.c] = std::min(lo_c[x.c], x.r);
        hi_c[x.c] = std::max(hi_c[x.c], x.r);
        ++n_c[x.c];
    }
    out.convex = true;
    for (int r = 0; r < box.height; ++r)
        if (n_r[r] && hi_r[r] - lo_r[r] + 1 != n_r[r]) out.convex = false;
    for (int c = 0; c < box.width; ++c)
        if (n_c[c] && hi_c[c] - lo_c[c] + 1 != n_c[c]) out.convex = false;
    out.monotone = measure(poly).perimeter == 2L * (box.width + box.height);
    return out;
}

Polyomino project(const Polyomino& poly, Projection direction) {
    const Rectangle box = surrounding_rectangle(poly);
    std::vector<Cell> out;
    if (direction == Projection::down) {
        std::vector<int> count(box.width, 0);
        for (const Cell& x : poly.cells()) ++count[x.c];
        for (int c = 0; c < box.width; ++c)
            for (int k = 0; k < count[c]; ++k) out.push_back({box.height - 1 - k, c});
    } else {
        std::vector<int> count(box.height, 0);
        for (const Cell& x : poly.cells()) ++count[x.r];
        for (int r = 0; r < box.height; ++r)
            for (int k = 0; k < count[r]; ++k) out.push_back({r, k});
    }
    // Empty columns (rows) of a disconnected input close up; keep the box.
    return Polyomino(std::move(out));
}

namespace {
long isqrt(long n) {
    long s = static_cast<long>(std::sqrt(static_cast<double>(n)));
    while (s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}
}  // namespace

long min_perimeter(long n) {
    if (n <= 0) throw InputError("area must be positive");
    long m = isqrt(4 * n);
    if (m * m < 4 * n) ++m;
    return 2 * m;
}

MinimalShape minimal_shape(long n) {
    if (n <= 0) throw InputError("area must be positive");
    MinimalShape out;
    out.n = n;
    const long s = isqrt(n);
    if (n < s * s + s) {
        out.shape_case = ShapeCase::ii;
        out.s = s;
        out.k = n - s * s;
    } else {
        out.shape_case = ShapeCase::i;
        out.s = s + 1;
        out.k = n - (s + 1) * s;
    }
    out.min_perimeter = min_perimeter(n);
    return out;
}

Polyomino minimal_polyomino(long n) {
    const MinimalShape m = minimal_shape(n);
    const long rows = m.shape_case == ShapeCase::i ? m.s - 1 : m.s;
    std::vector<Cell> cells;
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < m.s; ++c) cells.push_back({static_cast<int>(r), static_cast<int>(c)});
    for (long c = 0; c < m.k; ++c) cells.push_back({static_cast<int>(rows), static_cast<int>(c)});
    return Polyomino(std::move(cells));
}

void for_each_polyomino(int n, bool connected_only, const std::function<void(const Polyomino&)>& visit) {
    if (n < 1) throw InputError("area must be positive");
    if (n > kMaxEnumerationArea) throw InputError("enumeration bound: area must be <= 10");
    if (connected_only) {
        std::set<Polyomino> level{Polyomino({{0, 0}})};
        for (int size = 1; size < n; ++size) {
            std::set<Polyomino> next;
            for (const Polyomino& p : level)
                for (const Cell& x : p.cells())
                    for (Cell d : kSteps) {
                        const Cell y{x.r + d.r, x.c + d.c};
                        if (p.contains(y)) continue;
                        auto cells = p.cells();
                        cells.push_back(y);
                        next.insert(Polyomino(std::move(cells)));
                    }
            level = std::move(next);
        }
        for (const Polyomino& p : level) visit(p);
        return;
    }
    if (n > kMaxDisconnectedArea) throw InputError("enumeration bound: disconnected area must be <= 6");
    // Subsets of the n x n box touching its top row and left column are
    // exactly the canonical ones.
    const int side = n;
    std::vector<int> pick(n);
    std::set<Polyomino> all;
    std::function<void(int, int)> rec = [&](int depth, int from) {
        if (depth == n) {
            std::vector<Cell> cells;
            bool top = false, left = false;
            for (int v : pick) {
                cells.push_back({v / side, v % side});
                top |= v / side == 0;
                left |= v % side == 0;
            }
            if (top && left) all.insert(Polyomino(std::move(cells)));
            return;
        }
        for (int v = from; v <= side * side - (n - depth); ++v) {
            pick[depth] = v;
            rec(depth + 1, v + 1);
        }
    };
    rec(0, 0);
    for (const Polyomino& p : all) visit(p);
}

std::vector<Polyomino> enumerate_exhaustive(int n, bool connected_only) {
    std::vector<Polyomino> out;
    for_each_polyomino(n, connected_only, [&](const Polyomino& p) { out.push_back(p); });
    return out;
}

std::string render_ascii(const Polyomino& poly) {
    const Rectangle box = surrounding_rectangle(poly);
    std::string out;
    for (int r = 0; r < box.height; ++r) {
        for (int c = 0; c < box.width; ++c) out += poly.contains({r, c}) ? '#' : '.';
        out += '\n';
    }
    return out;
}

std::string polyomino_json(const Polyomino& poly) {
    nlohmann::json j = nlohmann::json::array();
    for (const Cell& x : poly.cells()) j.push_back({x.r, x.c});
    return j.dump();
}

}  // namespace metastab
