#include <cmath>

#include "doctest.h"
#include "metastab/polyomino.hpp"

using namespace metastab;

namespace {
Polyomino rect(int w, int h) {
    std::vector<Cell> cells;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) cells.push_back({r, c});
    return Polyomino(cells);
}
}  // namespace

TEST_CASE("construction canonicalizes") {
    const Polyomino p({{5, 7}, {5, 8}});
    CHECK(p.cells() == std::vector<Cell>{{0, 0}, {0, 1}});
    CHECK_THROWS_AS(Polyomino({}), InputError);
    CHECK_THROWS_AS(Polyomino({{0, 0}, {0, 0}}), InputError);
}

TEST_CASE("measure and bounding box") {
    CHECK(measure(Polyomino({{0, 0}})).perimeter == 4);
    CHECK(measure(rect(2, 2)).perimeter == 8);
    const Polyomino l3({{0, 0}, {1, 0}, {1, 1}});
    CHECK(measure(l3).area == 3);
    CHECK(measure(l3).perimeter == 8);
    CHECK(surrounding_rectangle(l3).width == 2);
    CHECK(surrounding_rectangle(l3).height == 2);
}

TEST_CASE("classification") {
    const auto r = classify(rect(3, 2));
    CHECK((r.connected && r.convex && r.monotone));
    const Polyomino s5({{0, 0}, {0, 2}, {1, 0}, {1, 1}, {1, 2}});
    const auto sc = classify(s5);
    CHECK(sc.connected);
    CHECK_FALSE(sc.convex);
    CHECK_FALSE(sc.monotone);
    const Polyomino apart({{0, 0}, {0, 2}});
    const auto a = classify(apart);
    CHECK_FALSE(a.connected);
    CHECK(measure(apart).perimeter == 8);
}

TEST_CASE("projections") {
    const Polyomino stair({{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}});
    const auto down = project(stair, Projection::down);
    CHECK(down.area() == stair.area());
    CHECK(measure(down).perimeter <= measure(stair).perimeter);
    CHECK(project(down, Projection::down) == down);
    const auto both = project(down, Projection::left);
    const auto c = classify(both);
    CHECK((c.connected && c.convex));
}

TEST_CASE("minimal shapes") {
    const auto one = minimal_shape(1);
    CHECK(one.shape_case == ShapeCase::ii);
    CHECK(one.s == 1);
    CHECK(one.k == 0);
    CHECK(one.min_perimeter == 4);
    const auto five = minimal_shape(5);
    CHECK(five.shape_case == ShapeCase::ii);
    CHECK(five.s == 2);
    CHECK(five.k == 1);
    CHECK(five.min_perimeter == 10);
    const auto seven = minimal_shape(7);
    CHECK(seven.shape_case == ShapeCase::i);
    CHECK(seven.s == 3);
    CHECK(seven.k == 1);
    CHECK(seven.min_perimeter == 12);
    CHECK(min_perimeter(12) == 14);
    CHECK_THROWS_AS(minimal_shape(0), InputError);
    CHECK_THROWS_AS(min_perimeter(-3), InputError);
    for (long n = 1; n <= 2000; ++n) {
        const auto m = minimal_shape(n);
        CHECK((0 <= m.k && m.k < m.s));
        CHECK(n == (m.shape_case == ShapeCase::i ? m.s * (m.s - 1) + m.k : m.s * m.s + m.k));
        const long per = m.shape_case == ShapeCase::i ? (m.k == 0 ? 4 * m.s - 2 : 4 * m.s)
                                                      : (m.k == 0 ? 4 * m.s : 4 * m.s + 2);
        CHECK(per == m.min_perimeter);
        CHECK(measure(minimal_polyomino(n)).perimeter == m.min_perimeter);
    }
}

TEST_CASE("enumeration counts") {
    const long fixed[] = {1, 2, 6, 19, 63, 216, 760, 2725};
    for (int n = 1; n <= 8; ++n) CHECK(static_cast<long>(enumerate_exhaustive(n).size()) == fixed[n - 1]);
    CHECK_THROWS_AS(enumerate_exhaustive(11), InputError);
    CHECK_THROWS_AS(enumerate_exhaustive(7, false), InputError);
    // two cells: the domino pair plus every separated placement in a 2x2 box
    CHECK(enumerate_exhaustive(2, false).size() == 4);
}

TEST_CASE("connected polyominoes: convex iff monotone, box bound") {
    for (int n = 1; n <= 8; ++n)
        for_each_polyomino(n, true, [&](const Polyomino& p) {
            const auto c = classify(p);
            CHECK(c.connected);
            CHECK(c.convex == c.monotone);
            const auto box = surrounding_rectangle(p);
            CHECK(measure(p).perimeter >= 2 * (box.width + box.height));
            const auto proj = project(project(p, Projection::down), Projection::left);
            CHECK(proj.area() == p.area());
            CHECK(measure(proj).perimeter <= measure(p).perimeter);
            const auto pc = classify(proj);
            CHECK((pc.connected && pc.convex));
        });
}

TEST_CASE("rendering and json") {
    CHECK(render_ascii(Polyomino({{0, 0}, {1, 0}, {1, 1}})) == "#.\n##\n");
    CHECK(polyomino_json(Polyomino({{0, 1}, {0, 0}})) == "[[0,0],[0,1]]");
}
