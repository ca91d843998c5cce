#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "metastab/common.hpp"

namespace metastab {

// Unit square by its (row, col). Rows grow downwards in renderings.
struct Cell {
    int r = 0;
    int c = 0;
    auto operator<=>(const Cell&) const = default;
};

/// Finite set of cells, translated so the minimum row and column are 0.
/// Fixed polyominoes: rotations are distinct.
class Polyomino {
public:
    explicit Polyomino(std::vector<Cell> cells);

    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t area() const { return cells_.size(); }
    bool contains(Cell x) const;

    bool operator==(const Polyomino&) const = default;
    auto operator<=>(const Polyomino& o) const { return cells_ <=> o.cells_; }

private:
    std::vector<Cell> cells_;  // sorted
};

struct PolyominoMeasure {
    long area = 0;
    long perimeter = 0;
};
PolyominoMeasure measure(const Polyomino& poly);

struct PolyominoClass {
    bool connected = false;
    bool convex = false;    // every row and column meets the set in one run
    bool monotone = false;  // perimeter equals that of the bounding box
};
PolyominoClass classify(const Polyomino& poly);

struct Rectangle {
    int width = 0;   // columns
    int height = 0;  // rows
};
Rectangle surrounding_rectangle(const Polyomino& poly);

enum class Projection { down, left };
// Keeps the per-column (per-row) counts, stacked against the bottom (left)
// edge of the bounding box.
Polyomino project(const Polyomino& poly, Projection direction);

enum class ShapeCase { i, ii };

struct MinimalShape {
    long n = 0;
    long s = 0;
    long k = 0;
    ShapeCase shape_case = ShapeCase::ii;
    long min_perimeter = 0;
};

// n = s(s-1)+k (case i) or s^2+k (case ii), 0 <= k < s.
MinimalShape minimal_shape(long n);
// s x (s-1) rectangle (case i) or s x s square (case ii) with a k-cell bar
// along a longest side.
Polyomino minimal_polyomino(long n);
// 2 * ceil(2 sqrt(n)), exact in integers.
long min_perimeter(long n);

inline constexpr int kMaxEnumerationArea = 10;
inline constexpr int kMaxDisconnectedArea = 6;

// Every fixed polyomino of area n, up to translation, in sorted order.
// Connected ones are grown cell by cell; the disconnected variant takes all
// n-subsets of an n x n box (n <= 6).
void for_each_polyomino(int n, bool connected_only, const std::function<void(const Polyomino&)>& visit);
std::vector<Polyomino> enumerate_exhaustive(int n, bool connected_only = true);

std::string render_ascii(const Polyomino& poly);
std::string polyomino_json(const Polyomino& poly);

}  // namespace metastab
