#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

namespace metastab {

// Disjoint-set forest with union by size and path halving.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Returns the surviving root.
    std::uint32_t merge(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        --components_;
        return a;
    }

    bool same(std::uint32_t a, std::uint32_t b) { return find(a) == find(b); }
    std::size_t component_size(std::uint32_t x) { return size_[find(x)]; }
    std::size_t components() const { return components_; }
    std::size_t size() const { return parent_.size(); }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::size_t> size_;
    std::size_t components_;
};

}  // namespace metastab
