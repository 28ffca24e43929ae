#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace aniso::detail {

/// Disjoint-set forest with union by size and path halving.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) { reset(); }

    void reset() noexcept {
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
        std::fill(size_.begin(), size_.end(), std::uint32_t{1});
    }

    std::uint32_t find(std::uint32_t v) noexcept {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    void unite(std::uint32_t a, std::uint32_t b) noexcept {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

    [[nodiscard]] std::size_t size() const noexcept { return parent_.size(); }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
};

}  // namespace aniso::detail
