#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace aniso {

/// A vertex of Z^2.
struct Vertex {
    int x = 0;
    int y = 0;

    friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;
};

std::string to_string(const Vertex& v);

enum class EdgeKind : std::uint8_t { horizontal, vertical };

/// A nearest-neighbour edge of Z^2, anchored at its lower/left endpoint:
/// horizontal edges join `from` and `from + (1,0)`, vertical edges `from` and `from + (0,1)`.
struct Edge {
    Vertex from;
    EdgeKind kind = EdgeKind::horizontal;

    [[nodiscard]] constexpr Vertex to() const noexcept {
        return kind == EdgeKind::horizontal ? Vertex{from.x + 1, from.y} : Vertex{from.x, from.y + 1};
    }
    [[nodiscard]] constexpr bool is_horizontal() const noexcept { return kind == EdgeKind::horizontal; }

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Edge joining two adjacent vertices, in either order. Throws UsageError if not adjacent.
Edge edge_between(Vertex a, Vertex b);

std::string to_string(const Edge& e);

/// Coordinate swap (x1, x2) -> (x2, x1). An involution.
[[nodiscard]] constexpr Vertex reflect(Vertex v) noexcept { return {v.y, v.x}; }

/// Diagonal reflection of an edge: horizontal edges become vertical and vice versa.
[[nodiscard]] constexpr Edge reflect(const Edge& e) noexcept {
    return {reflect(e.from), e.is_horizontal() ? EdgeKind::vertical : EdgeKind::horizontal};
}

/// Number of bonds of a minimal contour around {0, x}: 2(x1 + x2 + 2).
/// Throws UsageError unless both coordinates are positive.
int norm_x(Vertex x);

// ---------------------------------------------------------------------------
// Parameters

/// Edge-opening probabilities. Horizontal edges are open with probability p_h,
/// vertical edges with p_v. The odds lambda = (1-p)/p and eta = lambda_v/lambda_h
/// are always derived from the probabilities, never stored.
class Params {
public:
    [[nodiscard]] double p_h() const noexcept { return p_h_; }
    [[nodiscard]] double p_v() const noexcept { return p_v_; }

    /// Throws DomainError when p_h = 0.
    [[nodiscard]] double lambda_h() const;
    /// Throws DomainError when p_v = 0.
    [[nodiscard]] double lambda_v() const;
    /// lambda_v / lambda_h. Throws DomainError when lambda_h = 0 or undefined.
    [[nodiscard]] double eta() const;

    friend bool operator==(const Params&, const Params&) = default;

private:
    Params(double p_h, double p_v) : p_h_(p_h), p_v_(p_v) {}
    double p_h_;
    double p_v_;

    friend Params make_params(double p_h, double p_v);
    friend Params make_params_unordered(double p_h, double p_v);
};

/// Parameters in the standing regime 0 < p_h <= p_v <= 1.
Params make_params(double p_h, double p_v);

/// Any pair of probabilities in [0,1], without the p_h <= p_v ordering.
/// The exact and Monte Carlo engines are valid for every such pair.
Params make_params_unordered(double p_h, double p_v);

/// p_v = 1 / (1 + eta * lambda_h), so that the returned params have the given eta.
/// Requires 0 < p_h < 1 and 0 < eta <= 1.
Params params_from_eta(double p_h, double eta);

// ---------------------------------------------------------------------------
// Regions

/// Finite vertex box [x_lo, x_hi] x [y_lo, y_hi] with the induced edge set.
///
/// Edge indexing is frozen: all horizontal edges come first in row-major order
/// (index = row * (W-1) + col), followed by all vertical edges in row-major order
/// (index = E_h + row * W + col), where row/col are offsets from (x_lo, y_lo).
class LatticeRegion {
public:
    LatticeRegion(int x_lo, int x_hi, int y_lo, int y_hi);

    /// The centred square [-n, n]^2.
    static LatticeRegion square(int n) { return {-n, n, -n, n}; }

    [[nodiscard]] int x_lo() const noexcept { return x_lo_; }
    [[nodiscard]] int x_hi() const noexcept { return x_hi_; }
    [[nodiscard]] int y_lo() const noexcept { return y_lo_; }
    [[nodiscard]] int y_hi() const noexcept { return y_hi_; }
    [[nodiscard]] int width() const noexcept { return x_hi_ - x_lo_ + 1; }
    [[nodiscard]] int height() const noexcept { return y_hi_ - y_lo_ + 1; }

    [[nodiscard]] std::size_t vertex_count() const noexcept {
        return static_cast<std::size_t>(width()) * static_cast<std::size_t>(height());
    }
    [[nodiscard]] std::size_t horizontal_edge_count() const noexcept {
        return static_cast<std::size_t>(width() - 1) * static_cast<std::size_t>(height());
    }
    [[nodiscard]] std::size_t vertical_edge_count() const noexcept {
        return static_cast<std::size_t>(width()) * static_cast<std::size_t>(height() - 1);
    }
    [[nodiscard]] std::size_t edge_count() const noexcept {
        return horizontal_edge_count() + vertical_edge_count();
    }

    [[nodiscard]] bool contains(Vertex v) const noexcept {
        return v.x >= x_lo_ && v.x <= x_hi_ && v.y >= y_lo_ && v.y <= y_hi_;
    }
    [[nodiscard]] bool contains(const Edge& e) const noexcept { return contains(e.from) && contains(e.to()); }

    /// Vertices of the box adjacent to its complement (the box frame).
    [[nodiscard]] bool on_internal_boundary(Vertex v) const noexcept {
        return contains(v) && (v.x == x_lo_ || v.x == x_hi_ || v.y == y_lo_ || v.y == y_hi_);
    }
    [[nodiscard]] bool is_interior(Vertex v) const noexcept {
        return contains(v) && !on_internal_boundary(v);
    }

    [[nodiscard]] std::size_t vertex_index(Vertex v) const;
    [[nodiscard]] Vertex vertex_at(std::size_t index) const;
    [[nodiscard]] std::size_t edge_index(const Edge& e) const;
    [[nodiscard]] Edge edge_at(std::size_t index) const;

    /// True when the box is invariant under the diagonal reflection.
    [[nodiscard]] bool is_diagonally_symmetric() const noexcept { return x_lo_ == y_lo_ && x_hi_ == y_hi_; }
    [[nodiscard]] LatticeRegion reflected() const { return {y_lo_, y_hi_, x_lo_, x_hi_}; }

    friend bool operator==(const LatticeRegion&, const LatticeRegion&) = default;

private:
    int x_lo_, x_hi_, y_lo_, y_hi_;
};

std::string to_string(const LatticeRegion& r);

// ---------------------------------------------------------------------------
// Configurations

/// Open/closed assignment to every edge of a region. A set bit marks a closed edge.
class Configuration {
public:
    /// All edges open.
    explicit Configuration(const LatticeRegion& region);

    [[nodiscard]] const LatticeRegion& region() const noexcept { return region_; }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }

    [[nodiscard]] bool is_closed(std::size_t edge) const noexcept {
        return (words_[edge >> 6] >> (edge & 63)) & 1u;
    }
    [[nodiscard]] bool is_open(std::size_t edge) const noexcept { return !is_closed(edge); }
    void set_closed(std::size_t edge, bool closed) noexcept {
        const std::uint64_t bit = std::uint64_t{1} << (edge & 63);
        if (closed)
            words_[edge >> 6] |= bit;
        else
            words_[edge >> 6] &= ~bit;
    }

    [[nodiscard]] std::size_t closed_horizontal() const noexcept;
    [[nodiscard]] std::size_t closed_vertical() const noexcept;

    /// Image under the diagonal reflection, living on region().reflected().
    [[nodiscard]] Configuration reflected() const;

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    LatticeRegion region_;
    std::size_t size_;
    std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// Target pair

/// The pair x = (x1, x2), x' = (x2, x1) with 0 < x1 < x2.
struct TargetPair {
    Vertex x;
    Vertex x_prime;
    int norm = 0;        ///< 2(x1 + x2 + 2)
    int slope_num = 0;   ///< slope rho = x2 / x1 in lowest terms
    int slope_den = 1;

    [[nodiscard]] double slope() const noexcept { return static_cast<double>(slope_num) / slope_den; }
};

TargetPair make_target(int x1, int x2);

}  // namespace aniso

template <>
struct std::hash<aniso::Vertex> {
    std::size_t operator()(const aniso::Vertex& v) const noexcept {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.x)) << 32) |
                                          static_cast<std::uint32_t>(v.y));
    }
};
