#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "aniso/core_model.hpp"

namespace aniso {

using BigInt = boost::multiprecision::cpp_int;

/// Vertex of the dual lattice. (a, b) stands for the point (a - 1/2, b - 1/2),
/// so (0, 0) is (-1/2, -1/2) and (x1 + 1, x2 + 1) is (x1 + 1/2, x2 + 1/2).
struct DualVertex {
    int a = 0;
    int b = 0;

    friend constexpr auto operator<=>(const DualVertex&, const DualVertex&) = default;
};

std::string to_string(const DualVertex& v);

/// Dual step letters: R = (1,0), L = (-1,0), U = (0,1), D = (0,-1).
[[nodiscard]] DualVertex step(DualVertex v, char letter);

/// Primal edge crossed by the dual step `letter` taken from `v`.
[[nodiscard]] Edge crossed_edge(DualVertex v, char letter);

/// Closed dual walk given by a base vertex and a word over {R, L, U, D}.
struct DualCircuit {
    DualVertex base;
    std::string word;

    friend bool operator==(const DualCircuit&, const DualCircuit&) = default;
};

/// A contour: a finite edge set whose removal leaves exactly one finite
/// component, minimal for that property. Only constructible through as_contour().
class Contour {
public:
    /// Sorted, duplicate free.
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
    /// Vertex set of the finite component, sorted.
    [[nodiscard]] const std::vector<Vertex>& interior() const noexcept { return interior_; }
    [[nodiscard]] int h_count() const noexcept { return h_count_; }
    [[nodiscard]] int v_count() const noexcept { return v_count_; }
    [[nodiscard]] int size() const noexcept { return static_cast<int>(edges_.size()); }

    [[nodiscard]] bool surrounds(Vertex v) const;
    [[nodiscard]] bool contains(const Edge& e) const;

    friend bool operator==(const Contour& a, const Contour& b) { return a.edges_ == b.edges_; }

private:
    Contour() = default;
    std::vector<Edge> edges_;
    std::vector<Vertex> interior_;
    int h_count_ = 0;
    int v_count_ = 0;

    friend std::optional<Contour> as_contour(std::span<const Edge> edges);
};

struct ContourCheck {
    bool valid = false;
    std::vector<Vertex> interior;  ///< the finite component when valid
};

/// Decides whether `edges` is a contour of Z^2; the witness is the vertex interior.
ContourCheck is_contour(std::span<const Edge> edges);

std::optional<Contour> as_contour(std::span<const Edge> edges);

/// The dual circuit of a contour, based at its lowest vertex of the leftmost
/// column and traversed counter-clockwise (first letter R).
/// Throws UsageError if the dual edge set is not a single circuit.
DualCircuit dual_of(const Contour& contour);

/// Primal edges crossed by a circuit, sorted.
/// Throws UsageError unless the word is a closed self-avoiding walk of length >= 4.
std::vector<Edge> primal_of(const DualCircuit& circuit);

/// Re-encodes a circuit from its leftmost dual edge crossing the x-axis, i.e. the
/// edge from (k-1/2, -1/2) to (k-1/2, 1/2) with the smallest k, traversed upward first.
/// Throws UsageError when the circuit crosses the x-axis nowhere at k <= 0.
DualCircuit word_encode(const DualCircuit& circuit);

/// Walks `word` from `base` and validates that it is a closed self-avoiding circuit.
DualCircuit word_decode(DualVertex base, std::string_view word);

// ---------------------------------------------------------------------------
// Minimal contours

/// The four corner edges every minimal contour around {0, x} contains:
/// <(-1,0),(0,0)>, <(0,-1),(0,0)>, <x, x+(0,1)>, <x, x+(1,0)>.
std::array<Edge, 4> corner_set(Vertex x);

/// Number of minimal contours surrounding {0, x}, by dynamic programming over
/// pairs of monotone dual paths from (-1/2,-1/2) to (x1+1/2, x2+1/2) that meet
/// only at their endpoints.
BigInt beta(Vertex x);

/// Lindstrom-Gessel-Viennot 2x2 determinant for the same path pairs. Cross-check only.
BigInt beta_lgv(Vertex x);

/// Narayana number N(x1+x2+1, x1+1). Cross-check only.
BigInt beta_narayana(Vertex x);

/// Every minimal contour around {0, x}, in a deterministic order.
std::vector<Contour> minimal_contours(Vertex x);

// ---------------------------------------------------------------------------
// Census

struct CensusOptions {
    std::uint64_t node_budget = 100'000'000;
    unsigned threads = 0;  ///< 0 = hardware concurrency
    bool keep_members = false;
};

/// Exact counts |Gamma^n_{0,x}| for norm_x(x) <= n <= n_max.
struct ContourCensus {
    Vertex x;
    int n_max = 0;
    std::map<int, BigInt> counts;                    ///< every n in [norm, n_max]
    std::map<int, std::map<int, BigInt>> per_anchor; ///< n -> leftmost crossing k -> count
    BigInt beta;
    std::uint64_t nodes = 0;                         ///< search nodes visited
    std::uint64_t non_contour_circuits = 0;          ///< surrounding circuits rejected by is_contour
    std::vector<Contour> members;                    ///< filled when keep_members

    [[nodiscard]] const BigInt& count(int n) const;
};

/// Exhaustive self-avoiding dual circuit search anchored at each admissible
/// leftmost x-axis crossing, followed by a surround test and is_contour().
/// Throws BudgetExceeded when the node budget is exhausted.
ContourCensus census(Vertex x, int n_max, const CensusOptions& options = {});

/// CSV with header `x1,x2,n,count`.
std::string census_csv(const ContourCensus& census);

struct LemmaReport {
    Vertex x;
    int m = 0;
    BigInt lhs;             ///< |Gamma^{norm+m}|
    BigInt rhs;             ///< 12^m C(norm, m) beta
    bool holds = false;
    BigInt anchor_bound;    ///< 3^m C(norm+m, m) beta, per leftmost crossing
    int anchors = 0;        ///< number of admissible anchors, max(m, 1)
    BigInt aggregate_bound; ///< anchors * anchor_bound
    bool aggregate_holds = false;
    bool per_anchor_holds = false;
};

/// Throws UsageError unless 0 <= m <= norm/2 and the census reaches norm + m.
LemmaReport verify_counting_lemma(Vertex x, int m, const ContourCensus& census);

struct AlphaRow {
    int n = 0;
    BigInt alpha;
    double root = 0.0;  ///< alpha^(1/n)
};

struct AlphaReport {
    int rho = 0;
    std::vector<AlphaRow> rows;
    std::vector<std::pair<int, int>> supermultiplicativity_violations;  ///< (n, m)
    std::vector<int> bound_violations;                                  ///< n with root outside [1, 4^(1+rho)]
};

/// alpha_n = beta((n, rho n)) for 1 <= n <= n_max.
AlphaReport alpha_sequence(int rho, int n_max);

// ---------------------------------------------------------------------------

struct CompanionPaths {
    std::vector<Vertex> sigma1;  ///< 0 -> x, translate of the upper dual path
    std::vector<Vertex> sigma2;  ///< 0 -> x, translate of the lower dual path
    std::array<Edge, 4> q;
    std::vector<Edge> t;         ///< sigma1 u sigma2 as an edge set, sorted
    int t_h = 0;
    int t_v = 0;
};

/// Builds the two shortest primal paths 0 -> x obtained from the dual halves of
/// a minimal contour, and validates |t^h| <= 2 x1 < |gamma^v|, |t^v| <= 2 x2 < |gamma^h|
/// and that t lies in the interior edge set. Throws UsageError for a contour that
/// is not a minimal contour around {0, x}.
CompanionPaths companion_paths(const Contour& minimal_contour, Vertex x);

}  // namespace aniso
