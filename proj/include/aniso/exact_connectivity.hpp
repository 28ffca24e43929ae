#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "aniso/core_model.hpp"

namespace aniso {

using Rational = boost::multiprecision::cpp_rational;

enum class Engine { brute_force, transfer_matrix, brute_force_rational };

std::string to_string(Engine e);

/// Finite-volume truncated connectivity: x and y lie in one open cluster that
/// avoids the internal boundary of the region.
struct ExactResult {
    double value = 0.0;
    double log_value = 0.0;  ///< -inf when value is 0
    Engine engine = Engine::brute_force;
    LatticeRegion region{0, 0, 0, 0};
    Params params = make_params_unordered(0.5, 0.5);
    Vertex x;
    Vertex y;
    double runtime_ms = 0.0;
    std::string exact;  ///< "num/den" for the rational engine, empty otherwise
};

struct ExactLimits {
    std::size_t max_edges = 28;  ///< brute-force hard cap on |E|
    int max_frontier = 14;       ///< transfer-matrix cap on the swept column height
    unsigned threads = 0;        ///< 0 = hardware concurrency
};

/// Number of successful configurations for each (closed horizontal, closed vertical)
/// pair. The probability of the event is the polynomial
///   sum counts(ch, cv) (1-p_h)^ch p_h^(E_h-ch) (1-p_v)^cv p_v^(E_v-cv),
/// so a single sweep over the 2^|E| configurations serves every parameter value.
struct SuccessCounts {
    LatticeRegion region{0, 0, 0, 0};
    Vertex x;
    Vertex y;
    std::size_t e_h = 0;
    std::size_t e_v = 0;
    std::vector<std::uint64_t> counts;  ///< (e_h + 1) * (e_v + 1), index ch * (e_v + 1) + cv

    [[nodiscard]] std::uint64_t at(std::size_t ch, std::size_t cv) const { return counts[ch * (e_v + 1) + cv]; }
    [[nodiscard]] double evaluate(const Params& p) const;
    [[nodiscard]] Rational evaluate_exact(const Rational& p_h, const Rational& p_v) const;
};

/// Exhaustive sweep (Gray-code order, union-find per configuration) for several
/// (x, y) pairs at once. Throws BudgetExceeded above limits.max_edges and
/// UsageError when a vertex is not in the interior of the region.
std::vector<SuccessCounts> count_success(const LatticeRegion& region, std::span<const std::pair<Vertex, Vertex>> pairs,
                                         const ExactLimits& limits = {});

ExactResult tau_fN_bruteforce(const LatticeRegion& region, const Params& params, Vertex x, Vertex y,
                              const ExactLimits& limits = {});

/// Exact rational value; the probabilities are converted from binary floating point exactly.
ExactResult tau_fN_bruteforce_rational(const LatticeRegion& region, const Params& params, Vertex x, Vertex y,
                                       const ExactLimits& limits = {});
Rational tau_fN_rational(const LatticeRegion& region, const Rational& p_h, const Rational& p_v, Vertex x, Vertex y,
                         const ExactLimits& limits = {});

/// Column-sweep dynamic programme over set partitions of the frontier column.
/// The sweep runs along the longer side of the region; the frontier is the shorter side.
/// Throws BudgetExceeded when the frontier exceeds limits.max_frontier.
ExactResult tau_fN_transfer(const LatticeRegion& region, const Params& params, Vertex x, Vertex y,
                            const ExactLimits& limits = {});

struct PartitionReport {
    LatticeRegion region{0, 0, 0, 0};
    double sum = 0.0;       ///< sum over C of lambda_h^|C^h| lambda_v^|C^v|
    double expected = 0.0;  ///< p_h^-|E^h| p_v^-|E^v|
    double rel_error = 0.0;
    bool holds = false;     ///< rel_error <= 1e-10
    bool rational_checked = false;
    bool rational_holds = false;
};

/// Exhaustive check of the partition-function identity. The floating side is capped at
/// 24 edges; the exact rational side runs when the region has at most 16 edges.
PartitionReport partition_identity_check(const LatticeRegion& region, const Params& params);

struct MonotonicityReport {
    std::vector<ExactResult> results;
    bool nondecreasing = false;  ///< a checked diagnostic, not a cited fact
};

/// tau^{f,N} over nested regions, each with the cheapest feasible exact engine.
MonotonicityReport tau_fN_monotonicity_probe(const Params& params, Vertex x, Vertex y,
                                             std::span<const LatticeRegion> regions, const ExactLimits& limits = {});

}  // namespace aniso
