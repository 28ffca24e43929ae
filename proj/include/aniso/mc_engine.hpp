#pragma once

#include <cstdint>
#include <string>

#include "aniso/core_model.hpp"

namespace aniso {

/// SplitMix64. Each sample owns a stream keyed by (seed, sample index), so results
/// do not depend on how samples are split across threads.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t state) noexcept : state_(state) {}

    static SampleRng for_sample(std::uint64_t seed, std::uint64_t index) noexcept {
        SampleRng keyed(seed ^ 0xD1B54A32D192ED03ull);
        const std::uint64_t a = keyed.next();
        SampleRng mixed(index * 0x9E3779B97F4A7C15ull + a);
        return SampleRng(mixed.next());
    }

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Horizontal edges open with probability p_h, vertical with p_v, in edge-index order.
Configuration sample_config(const LatticeRegion& region, const Params& params, SampleRng& rng);

struct McOptions {
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

enum class CiMethod { normal, wilson };

std::string to_string(CiMethod m);

struct Estimate {
    double p_hat = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t n_samples = 0;
    double std_err = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    CiMethod ci_method = CiMethod::normal;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;

    friend bool same_result(const Estimate& a, const Estimate& b) {
        return a.successes == b.successes && a.n_samples == b.n_samples && a.p_hat == b.p_hat &&
               a.std_err == b.std_err && a.ci_lo == b.ci_lo && a.ci_hi == b.ci_hi && a.seed == b.seed;
    }
};

/// 95% interval: normal approximation, or Wilson's score interval when fewer than
/// 30 successes or failures were seen. Clipped to [0, 1].
Estimate make_estimate(std::uint64_t successes, std::uint64_t n, std::uint64_t seed);

Estimate estimate_tau_fN(const LatticeRegion& region, const Params& params, Vertex x, Vertex y, std::uint64_t n,
                         std::uint64_t seed, const McOptions& opts = {});

struct PairedEstimate {
    double d_hat = 0.0;  ///< mean of 1{0 <-> x} - 1{0 <-> x'} over the same configurations
    double std_err = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    Estimate x_event;
    Estimate xprime_event;
    std::uint64_t only_x = 0;
    std::uint64_t only_xprime = 0;
    /// Samples where the x'-event on the reflected configuration differs from the x-event.
    /// On a diagonally symmetric box the two are the same event, so this must be 0.
    std::uint64_t reflection_mismatches = 0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;

    friend bool same_result(const PairedEstimate& a, const PairedEstimate& b) {
        return a.d_hat == b.d_hat && a.std_err == b.std_err && a.only_x == b.only_x &&
               a.only_xprime == b.only_xprime && a.reflection_mismatches == b.reflection_mismatches &&
               same_result(a.x_event, b.x_event) && same_result(a.xprime_event, b.xprime_event);
    }
};

/// Events for x and x' = reflect(x), both from the origin, on each sampled configuration.
/// The region must be symmetric under the diagonal reflection.
PairedEstimate estimate_pair_difference(const LatticeRegion& region, const Params& params, Vertex x, std::uint64_t n,
                                        std::uint64_t seed, const McOptions& opts = {});

}  // namespace aniso
