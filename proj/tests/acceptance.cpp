#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "aniso/bounds.hpp"
#include "aniso/contours.hpp"
#include "aniso/exact_connectivity.hpp"
#include "aniso/mc_engine.hpp"
#include "oracles.hpp"

using namespace aniso;

namespace {

constexpr double kGrid[] = {0.2, 0.5, 0.8, 0.99};
constexpr double kPartitionTol = 1e-10;
constexpr double kEngineTol = 1e-12;
constexpr double kForcedTol = 1e-14;
constexpr double kSandwichSlack = 1e-12;
constexpr double kEtaTildeTarget = 0.9932;
constexpr double kEtaTildeTol = 1e-3;
constexpr double kSigmas = 4.0;
constexpr std::uint64_t kMcSamples = 1'000'000;

double rel(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Boxes containing at least one interior vertex, up to max_edges edges.
std::vector<LatticeRegion> boxes(std::size_t max_edges) {
    std::vector<LatticeRegion> out;
    for (int w = 3; w <= 6; ++w)
        for (int h = 3; h <= 6; ++h) {
            const LatticeRegion r(-1, w - 2, -1, h - 2);
            if (r.edge_count() <= max_edges) out.push_back(r);
        }
    return out;
}

struct Criterion {
    int id;
    std::string name;
    std::function<std::string()> body;
};

std::string beta_oracle() {
    for (int x1 = 1; x1 <= 6; ++x1)
        for (int x2 = x1; x1 + x2 <= 7; ++x2) {
            const Vertex x{x1, x2};
            const BigInt dp = beta(x);
            const std::uint64_t brute = oracle::beta_by_subsets(x);
            if (dp != brute) return "beta" + to_string(x) + " = " + dp.str() + ", enumeration " + std::to_string(brute);
            if (x1 + x2 <= 5 && census(x, norm_x(x)).count(norm_x(x)) != dp)
                return "dual circuit census disagrees at " + to_string(x);
        }
    if (beta({1, 1}) != 3 || beta({1, 2}) != 6 || beta({2, 4}) != 105) return "spot value mismatch";
    return {};
}

std::string counting_lemma() {
    for (const Vertex x : {Vertex{1, 1}, Vertex{1, 2}, Vertex{2, 3}}) {
        const int norm = norm_x(x);
        const int m_max = std::min(6, norm / 2);
        const auto c = census(x, norm + m_max);
        for (int m = 0; m <= m_max; ++m) {
            const auto r = verify_counting_lemma(x, m, c);
            if (m % 2 == 1 && r.lhs != 0) return "odd m=" + std::to_string(m) + " count nonzero at " + to_string(x);
            if (!r.holds) return "bound fails at " + to_string(x) + " m=" + std::to_string(m);
        }
        if (x.x + x.y <= 2) {
            const auto animals = oracle::census_by_animals(x, norm + m_max);
            for (int n = norm; n <= norm + m_max; ++n) {
                const auto it = animals.find(n);
                const std::uint64_t want = it == animals.end() ? 0 : it->second;
                if (c.count(n) != want) return "census differs from animal oracle at n=" + std::to_string(n);
            }
        }
    }
    return {};
}

std::string supermultiplicativity() {
    for (const int rho : {1, 2}) {
        std::vector<BigInt> alpha{BigInt(1)};
        for (int n = 1; n <= 4; ++n) alpha.push_back(beta({n, rho * n}));
        for (int n = 1; n <= 3; ++n)
            for (int m = 1; n + m <= 4; ++m)
                if (alpha[n + m] < alpha[n] * alpha[m])
                    return "alpha_" + std::to_string(n + m) + " < alpha_n alpha_m for rho=" + std::to_string(rho);
        BigInt cap(1);
        for (int i = 0; i < 1 + rho; ++i) cap *= 4;
        for (int n = 1; n <= 4; ++n) {
            BigInt cap_n(1);
            for (int i = 0; i < n; ++i) cap_n *= cap;
            if (alpha[n] > cap_n) return "alpha_n^(1/n) exceeds 4^(1+rho) at n=" + std::to_string(n);
        }
        const auto report = alpha_sequence(rho, 4);
        if (!report.supermultiplicativity_violations.empty() || !report.bound_violations.empty())
            return "library alpha report flags a violation for rho=" + std::to_string(rho);
    }
    return {};
}

std::string partition_identity() {
    std::size_t rational_regions = 0;
    for (const auto& r : boxes(24))
        for (const double a : kGrid)
            for (const double b : kGrid) {
                const auto rep = partition_identity_check(r, make_params_unordered(a, b));
                if (rep.rel_error > kPartitionTol)
                    return "relative error " + fmt(rep.rel_error) + " on " + to_string(r);
                if (r.edge_count() <= 16) {
                    if (!rep.rational_checked || !rep.rational_holds) return "rational identity fails on " + to_string(r);
                    ++rational_regions;
                }
            }
    if (rational_regions == 0) return "no region was checked in rational mode";
    return {};
}

std::string engine_agreement() {
    for (const auto& r : boxes(24)) {
        std::vector<std::pair<Vertex, Vertex>> pairs;
        for (int a = r.x_lo() + 1; a < r.x_hi(); ++a)
            for (int b = r.y_lo() + 1; b < r.y_hi(); ++b) pairs.push_back({{0, 0}, {a, b}});
        const auto counts = count_success(r, pairs, {28, 14, 0});
        for (const double a : kGrid)
            for (const double b : kGrid) {
                const auto p = make_params_unordered(a, b);
                for (std::size_t i = 0; i < pairs.size(); ++i) {
                    const double bf = counts[i].evaluate(p);
                    const double tm = tau_fN_transfer(r, p, pairs[i].first, pairs[i].second).value;
                    if (rel(bf, tm) > kEngineTol)
                        return "brute " + fmt(bf) + " vs transfer " + fmt(tm) + " on " + to_string(r);
                    if (r.edge_count() <= 12) {
                        const double direct = oracle::tau_by_configurations(r.x_lo(), r.x_hi(), r.y_lo(), r.y_hi(), p.p_h(),
                                                                            p.p_v(), pairs[i].first, pairs[i].second);
                        if (rel(direct, tm) > kEngineTol) return "configuration oracle disagrees on " + to_string(r);
                    }
                }
            }
    }
    return {};
}

std::string forced_value() {
    const LatticeRegion r(-1, 1, -1, 1);
    for (const double a : kGrid)
        for (const double b : kGrid) {
            const auto p = make_params_unordered(a, b);
            const double want = (1 - p.p_h()) * (1 - p.p_h()) * (1 - p.p_v()) * (1 - p.p_v());
            const double engines[] = {tau_fN_bruteforce(r, p, {0, 0}, {0, 0}).value,
                                      tau_fN_transfer(r, p, {0, 0}, {0, 0}).value,
                                      tau_fN_bruteforce_rational(r, p, {0, 0}, {0, 0}).value};
            for (const double v : engines)
                if (rel(v, want) > kForcedTol) return "engine value " + fmt(v) + " vs " + fmt(want);
            const auto e = estimate_tau_fN(r, p, {0, 0}, {0, 0}, kMcSamples, 31337);
            const double sigma = std::sqrt(want * (1 - want) / static_cast<double>(kMcSamples));
            if (std::abs(e.p_hat - want) > kSigmas * std::max(sigma, 1.0 / kMcSamples))
                return "MC " + fmt(e.p_hat) + " vs " + fmt(want) + " at p=(" + fmt(a) + "," + fmt(b) + ")";
        }
    return {};
}

std::string sandwich() {
    const LatticeRegion box(-1, 3, -1, 3);
    const Vertex x{1, 2};
    for (const double ph : {0.985, 0.99, 0.9999})
        for (const double eta : {0.2, 0.5}) {
            const auto p = params_from_eta(ph, eta);
            const double lo = lower_bound(p, x).value;
            const double mid = minimal_event_lower(p, x, box).value;
            const double ex = tau_fN_transfer(box, p, {0, 0}, x).value;
            const double ex_prime = tau_fN_transfer(box, p, {0, 0}, reflect(x)).value;
            const double up = upper_bound(p, x).total.value;
            const std::string where = " at p_h=" + fmt(ph) + " eta=" + fmt(eta);
            if (lo > mid * (1 + kSandwichSlack)) return "lower_bound > minimal_event_lower" + where;
            if (mid > ex * (1 + kSandwichSlack)) return "minimal_event_lower > exact" + where;
            if (ex_prime > up * (1 + kSandwichSlack)) return "exact(x') > upper_bound" + where;
        }
    return {};
}

std::string direction() {
    const LatticeRegion box(-1, 3, -1, 3);
    const auto p = params_from_eta(0.9999, 0.2);
    const double t12 = tau_fN_transfer(box, p, {0, 0}, {1, 2}).value;
    const double t21 = tau_fN_transfer(box, p, {0, 0}, {2, 1}).value;
    if (!(t12 > t21)) return "tau(0,(1,2)) = " + fmt(t12) + " not above tau(0,(2,1)) = " + fmt(t21);
    if (!inequality_certificate(p, {1, 2}).holds) return "certificate does not hold";
    const double et = eta_tilde(0.9999, 1, 2);
    if (std::abs(et - kEtaTildeTarget) > kEtaTildeTol) return "eta_tilde(0.9999,1,2) = " + fmt(et);
    double prev = 0.0;
    for (const double ph : {0.999, 0.9999, 0.99999}) {
        const double t = eta_tilde(ph, 1, 2);
        if (!(t > prev) || !(t < 1.0)) return "eta_tilde not strictly increasing below 1 at p_h=" + fmt(ph);
        prev = t;
    }
    if (1.0 - prev > 1e-3) return "eta_tilde(0.99999) = " + fmt(prev) + " is not close to 1";
    return {};
}

std::string mc_validity() {
    struct Case {
        LatticeRegion region;
        double p_h, p_v;
        Vertex y;
    };
    const Case cases[] = {{LatticeRegion(-1, 2, -1, 2), 0.3, 0.5, {1, 1}},
                          {LatticeRegion(-1, 3, -1, 3), 0.4, 0.6, {1, 2}},
                          {LatticeRegion(-2, 2, -1, 2), 0.5, 0.5, {1, 0}}};
    std::uint64_t seed = 7;
    for (const auto& c : cases) {
        const auto p = make_params(c.p_h, c.p_v);
        const double exact = tau_fN_transfer(c.region, p, {0, 0}, c.y).value;
        const auto one = estimate_tau_fN(c.region, p, {0, 0}, c.y, kMcSamples, seed, {1});
        const auto four = estimate_tau_fN(c.region, p, {0, 0}, c.y, kMcSamples, seed, {4});
        const auto again = estimate_tau_fN(c.region, p, {0, 0}, c.y, kMcSamples, seed, {1});
        const double sigma = std::sqrt(exact * (1 - exact) / static_cast<double>(kMcSamples));
        if (std::abs(one.p_hat - exact) > kSigmas * sigma)
            return "estimate " + fmt(one.p_hat) + " vs exact " + fmt(exact) + " on " + to_string(c.region);
        if (!same_result(one, four)) return "result depends on thread count";
        if (!same_result(one, again)) return "result not reproducible under a fixed seed";
        ++seed;
    }
    return {};
}

std::string isotropy_null() {
    const LatticeRegion box(-1, 3, -1, 3);
    const auto e = estimate_pair_difference(box, make_params(0.5, 0.5), {1, 2}, kMcSamples, 4242);
    if (e.reflection_mismatches != 0) return "reflection mismatches: " + std::to_string(e.reflection_mismatches);
    if (!(std::abs(e.d_hat) <= kSigmas * e.std_err))
        return "d_hat = " + fmt(e.d_hat) + " with std_err " + fmt(e.std_err);
    return {};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "beta agrees with exhaustive enumeration", beta_oracle},
        {2, "contour counting bound", counting_lemma},
        {3, "supermultiplicativity of alpha", supermultiplicativity},
        {4, "partition identity", partition_identity},
        {5, "transfer matrix agrees with brute force", engine_agreement},
        {6, "forced value on the 3x3 box", forced_value},
        {7, "sandwich consistency", sandwich},
        {8, "anisotropy direction and eta_tilde", direction},
        {9, "Monte Carlo validity and determinism", mc_validity},
        {10, "isotropic paired difference", isotropy_null},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        try {
            detail = c.body();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = detail.empty();
        if (!ok) ++failures;
        std::ostringstream line;
        line << (ok ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << " (" << fmt(secs) << " s)";
        if (!ok) line << ": " << detail;
        std::puts(line.str().c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
