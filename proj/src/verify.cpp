#include "aniso/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "aniso/bounds.hpp"
#include "aniso/contours.hpp"
#include "aniso/exact_connectivity.hpp"
#include "aniso/mc_engine.hpp"

namespace aniso {

namespace {

const double kGrid[] = {0.2, 0.5, 0.8, 0.99};

double rel(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Returns an empty string on success, otherwise the first failure.
using Body = std::function<std::string()>;

VerifyCheck run(const std::string& name, const Body& body) {
    VerifyCheck c;
    c.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        c.detail = body();
        c.passed = c.detail.empty();
        if (c.passed) c.detail = "ok";
    } catch (const std::exception& e) {
        c.passed = false;
        c.detail = std::string("exception: ") + e.what();
    }
    c.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

std::vector<LatticeRegion> small_boxes(std::size_t max_edges) {
    std::vector<LatticeRegion> out;
    for (int w = 3; w <= 5; ++w)
        for (int h = 3; h <= 5; ++h) {
            const LatticeRegion r(-1, w - 2, -1, h - 2);
            if (r.edge_count() <= max_edges) out.push_back(r);
        }
    return out;
}

}  // namespace

std::vector<VerifyCheck> run_verify(const VerifyOptions& options) {
    const bool fast = options.fast;
    auto dp_beta = [&](Vertex x) {
        BigInt b = beta(x);
        if (options.corrupt_beta) b += 1;
        return b;
    };
    std::vector<VerifyCheck> checks;

    checks.push_back(run("beta agreement (DP, LGV, Narayana, census)", [&]() -> std::string {
        const int max_sum = fast ? 5 : 7;
        for (int x1 = 1; x1 <= max_sum; ++x1)
            for (int x2 = x1; x1 + x2 <= max_sum; ++x2) {
                const Vertex x{x1, x2};
                const BigInt b = dp_beta(x);
                if (b != beta_lgv(x) || b != beta_narayana(x))
                    return "beta" + to_string(x) + " = " + b.str() + " disagrees with LGV " + beta_lgv(x).str();
                if (x1 + x2 <= 4) {
                    const auto c = census(x, norm_x(x), {.threads = options.threads});
                    if (c.count(norm_x(x)) != b)
                        return "census minimal count " + c.count(norm_x(x)).str() + " != beta " + b.str();
                }
            }
        return {};
    }));

    checks.push_back(run("counting lemma", [&]() -> std::string {
        std::vector<Vertex> targets{{1, 1}, {1, 2}};
        if (!fast) targets.push_back({2, 3});
        for (const auto& x : targets) {
            const int norm = norm_x(x);
            const int m_max = std::min(6, norm / 2);
            const auto c = census(x, norm + m_max, {.threads = options.threads});
            if (c.beta != dp_beta(x)) return "census beta for " + to_string(x) + " differs from DP beta";
            for (int m = 0; m <= m_max; ++m) {
                const auto r = verify_counting_lemma(x, m, c);
                if (!r.holds) return "lemma fails for x=" + to_string(x) + " m=" + std::to_string(m);
                if (m % 2 == 1 && r.lhs != 0) return "odd m count nonzero for x=" + to_string(x);
            }
        }
        return {};
    }));

    checks.push_back(run("supermultiplicativity", [&]() -> std::string {
        for (const int rho : {1, 2}) {
            const auto a = alpha_sequence(rho, 4);
            if (!a.supermultiplicativity_violations.empty() || !a.bound_violations.empty())
                return "violation for rho=" + std::to_string(rho);
            for (const auto& row : a.rows)
                if (row.alpha != dp_beta({row.n, rho * row.n})) return "alpha row differs from DP beta";
        }
        return {};
    }));

    checks.push_back(run("partition identity", [&]() -> std::string {
        for (const auto& r : small_boxes(fast ? 17 : 24))
            for (const double a : kGrid)
                for (const double b : kGrid) {
                    const auto rep = partition_identity_check(r, make_params_unordered(a, b));
                    if (!rep.holds) return "sum mismatch on " + to_string(r);
                    if (rep.rational_checked && !rep.rational_holds) return "rational mismatch on " + to_string(r);
                }
        for (const double a : kGrid)
            if (!partition_identity_check(LatticeRegion(0, 1, 0, 1), make_params_unordered(a, 0.5)).rational_holds)
                return "rational mismatch on the unit square";
        return {};
    }));

    checks.push_back(run("engine agreement", [&]() -> std::string {
        for (const auto& r : small_boxes(fast ? 17 : 24)) {
            std::vector<std::pair<Vertex, Vertex>> pairs;
            for (int a = r.x_lo() + 1; a < r.x_hi(); ++a)
                for (int b = r.y_lo() + 1; b < r.y_hi(); ++b) pairs.push_back({{0, 0}, {a, b}});
            const auto counts = count_success(r, pairs, {28, 14, options.threads});
            for (const double a : kGrid)
                for (const double b : kGrid) {
                    const auto p = make_params_unordered(a, b);
                    for (std::size_t i = 0; i < pairs.size(); ++i) {
                        const double bf = counts[i].evaluate(p);
                        const double tm = tau_fN_transfer(r, p, pairs[i].first, pairs[i].second).value;
                        if (rel(bf, tm) > 1e-12) return "disagreement on " + to_string(r);
                    }
                }
        }
        return {};
    }));

    checks.push_back(run("forced value", [&]() -> std::string {
        const LatticeRegion r(-1, 1, -1, 1);
        for (const double a : kGrid)
            for (const double b : kGrid) {
                const auto p = make_params_unordered(a, b);
                const double want = (1 - a) * (1 - a) * (1 - b) * (1 - b);
                if (rel(tau_fN_bruteforce(r, p, {0, 0}, {0, 0}).value, want) > 1e-14 ||
                    rel(tau_fN_transfer(r, p, {0, 0}, {0, 0}).value, want) > 1e-14 ||
                    rel(tau_fN_bruteforce_rational(r, p, {0, 0}, {0, 0}).value, want) > 1e-14)
                    return "forced value off";
            }
        return {};
    }));

    checks.push_back(run("sandwich consistency", [&]() -> std::string {
        const LatticeRegion box(-1, 3, -1, 3);
        const Vertex x{1, 2};
        for (const double ph : {0.985, 0.99, 0.9999})
            for (const double eta : {0.2, 0.5}) {
                const auto p = params_from_eta(ph, eta);
                const double lo = lower_bound(p, x).value;
                const double mid = minimal_event_lower(p, x, box).value;
                const double ex = tau_fN_transfer(box, p, {0, 0}, x).value;
                const double exp_ = tau_fN_transfer(box, p, {0, 0}, reflect(x)).value;
                const double up = upper_bound(p, x).total.value;
                std::ostringstream where;
                where << " at p_h=" << ph << " eta=" << eta;
                if (lo > mid * (1 + 1e-12)) return "lower > minimal event" + where.str();
                if (mid > ex * (1 + 1e-12)) return "minimal event > exact" + where.str();
                if (exp_ > up * (1 + 1e-12)) return "exact(x') > upper" + where.str();
            }
        return {};
    }));

    checks.push_back(run("threshold equivalence", [&]() -> std::string {
        for (const double ph : {0.985, 0.99, 0.999, 0.9999})
            for (const auto& [x1, x2] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}})
                for (int k = 1; k < 20; ++k) {
                    const double eta = k / 20.0;
                    const double t = eta_tilde(ph, x1, x2);
                    if (std::abs(eta - t) <= 1e-12 * t) continue;
                    if (inequality_certificate(params_from_eta(ph, eta), {x1, x2}).holds != (eta < t))
                        return "holds disagrees with eta < eta_tilde";
                }
        return {};
    }));

    checks.push_back(run("monte carlo agreement", [&]() -> std::string {
        const LatticeRegion r(-1, 2, -1, 2);
        const std::uint64_t n = fast ? 100'000 : 1'000'000;
        for (const auto& [a, b] : {std::pair{0.3, 0.5}, std::pair{0.4, 0.6}, std::pair{0.5, 0.5}}) {
            const auto p = make_params(a, b);
            const double exact = tau_fN_transfer(r, p, {0, 0}, {1, 1}).value;
            const auto e = estimate_tau_fN(r, p, {0, 0}, {1, 1}, n, 2024, {options.threads});
            const double sigma = std::sqrt(exact * (1 - exact) / static_cast<double>(n));
            if (std::abs(e.p_hat - exact) > 4 * sigma) return "estimate outside 4 sigma";
        }
        return {};
    }));

    return checks;
}

}  // namespace aniso
