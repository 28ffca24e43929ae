#include "aniso/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "aniso/detail/compensated_sum.hpp"
#include "aniso/errors.hpp"

namespace aniso {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

// a * log(b) with the convention 0 * log(0) = 0.
double power_log(double exponent, double log_base) { return exponent == 0.0 ? 0.0 : exponent * log_base; }

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

void require_positive(Vertex x) {
    if (x.x <= 0 || x.y <= 0) throw UsageError("x must have positive coordinates, got " + to_string(x));
}

void require_small_lambda(double p_h) {
    if (!(p_h > 64.0 / 65.0) || !(p_h < 1.0))
        throw DomainError("the upper bound needs lambda_h < 4^-3, i.e. 64/65 < p_h < 1 (got p_h = " +
                          std::to_string(p_h) + ")");
}

double lambda_of(double p) { return (1.0 - p) / p; }

// Cached exact beta values; the DP is cheap but p_star_search calls it many times.
const BigInt& beta_cached(Vertex x) {
    thread_local std::map<Vertex, BigInt> cache;
    auto it = cache.find(x);
    if (it == cache.end()) it = cache.emplace(x, beta(x)).first;
    return it->second;
}

double eta_tilde_log(double p_h, int x1, int x2, double log_beta) {
    const double lh = lambda_of(p_h);
    const double s = x1 + x2 + 2;
    const double log_num = log_beta + 4 * s * std::log(p_h);
    const double log_tail = (s + 1) * std::log(64 * lh) - std::log1p(-64 * lh);
    const double log_main = log_beta + 2 * s * std::log1p(12 * lh);
    return std::exp((log_num - log_add(log_tail, log_main)) / (2.0 * (x2 - x1)));
}

}  // namespace

double log_big(const BigInt& v) {
    if (v < 0) throw UsageError("log of a negative integer");
    if (v == 0) return kNegInf;
    return static_cast<double>(boost::multiprecision::log(boost::multiprecision::cpp_bin_float_50(v)));
}

LogValue LogValue::from_log(double l) { return {std::exp(l), l}; }

LogValue lower_bound(const Params& params, Vertex x) {
    require_positive(x);
    if (!(params.p_h() < 1.0)) throw DomainError("the lower bound needs p_h < 1");
    const double norm = norm_x(x);
    const double l = log_big(beta_cached(x)) + power_log(2.0 * (x.y + 1), safe_log(params.lambda_h())) +
                     power_log(2.0 * (x.x + 1), safe_log(params.lambda_v())) + 2 * norm * std::log(params.p_h());
    return LogValue::from_log(l);
}

UpperBound upper_bound(const Params& params, Vertex x) {
    require_positive(x);
    require_small_lambda(params.p_h());
    const double lh = params.lambda_h();
    const double norm = norm_x(x);
    const double prefactor =
        power_log(2.0 * (x.x + 1), std::log(lh)) + power_log(2.0 * (x.y + 1), safe_log(params.lambda_v()));
    UpperBound u;
    u.main = LogValue::from_log(prefactor + log_big(beta_cached(x)) + norm * std::log1p(12 * lh));
    u.tail = LogValue::from_log(prefactor + (norm / 2 + 1) * std::log(64 * lh) - std::log1p(-64 * lh));
    u.total = LogValue::from_log(log_add(u.main.log, u.tail.log));
    return u;
}

LogValue minimal_event_lower(const Params& params, Vertex x, const LatticeRegion& region) {
    require_positive(x);
    const double lq_h = safe_log(1.0 - params.p_h()), lq_v = safe_log(1.0 - params.p_v());
    const double lp_h = safe_log(params.p_h()), lp_v = safe_log(params.p_v());
    std::vector<double> logs;
    for (const auto& gamma : minimal_contours(x)) {
        const auto comp = companion_paths(gamma, x);
        for (const auto& e : gamma.edges())
            if (!region.contains(e))
                throw UsageError("region " + to_string(region) + " does not contain contour edge " + to_string(e));
        for (const auto& e : comp.t)
            if (!region.contains(e))
                throw UsageError("region " + to_string(region) + " does not contain companion edge " + to_string(e));
        logs.push_back(power_log(gamma.h_count(), lq_h) + power_log(gamma.v_count(), lq_v) +
                       power_log(comp.t_h, lp_h) + power_log(comp.t_v, lp_v));
    }
    const double top = *std::max_element(logs.begin(), logs.end());
    if (top == kNegInf) return {0.0, kNegInf};
    detail::CompensatedSum s;
    for (const double l : logs) s.add(std::exp(l - top));
    return LogValue::from_log(top + std::log(s.value()));
}

double eta_tilde(double p_h, int x1, int x2) {
    if (!(x1 > 0 && x2 > x1)) throw UsageError("eta_tilde needs 0 < x1 < x2");
    require_small_lambda(p_h);
    return eta_tilde_log(p_h, x1, x2, log_big(beta_cached({x1, x2})));
}

double f_limit(double p_h, double rho, double alpha) {
    if (!(rho > 1.0)) throw UsageError("f needs a slope rho > 1");
    if (!(alpha >= 1.0)) throw UsageError("f needs an alpha estimate >= 1");
    require_small_lambda(p_h);
    const double lh = lambda_of(p_h);
    const double log_num = std::log(alpha) + 4 * (1 + rho) * std::log(p_h);
    const double log_den =
        log_add((1 + rho) * std::log(64 * lh), std::log(alpha) + 2 * (1 + rho) * std::log1p(12 * lh));
    return std::exp((log_num - log_den) / (2 * (rho - 1)));
}

FBracket f_bracket(double p_h, double rho) {
    return {f_limit(p_h, rho, 1.0), f_limit(p_h, rho, std::pow(4.0, 1.0 + rho))};
}

BoundReport inequality_certificate(const Params& params, Vertex x) {
    require_positive(x);
    require_small_lambda(params.p_h());
    BoundReport r;
    r.params = params;
    r.x = x;
    r.x_prime = reflect(x);
    r.beta = beta_cached(x);
    r.lower_x = lower_bound(params, x);
    const auto u = upper_bound(params, x);
    r.upper_xprime_main = u.main;
    r.upper_xprime_tail = u.tail;
    r.upper_xprime = u.total;
    r.holds = r.lower_x.log > r.upper_xprime.log;
    if (x.x < x.y) r.eta_tilde = eta_tilde(params.p_h(), x.x, x.y);
    return r;
}

ThresholdReport threshold_at(double p_h, double eta, int rho_num, int rho_den, int n_max) {
    if (!(eta > 0.0 && eta < 1.0)) throw UsageError("eta must lie in (0, 1)");
    if (rho_num <= 0 || rho_den <= 0 || rho_num <= rho_den) throw UsageError("rho must be a rational > 1");
    if (n_max < 1) throw UsageError("n_max must be at least 1");
    require_small_lambda(p_h);
    const int g = std::gcd(rho_num, rho_den);
    ThresholdReport r;
    r.eta = eta;
    r.rho_num = rho_num / g;
    r.rho_den = rho_den / g;
    r.n_max = n_max;
    r.p_star = p_h;
    r.inf_eta_tilde = std::numeric_limits<double>::infinity();
    bool all = true;
    for (int n = 1; n <= n_max; ++n) {
        ThresholdRow row;
        row.n = n;
        row.x = {n * r.rho_den, n * r.rho_num};
        row.beta = beta_cached(row.x);
        row.eta_tilde = eta_tilde_log(p_h, row.x.x, row.x.y, log_big(row.beta));
        row.satisfied = eta < row.eta_tilde;
        all = all && row.satisfied;
        r.inf_eta_tilde = std::min(r.inf_eta_tilde, row.eta_tilde);
        r.rows.push_back(std::move(row));
    }
    r.f = f_bracket(p_h, r.rho());
    r.f_satisfied = eta < r.f.conservative;
    r.found = all && r.f_satisfied;
    r.note = "numerical certificate: checked for 1 <= n <= " + std::to_string(n_max) +
             " and the alpha = 1 limit only, not for every point on the line";
    return r;
}

ThresholdReport p_star_search(double eta, int rho_num, int rho_den, int n_max) {
    if (!(eta > 0.0 && eta < 1.0)) throw UsageError("eta must lie in (0, 1)");
    auto holds_at_lambda = [&](double lh) {
        return threshold_at(1.0 / (1.0 + lh), eta, rho_num, rho_den, n_max).found;
    };

    // Log-spaced lambda_h from just below 1/64 down to 1e-14, i.e. increasing p_h.
    constexpr int kGrid = 400;
    const double hi = std::log(1.0 / 64.0 * (1.0 - 1e-9));
    const double lo = std::log(1e-14);
    std::vector<double> grid(kGrid);
    for (int k = 0; k < kGrid; ++k) grid[k] = std::exp(hi + (lo - hi) * k / (kGrid - 1));

    int first = kGrid;
    for (int k = kGrid - 1; k >= 0 && holds_at_lambda(grid[k]); --k) first = k;
    if (first == kGrid) {
        auto r = threshold_at(1.0 / (1.0 + grid.back()), eta, rho_num, rho_den, n_max);
        r.found = false;
        r.note = "not found: the condition fails at p_h = " + std::to_string(1.0 / (1.0 + grid.back())) +
                 ", the largest grid value";
        return r;
    }
    double good = grid[first];
    if (first > 0) {
        double bad = grid[first - 1];
        for (int it = 0; it < 80; ++it) {
            const double mid = std::sqrt(good * bad);
            (holds_at_lambda(mid) ? good : bad) = mid;
        }
    }
    return threshold_at(1.0 / (1.0 + good), eta, rho_num, rho_den, n_max);
}

}  // namespace aniso
