#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aniso/contours.hpp"
#include "aniso/core_model.hpp"

namespace aniso {

/// Natural log of a non-negative big integer; -inf for 0.
double log_big(const BigInt& v);

/// A non-negative quantity with its natural log. value is 0 when the log underflows.
struct LogValue {
    double value = 0.0;
    double log = 0.0;

    static LogValue from_log(double l);
};

/// beta_x lambda_h^{2(x2+1)} lambda_v^{2(x1+1)} p_h^{2||x||}, a lower bound for the
/// truncated connectivity between 0 and x, uniform in the box size.
LogValue lower_bound(const Params& params, Vertex x);

struct UpperBound {
    LogValue main;   ///< prefactor * beta_x (1 + 12 lambda_h)^{||x||}
    LogValue tail;   ///< prefactor * (64 lambda_h)^{||x||/2 + 1} / (1 - 64 lambda_h)
    LogValue total;  ///< main + tail
};

/// Upper bound for the truncated connectivity between 0 and x' = (x2, x1), indexed by x.
/// prefactor = lambda_h^{2(x1+1)} lambda_v^{2(x2+1)}. Needs lambda_h < 1/64.
UpperBound upper_bound(const Params& params, Vertex x);

/// Probability of the disjoint union over minimal contours gamma of
/// {gamma closed, companion paths open}. Throws UsageError when the region does not
/// contain every minimal contour and its companion paths.
LogValue minimal_event_lower(const Params& params, Vertex x, const LatticeRegion& region);

/// Anisotropy threshold below which the two bounds certify the strict inequality.
double eta_tilde(double p_h, int x1, int x2);

/// Large-x limit of eta_tilde along slope rho for a given growth-constant estimate alpha.
double f_limit(double p_h, double rho, double alpha);

struct FBracket {
    double conservative = 0.0;  ///< alpha = 1
    double upper = 0.0;         ///< alpha = 4^{1+rho}
};

FBracket f_bracket(double p_h, double rho);

struct BoundReport {
    Params params = make_params_unordered(0.5, 0.5);
    Vertex x;
    Vertex x_prime;
    BigInt beta;
    LogValue lower_x;
    LogValue upper_xprime_main;
    LogValue upper_xprime_tail;
    LogValue upper_xprime;
    bool holds = false;                ///< lower_x > upper_xprime
    std::optional<double> eta_tilde;   ///< when x1 < x2
};

BoundReport inequality_certificate(const Params& params, Vertex x);

struct ThresholdRow {
    int n = 0;
    Vertex x;
    BigInt beta;
    double eta_tilde = 0.0;
    bool satisfied = false;  ///< eta < eta_tilde
};

struct ThresholdReport {
    double eta = 0.0;
    int rho_num = 0;
    int rho_den = 1;
    int n_max = 0;
    bool found = false;
    double p_star = 0.0;              ///< smallest p_h found by grid scan plus bisection
    std::vector<ThresholdRow> rows;   ///< evaluated at p_star
    double inf_eta_tilde = 0.0;       ///< minimum over the rows
    FBracket f;                       ///< at p_star
    bool f_satisfied = false;         ///< eta < f(p_star, rho, alpha = 1)
    std::string note;

    [[nodiscard]] double rho() const { return static_cast<double>(rho_num) / rho_den; }
};

/// Scans p_h in (64/65, 1) for the smallest value at which eta < eta_tilde(p_h, n den, n num)
/// for every 1 <= n <= n_max and eta < f(p_h, rho, 1), holding also at every larger grid value.
/// The result is a numerical certificate over the finite range of n only.
ThresholdReport p_star_search(double eta, int rho_num, int rho_den, int n_max);

/// Evaluates the threshold rows and f bracket at a fixed p_h.
ThresholdReport threshold_at(double p_h, double eta, int rho_num, int rho_den, int n_max);

}  // namespace aniso
