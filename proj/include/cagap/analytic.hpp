#ifndef CAGAP_ANALYTIC_HPP
#define CAGAP_ANALYTIC_HPP

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cagap/errors.hpp"

namespace cagap {

/// Minimum value and minimizing initial velocity of a one-parameter family.
struct ClosedFormMin {
    double value = 0.0;
    double argmin = 0.0;
};

/// min over y0 of the continuous Cesaro cost: (1-x0)/(2-x0), reached at y0 = (2-x0)/T.
inline ClosedFormMin min_cesaro_continuous(double x0, long long T) {
    if (!(x0 >= 0.0 && x0 <= 1.0))
        throw InvalidParameter("x0 must lie in [0,1]");
    if (T < 2)
        throw InvalidParameter("horizon T must be at least 2 so that the minimizer is a velocity");
    return {(1.0 - x0) / (2.0 - x0), (2.0 - x0) / static_cast<double>(T)};
}

/// 1 - (1-x0)^(1-x0) / (2-x0)^(2-x0); the minimal discounted cost in the small-discount limit.
inline double abel_target(double x0) {
    return 1.0 - std::pow(1.0 - x0, 1.0 - x0) / std::pow(2.0 - x0, 2.0 - x0);
}

/**
 * min over y0 of the continuous discounted cost at rate lambda < ln 2.
 *
 * With s = exp(-lambda/y0) the cost is 1 - s^(1-x0) (1-s), minimized at s = (1-x0)/(2-x0),
 * which is interior to (0, e^-lambda] exactly when lambda < ln 2.
 */
inline ClosedFormMin min_abel_continuous(double x0, double lambda) {
    if (!(x0 >= 0.0 && x0 < 1.0))
        throw InvalidParameter("x0 must lie in [0,1)");
    if (!(lambda > 0.0))
        throw InvalidParameter("rate lambda must be positive");
    if (!(lambda < std::numbers::ln2))
        throw InvalidParameter("rate lambda must be below ln 2 for an interior minimizer");
    const double s = (1.0 - x0) / (2.0 - x0);
    return {abel_target(x0), -lambda / std::log(s)};
}

/// tau1: last sample at or below x = 1; tau2: first sample at or above x = 2.
struct TauIndices {
    long long tau1 = 0;
    long long tau2 = 0;
};

inline TauIndices tau_indices(double x0, double y0) {
    if (!(x0 >= 0.0 && x0 < 1.0))
        throw InvalidParameter("x0 must lie in [0,1)");
    if (!(y0 > 0.0 && y0 <= 1.0))
        throw InvalidParameter("y0 must lie in (0,1]");
    const double t1 = (1.0 - x0) / y0;
    const double t2 = (2.0 - x0) / y0;
    const double t2_floor = std::floor(t2);
    TauIndices tau;
    tau.tau1 = static_cast<long long>(std::floor(t1));
    tau.tau2 = static_cast<long long>(t2 == t2_floor ? t2 : t2_floor + 1.0);
    return tau;
}

/// Discounted step cost of the uncontrolled discrete flow: 1 - alpha^(tau1+1) + alpha^tau2.
inline double discrete_abel_closed_form(double x0, double y0, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidParameter("discount factor alpha must lie in (0,1)");
    const TauIndices tau = tau_indices(x0, y0);
    return 1.0 - std::pow(alpha, static_cast<double>(tau.tau1 + 1)) +
           std::pow(alpha, static_cast<double>(tau.tau2));
}

/// Limits of the minimal discrete Cesaro and Abel costs from x0.
struct DiscreteTargets {
    double cesaro = 0.0;
    double abel = 0.0;
};

inline DiscreteTargets min_discrete_targets(double x0) {
    if (!(x0 >= 0.0 && x0 < 1.0))
        throw InvalidParameter("x0 must lie in [0,1)");
    return {(1.0 - x0) / (2.0 - x0), abel_target(x0)};
}

/**
 * Shift of the minimal discounted cost caused by the eps-ramps:
 *   (1 - A^(1+eps-x0) + A^(2-eps-x0)) - (1 - B^(1-x0) + B^(2-x0)),
 * with A = (1+eps-x0)/(2-eps-x0) and B = (1-x0)/(2-x0).
 */
inline double omega2(double x0, double eps) {
    if (!(x0 >= 0.0 && x0 < 1.0))
        throw InvalidParameter("x0 must lie in [0,1)");
    if (!(eps >= 0.0 && eps < 0.5))
        throw InvalidParameter("eps must lie in [0,0.5)");
    const double A = (1.0 + eps - x0) / (2.0 - eps - x0);
    const double B = (1.0 - x0) / (2.0 - x0);
    return -std::pow(A, 1.0 + eps - x0) + std::pow(A, 2.0 - eps - x0) + std::pow(B, 1.0 - x0) -
           std::pow(B, 2.0 - x0);
}

/// sup over the 1001-point grid x0 = i/1001 of |omega2(x0, eps)|.
inline double omega2_sup(double eps) {
    double sup = 0.0;
    for (int i = 0; i <= 1000; ++i)
        sup = std::max(sup, std::abs(omega2(static_cast<double>(i) / 1001.0, eps)));
    return sup;
}

/**
 * Error envelopes around the limiting values.
 *
 * eta1 = 2/T and eta2 = 4/T bound the finite-horizon effect, omega1 = 2 eps and omega2 the
 * smoothing effect, nu_bound = 1 - alpha the finite-discount effect (alpha^p >= alpha for
 * p in [0,1]), mu_bound = a/eps the position error a seen through the 1/eps-Lipschitz cost.
 */
struct ErrorEnvelope {
    double eta1 = 0.0;
    double eta2 = 0.0;
    double omega1 = 0.0;
    double omega2 = 0.0;
    double nu_bound = 0.0;
    double mu_bound = 0.0;
};

inline ErrorEnvelope error_envelope(long long T, double alpha, double eps, double a) {
    if (T < 2)
        throw InvalidParameter("horizon T must be at least 2");
    if (!(alpha >= 0.5 && alpha < 1.0))
        throw InvalidParameter("discount factor alpha must lie in [1/2,1)");
    if (!(eps > 0.0 && eps < 0.5))
        throw InvalidParameter("eps must lie in (0,0.5)");
    if (!(a > 0.0 && a < eps))
        throw InvalidParameter("a must lie in (0,eps)");
    const double horizon = static_cast<double>(T);
    ErrorEnvelope env;
    env.eta1 = 2.0 / horizon;
    env.eta2 = env.eta1 + 2.0 / horizon;
    env.omega1 = 2.0 * eps;
    env.omega2 = omega2_sup(eps);
    env.nu_bound = 1.0 - alpha;
    env.mu_bound = a / eps;
    return env;
}

} // namespace cagap

#endif // CAGAP_ANALYTIC_HPP
