#ifndef CAGAP_MINIMIZE_HPP
#define CAGAP_MINIMIZE_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <type_traits>

#include "cagap/errors.hpp"

namespace cagap {

struct MinimizationResult {
    double argmin = 0.0;
    double value = 0.0;
    int grid_points = 0;
    bool refined = false;
    double bracket_width = 0.0;
};

enum class Smoothness {
    continuous, ///< golden-section refinement inside the best coarse bracket
    piecewise   ///< grid minimum only
};

template <class F>
concept ScalarObjective = std::invocable<F&, double> &&
                          std::convertible_to<std::invoke_result_t<F&, double>, double>;

namespace detail {

/// Keeps the smallest value seen; ties keep the smaller argument.
struct BestPoint {
    double x = 0.0;
    double value = std::numeric_limits<double>::infinity();

    void offer(double at, double v) {
        if (v < value || (v == value && at < x)) {
            x = at;
            value = v;
        }
    }
};

template <class F>
void golden_section(F& f, double lo, double hi, double tol, BestPoint& best) {
    constexpr double inv_phi = std::numbers::phi - 1.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    best.offer(c, fc);
    best.offer(d, fd);
    while (hi - lo > tol) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
            best.offer(c, fc);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
            best.offer(d, fd);
        }
        if (c == d)
            break;
    }
}

} // namespace detail

/**
 * Minimizes f over [lo, hi]: scan of coarse_n + 1 uniform nodes, then (continuous f only)
 * golden-section search inside the bracket around the best node until it is narrower than tol.
 */
template <ScalarObjective F>
MinimizationResult minimize_scalar(F&& f, int coarse_n, double tol,
                                   Smoothness smoothness = Smoothness::continuous, double lo = 0.0,
                                   double hi = 1.0) {
    if (coarse_n < 3)
        throw InvalidParameter("coarse grid needs at least 3 intervals");
    if (!(tol > 0.0))
        throw InvalidParameter("tolerance must be positive");
    if (!(hi > lo))
        throw InvalidParameter("empty search interval");

    const double h = (hi - lo) / coarse_n;
    detail::BestPoint best;
    int best_node = 0;
    for (int k = 0; k <= coarse_n; ++k) {
        const double x = k == coarse_n ? hi : lo + k * h;
        const double v = f(x);
        if (v < best.value) {
            best.offer(x, v);
            best_node = k;
        }
    }

    MinimizationResult result;
    result.grid_points = coarse_n + 1;
    if (smoothness == Smoothness::continuous) {
        const double a = lo + std::max(best_node - 1, 0) * h;
        const double b = best_node + 1 >= coarse_n ? hi : lo + (best_node + 1) * h;
        detail::BestPoint refined = best;
        detail::golden_section(f, a, b, tol, refined);
        best = refined;
        result.refined = true;
        result.bracket_width = std::min(tol, b - a);
    } else {
        result.bracket_width = h;
    }
    result.argmin = best.x;
    result.value = best.value;
    return result;
}

/// Options for velocity searches whose minimizer may sit anywhere between 1e-12 and 1.
struct ScanOptions {
    int coarse_n = 2000;
    double tol = 1e-13;
    double y_floor = 1e-12;
    int zoom_levels = 2;
};

/**
 * Minimizes f over velocities y in [0,1]: y = 0, a log-uniform scan of [y_floor, 1], uniform
 * zoom scans of the winning bracket, and golden refinement when f is continuous.
 */
template <ScalarObjective F>
MinimizationResult minimize_velocity(F&& f, Smoothness smoothness, const ScanOptions& opt = {}) {
    if (opt.coarse_n < 3 || !(opt.y_floor > 0.0 && opt.y_floor < 1.0))
        throw InvalidParameter("invalid velocity scan options");
    detail::BestPoint best;
    best.offer(0.0, f(0.0));
    int evaluations = 1;

    const double log_floor = std::log(opt.y_floor);
    const auto node = [&](int k) {
        return k >= opt.coarse_n ? 1.0 : std::exp(log_floor * (1.0 - double(k) / opt.coarse_n));
    };
    int best_node = -1;
    double best_log_value = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= opt.coarse_n; ++k) {
        const double y = node(k);
        const double v = f(y);
        ++evaluations;
        if (v < best_log_value) {
            best_log_value = v;
            best_node = k;
        }
        best.offer(y, v);
    }

    double lo = best_node > 0 ? node(best_node - 1) : 0.0;
    double hi = node(std::min(best_node + 1, opt.coarse_n));
    for (int level = 0; level < opt.zoom_levels; ++level) {
        const auto zoom = minimize_scalar(f, opt.coarse_n, opt.tol, Smoothness::piecewise, lo, hi);
        evaluations += zoom.grid_points;
        best.offer(zoom.argmin, zoom.value);
        const double h = zoom.bracket_width;
        lo = std::max(lo, zoom.argmin - h);
        hi = std::min(hi, zoom.argmin + h);
    }

    MinimizationResult result;
    if (smoothness == Smoothness::continuous && hi - lo > opt.tol) {
        detail::BestPoint refined = best;
        detail::golden_section(f, lo, hi, opt.tol, refined);
        best = refined;
        result.refined = true;
        result.bracket_width = opt.tol;
    } else {
        result.bracket_width = hi - lo;
    }
    result.argmin = best.x;
    result.value = best.value;
    result.grid_points = evaluations;
    return result;
}

} // namespace cagap

#endif // CAGAP_MINIMIZE_HPP
