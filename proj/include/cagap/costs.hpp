#ifndef CAGAP_COSTS_HPP
#define CAGAP_COSTS_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <span>
#include <string_view>

#include "cagap/dynamics.hpp"
#include "cagap/errors.hpp"

namespace cagap {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            carry_ += (sum_ - t) + v;
        else
            carry_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/**
 * Stage cost g^eps of the position.
 *
 * Equal to 1 on [0,1] and [2,inf), 0 on [1+eps, 2-eps], linear ramps of slope -1/eps and
 * 1/eps in between. eps = 0 gives the step profile: 0 on the closed band [1,2], 1 elsewhere.
 */
class StageCost {
public:
    explicit StageCost(double eps = 0.0) : eps_(eps) {
        if (!(eps >= 0.0 && eps < 0.5))
            throw InvalidParameter("smoothing width eps must lie in [0,0.5)");
    }

    double eps() const { return eps_; }
    bool smooth() const { return eps_ > 0.0; }

    double operator()(double x) const {
        if (eps_ == 0.0)
            return (x >= 1.0 && x <= 2.0) ? 0.0 : 1.0;
        if (x <= 1.0)
            return 1.0;
        if (x < 1.0 + eps_)
            return 1.0 - (x - 1.0) / eps_;
        if (x <= 2.0 - eps_)
            return 0.0;
        if (x < 2.0)
            return (x - 2.0 + eps_) / eps_;
        return 1.0;
    }

private:
    double eps_;
};

inline double eval_stage_cost(double x, const StageCost& c) { return c(x); }

enum class Functional { cesaro_discrete, abel_discrete, cesaro_continuous, abel_continuous };

inline std::string_view to_string(Functional f) {
    switch (f) {
    case Functional::cesaro_discrete: return "cesaro-discrete";
    case Functional::abel_discrete: return "abel-discrete";
    case Functional::cesaro_continuous: return "cesaro-continuous";
    case Functional::abel_continuous: return "abel-continuous";
    }
    return "unknown";
}

/// A cost functional value; `parameter` is T, alpha or lambda depending on `kind`.
struct CostValue {
    double value = 0.0;
    Functional kind = Functional::cesaro_discrete;
    double parameter = 0.0;
    /// Upper bound on the discarded tail (Abel sums only).
    double truncation_bound = 0.0;
};

/// (1/T) * sum_{t<T} g(x(t)) over positions indexed from t = 0.
inline CostValue cesaro_discrete(std::span<const double> positions, long long T, const StageCost& c) {
    if (T < 1)
        throw InvalidParameter("horizon T must be at least 1");
    if (static_cast<std::size_t>(T) > positions.size())
        throw InvalidParameter("horizon exceeds trajectory length");
    CompensatedSum sum;
    for (long long t = 0; t < T; ++t)
        sum.add(c(positions[static_cast<std::size_t>(t)]));
    return {sum.value() / static_cast<double>(T), Functional::cesaro_discrete, static_cast<double>(T),
            0.0};
}

/// Last index T* kept by a truncated discounted sum: alpha^(T*+1) <= alpha^T* <= tail_tol.
inline long long abel_truncation_index(double alpha, double tail_tol) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidParameter("discount factor alpha must lie in (0,1)");
    if (!(tail_tol > 0.0))
        throw InvalidParameter("tail tolerance must be positive");
    if (tail_tol >= 1.0)
        return 0;
    return static_cast<long long>(std::ceil(std::log(tail_tol) / std::log(alpha)));
}

/**
 * (1-alpha) * sum_{t=0}^{T*} alpha^t g(x(t)), positions drawn in order from `next_position`.
 *
 * The discarded tail is at most alpha^(T*+1) because 0 <= g <= 1.
 */
template <class Next>
    requires std::invocable<Next&> && std::convertible_to<std::invoke_result_t<Next&>, double>
CostValue abel_discrete(Next&& next_position, double alpha, const StageCost& c, double tail_tol) {
    const long long last = abel_truncation_index(alpha, tail_tol);
    CompensatedSum sum;
    double weight = 1.0 - alpha;
    for (long long t = 0; t <= last; ++t) {
        sum.add(weight * c(static_cast<double>(next_position())));
        weight *= alpha;
    }
    return {sum.value(), Functional::abel_discrete, alpha,
            std::pow(alpha, static_cast<double>(last + 1))};
}

inline CostValue abel_discrete(std::span<const double> positions, double alpha, const StageCost& c,
                               double tail_tol) {
    const long long last = abel_truncation_index(alpha, tail_tol);
    if (static_cast<std::size_t>(last) >= positions.size())
        throw InvalidParameter("trajectory shorter than the truncation index " +
                               std::to_string(last));
    std::size_t i = 0;
    return abel_discrete([&] { return positions[i++]; }, alpha, c, tail_tol);
}

/// Continuous-time average over [0,T] of the step cost along x(t) = x0 + y0 t.
inline CostValue cesaro_continuous(double x0, double y0, long long T) {
    if (!(x0 >= 0.0 && x0 < 1.0) || !(y0 >= 0.0 && y0 <= 1.0))
        throw InvalidParameter("cesaro_continuous needs x0 in [0,1) and y0 in [0,1]");
    if (T < 1)
        throw InvalidParameter("horizon T must be at least 1");
    const double horizon = static_cast<double>(T);
    if (y0 == 0.0)
        return {1.0, Functional::cesaro_continuous, horizon, 0.0};
    const double t1 = (1.0 - x0) / y0;
    const double t2 = (2.0 - x0) / y0;
    const double time_at_cost_one = std::min(horizon, t1) + std::max(0.0, horizon - t2);
    return {time_at_cost_one / horizon, Functional::cesaro_continuous, horizon, 0.0};
}

/// lambda * int_0^inf e^{-lambda t} g(x0 + y0 t) dt.
inline CostValue abel_continuous(double x0, double y0, double lambda) {
    if (!(x0 >= 0.0 && x0 < 1.0) || !(y0 >= 0.0 && y0 <= 1.0))
        throw InvalidParameter("abel_continuous needs x0 in [0,1) and y0 in [0,1]");
    if (!(lambda > 0.0))
        throw InvalidParameter("rate lambda must be positive");
    if (y0 == 0.0)
        return {1.0, Functional::abel_continuous, lambda, 0.0};
    const double v = 1.0 - std::exp(-lambda * (1.0 - x0) / y0) + std::exp(-lambda * (2.0 - x0) / y0);
    return {v, Functional::abel_continuous, lambda, 0.0};
}

// Fixed-velocity costs in O(1 + samples on the ramps).
//
// Along x(t) = x0 + t*y the index set of every cost region is an interval, so the cost-one and
// cost-zero regions reduce to counts (Cesaro) or differences of powers of alpha (Abel). Only
// ramp samples are summed one by one. Positions are formed as x0 + t*y; region boundaries are
// located by the floating-point predicate itself, so the result matches direct summation over
// the same positions.

namespace detail {

/// Smallest t in [0, n] with pred(x0 + t*y), pred monotone along the increasing positions.
template <class Pred>
long long first_index(double x0, double y, double bound, long long n, Pred pred) {
    const auto hit = [&](long long t) { return pred(x0 + static_cast<double>(t) * y); };
    const double estimate = std::ceil((bound - x0) / y);
    long long k;
    if (!(estimate < static_cast<double>(n)))
        k = n;
    else if (estimate <= 0.0)
        k = 0;
    else
        k = static_cast<long long>(estimate);
    while (k > 0 && hit(k - 1))
        --k;
    while (k < n && !hit(k))
        ++k;
    return k;
}

/// Index boundaries [0,i1) one, [i1,i2) ramp down, [i2,i3) zero, [i3,i4) ramp up, [i4,n) one.
struct RegionBreaks {
    long long i1, i2, i3, i4;
};

inline RegionBreaks region_breaks(double x0, double y, long long n, const StageCost& c) {
    const double e = c.eps();
    RegionBreaks b{};
    if (e == 0.0) {
        b.i1 = first_index(x0, y, 1.0, n, [](double x) { return x >= 1.0; });
        b.i2 = b.i1;
        b.i3 = std::max(b.i2, first_index(x0, y, 2.0, n, [](double x) { return x > 2.0; }));
        b.i4 = b.i3;
        return b;
    }
    b.i1 = first_index(x0, y, 1.0, n, [](double x) { return x > 1.0; });
    b.i2 = std::max(b.i1, first_index(x0, y, 1.0 + e, n, [e](double x) { return x >= 1.0 + e; }));
    b.i3 = std::max(b.i2, first_index(x0, y, 2.0 - e, n, [e](double x) { return x > 2.0 - e; }));
    b.i4 = std::max(b.i3, first_index(x0, y, 2.0, n, [](double x) { return x >= 2.0; }));
    return b;
}

/// Drift-free positions agree in cost with the compactified orbit (see compactification_drift).
inline bool compactification_is_inert(double x0, double y) {
    return x0 <= 2.0 && y <= kDriftKnee - 2.0;
}

/// In the compactified system, (2, 2+y] is absorbing with cost one when y <= 0.99.
inline bool trapped_above_band(double x, double y) {
    return y <= kDriftKnee - 2.0 && x > 2.0 && x <= 2.0 + y;
}

inline void require_fixed_velocity_domain(double x0, double y) {
    if (!(x0 >= 0.0) || !std::isfinite(x0) || !(y >= 0.0 && y <= 1.0))
        throw InvalidParameter("fixed-velocity cost needs x0 >= 0 and y in [0,1]");
}

} // namespace detail

/// (1/T) sum_{t<T} g(x(t)) along the uncontrolled flow from (x0, y).
inline double fixed_velocity_cesaro(double x0, double y, long long T, const StageCost& c,
                                    bool compactified = false) {
    detail::require_fixed_velocity_domain(x0, y);
    if (T < 1)
        throw InvalidParameter("horizon T must be at least 1");
    const double horizon = static_cast<double>(T);
    if (compactified && !detail::compactification_is_inert(x0, y)) {
        CompensatedSum sum;
        FlowState s{x0, y};
        for (long long t = 0; t < T; ++t) {
            if (detail::trapped_above_band(s.x, s.y)) {
                sum.add(static_cast<double>(T - t));
                break;
            }
            sum.add(c(s.x));
            s.x = next_position(s, true);
        }
        return sum.value() / horizon;
    }
    if (y == 0.0)
        return c(x0);
    const auto b = detail::region_breaks(x0, y, T, c);
    CompensatedSum sum;
    sum.add(static_cast<double>(b.i1));
    for (long long t = b.i1; t < b.i2; ++t)
        sum.add(c(x0 + static_cast<double>(t) * y));
    for (long long t = b.i3; t < b.i4; ++t)
        sum.add(c(x0 + static_cast<double>(t) * y));
    sum.add(static_cast<double>(T - b.i4));
    return sum.value() / horizon;
}

/// Truncated discounted cost along the uncontrolled flow from (x0, y); same truncation as abel_discrete.
inline double fixed_velocity_abel(double x0, double y, double alpha, const StageCost& c,
                                  double tail_tol = 1e-14, bool compactified = false) {
    detail::require_fixed_velocity_domain(x0, y);
    const long long n = abel_truncation_index(alpha, tail_tol) + 1;
    const auto power = [alpha](long long t) { return std::pow(alpha, static_cast<double>(t)); };
    if (compactified && !detail::compactification_is_inert(x0, y)) {
        CompensatedSum sum;
        FlowState s{x0, y};
        double weight = 1.0 - alpha;
        for (long long t = 0; t < n; ++t) {
            if (detail::trapped_above_band(s.x, s.y)) {
                sum.add(power(t) - power(n));
                break;
            }
            sum.add(weight * c(s.x));
            weight *= alpha;
            s.x = next_position(s, true);
        }
        return sum.value();
    }
    if (y == 0.0)
        return (1.0 - power(n)) * c(x0);
    const auto b = detail::region_breaks(x0, y, n, c);
    CompensatedSum sum;
    const auto ramp = [&](long long from, long long to) {
        double weight = (1.0 - alpha) * power(from);
        for (long long t = from; t < to && weight > 0.0; ++t) {
            sum.add(weight * c(x0 + static_cast<double>(t) * y));
            weight *= alpha;
        }
    };
    sum.add(1.0 - power(b.i1));
    ramp(b.i1, b.i2);
    ramp(b.i3, b.i4);
    sum.add(power(b.i4) - power(n));
    return sum.value();
}

} // namespace cagap

#endif // CAGAP_COSTS_HPP
