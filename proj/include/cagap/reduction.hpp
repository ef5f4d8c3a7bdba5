#ifndef CAGAP_REDUCTION_HPP
#define CAGAP_REDUCTION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "cagap/costs.hpp"
#include "cagap/dynamics.hpp"
#include "cagap/errors.hpp"
#include "cagap/minimize.hpp"

namespace cagap {

/**
 * Output of the launch-time construction applied to a controlled trajectory from (0,0).
 *
 * `launch_index` is the last t with x(t) <= a (absent when the whole trajectory stays in the
 * strip). `min_deviation` and `max_deviation` are taken over x(t) - x~(t), t >= 0.
 */
struct ReductionResult {
    Trajectory reduced;
    std::optional<long long> launch_index;
    double launch_velocity = 0.0;
    double min_deviation = 0.0;
    double max_deviation = 0.0;

    bool within(double a) const { return min_deviation >= 0.0 && max_deviation <= a; }
};

/**
 * Maps a controlled trajectory started at (0,0) to an initial-only trajectory: stay at the origin
 * until t_bar = max{t : x(t) <= a}, then move with the velocity y(t_bar).
 *
 * The bound 0 <= x - x~ <= a requires y to stay equal to y(t_bar) after t_bar. The control applied
 * at t_bar itself is still free, so the bound can fail; the deviations are reported, not enforced.
 */
inline ReductionResult reduce_controlled_trajectory(const Trajectory& traj, double a,
                                                    bool compactified = false) {
    if (traj.empty() || traj.first_index() != -1)
        throw InvalidParameter("controlled trajectory must be indexed from t = -1");
    if (!(traj.at(-1) == FlowState{0.0, 0.0}))
        throw InvalidParameter("controlled trajectory must start at (0,0)");
    SystemParams p;
    p.a = a;
    p.eps = 0.0;
    p.compactified = compactified;
    p.validate();
    check_admissible(traj, p, ControlRegime::controlled);

    const long long last = traj.last_index();
    if (last < 1)
        throw InvalidParameter("controlled trajectory must reach t = 1");
    long long t_bar = -1;
    for (long long t = 0; t <= last; ++t)
        if (traj.at(t).x <= a)
            t_bar = t;

    ReductionResult result;
    std::vector<double> controls;
    if (t_bar < last) {
        result.launch_index = t_bar;
        result.launch_velocity = traj.at(t_bar).y;
        // Controls u(-1..t_bar-2) = 0 keep (0,0); u(t_bar-1) = y(t_bar), held afterwards.
        controls.assign(static_cast<std::size_t>(t_bar), 0.0);
        controls.push_back(result.launch_velocity);
    }
    result.reduced = simulate({0.0, 0.0}, ControlSequence::values(std::move(controls)), last, p,
                              ControlRegime::initial_only);

    result.min_deviation = std::numeric_limits<double>::infinity();
    result.max_deviation = -std::numeric_limits<double>::infinity();
    for (long long t = 0; t <= last; ++t) {
        const double d = traj.at(t).x - result.reduced.at(t).x;
        result.min_deviation = std::min(result.min_deviation, d);
        result.max_deviation = std::max(result.max_deviation, d);
    }
    return result;
}

/// Initial-only trajectory x~(t) = max(0, t - launch) * velocity.
struct InitialOnlyFit {
    long long launch = 0;
    double velocity = 0.0;
};

/**
 * Searches every launch time and velocity for an initial-only trajectory with
 * 0 <= x(t) - x~(t) <= a for all listed t >= 0 (positions from t = 0, no drift).
 * Exact: for a fixed launch the feasible velocities form an interval.
 */
inline std::optional<InitialOnlyFit> find_initial_only_approximation(std::span<const double> x,
                                                                     double a) {
    if (!(a > 0.0))
        throw InvalidParameter("tolerance a must be positive");
    const auto n = static_cast<long long>(x.size());
    for (long long s = 0; s < n; ++s) {
        if (x[static_cast<std::size_t>(s)] < 0.0 || x[static_cast<std::size_t>(s)] > a)
            break;
        double lo = 0.0;
        double hi = 1.0;
        for (long long t = s + 1; t < n && lo <= hi; ++t) {
            const double xt = x[static_cast<std::size_t>(t)];
            const double k = static_cast<double>(t - s);
            lo = std::max(lo, (xt - a) / k);
            hi = std::min(hi, xt / k);
        }
        if (lo <= hi)
            return InitialOnlyFit{s, lo};
    }
    return std::nullopt;
}

/// Cesaro horizon T or Abel discount alpha.
struct Criterion {
    enum class Kind { cesaro, abel };
    Kind kind = Kind::cesaro;
    long long T = 0;
    double alpha = 0.0;

    static Criterion cesaro(long long T) {
        if (T < 1)
            throw InvalidParameter("horizon T must be at least 1");
        return {Kind::cesaro, T, 0.0};
    }
    static Criterion abel(double alpha) {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw InvalidParameter("discount factor alpha must lie in (0,1)");
        return {Kind::abel, 0, alpha};
    }
};

/// Tail tolerance for discounted sums inside the velocity searches.
inline constexpr double kAbelTailTol = 1e-14;

/// Cost of the uncontrolled flow from (x0, y) under the criterion.
inline double fixed_velocity_cost(const Criterion& crit, double x0, double y, const StageCost& c,
                                  bool compactified = false) {
    return crit.kind == Criterion::Kind::cesaro
               ? fixed_velocity_cesaro(x0, y, crit.T, c, compactified)
               : fixed_velocity_abel(x0, y, crit.alpha, c, kAbelTailTol, compactified);
}

/**
 * Optimal cost of the initial-only system from (0,0): min over y of the cost of x(t) = t*y.
 * Waiting at the origin before launching only adds unit costs, so constant velocities suffice.
 */
inline MinimizationResult best_initial_choice(const Criterion& crit, double eps,
                                              bool compactified = false,
                                              const ScanOptions& opt = {}) {
    const StageCost c(eps);
    return minimize_velocity(
        [&](double y) { return fixed_velocity_cost(crit, 0.0, y, c, compactified); },
        c.smooth() ? Smoothness::continuous : Smoothness::piecewise, opt);
}

/**
 * Controlled strategy from (0,0): y(0) = first, then at (0, first) switch to y(1) = second.
 * Positions are 0, 0, first, first + second, ...
 */
struct TwoVelocityChoice {
    double first = 1.0;
    double second = 0.0;
    double value = 0.0;

    ControlSequence controls() const { return ControlSequence::values({first, second}); }
};

/// Cost of the two-velocity strategy: g(0) at t = 0, then the flow from (first, second).
inline double two_velocity_cost(const Criterion& crit, double first, double second,
                                const StageCost& c, bool compactified = false) {
    const double g0 = c(0.0);
    if (crit.kind == Criterion::Kind::cesaro) {
        if (crit.T == 1)
            return g0;
        const double rest = fixed_velocity_cesaro(first, second, crit.T - 1, c, compactified);
        return (g0 + static_cast<double>(crit.T - 1) * rest) / static_cast<double>(crit.T);
    }
    return (1.0 - crit.alpha) * g0 +
           crit.alpha * fixed_velocity_abel(first, second, crit.alpha, c, kAbelTailTol, compactified);
}

/// Best second velocity after jumping to `first`; an admissible upper bound on the controlled optimum.
inline TwoVelocityChoice best_two_velocity_choice(const Criterion& crit, double eps,
                                                  double first = 1.0, bool compactified = false,
                                                  const ScanOptions& opt = {}) {
    if (!(first >= 0.0 && first <= 1.0))
        throw InvalidParameter("first velocity must lie in [0,1]");
    const StageCost c(eps);
    const auto m = minimize_velocity(
        [&](double w) { return two_velocity_cost(crit, first, w, c, compactified); },
        c.smooth() ? Smoothness::continuous : Smoothness::piecewise, opt);
    return {first, m.argmin, m.value};
}

/**
 * Controlled trajectory from (0,0) over t = -1..T with each control drawn uniformly from the
 * control set of the current state.
 */
template <class Rng>
Trajectory random_admissible_trajectory(Rng& rng, long long T, const SystemParams& p) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto rule = [&](long long, const FlowState& s) {
        const Interval set = control_set(s, p.a);
        return set.is_singleton() ? set.lo : set.lo + unit(rng) * set.width();
    };
    return simulate({0.0, 0.0}, ControlSequence::policy(rule), T, p, ControlRegime::controlled);
}

} // namespace cagap

#endif // CAGAP_REDUCTION_HPP
