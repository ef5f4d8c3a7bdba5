#ifndef CAGAP_DYNAMICS_HPP
#define CAGAP_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cagap/errors.hpp"

namespace cagap {

/// Absolute slack for membership tests u in [lo, hi].
inline constexpr double kFeasibilitySlack = 1e-12;

/// The compactification drift falls with slope -kDriftSlope on [2, kDriftKnee].
inline constexpr double kDriftSlope = 1.5;
inline constexpr double kDriftKnee = 2.99;

/// Upper end of the invariant box [0, kBoxWidth] x [0, 1] of the compactified system.
inline constexpr double kBoxWidth = 3.0;

/// Position x and velocity y of the planar system.
struct FlowState {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const FlowState&, const FlowState&) = default;
};

inline bool is_valid(const FlowState& s) {
    return std::isfinite(s.x) && std::isfinite(s.y) && s.x >= 0.0 && s.y >= 0.0 && s.y <= 1.0;
}

inline void require_valid(const FlowState& s) {
    if (!is_valid(s)) {
        std::ostringstream os;
        os << "state (" << s.x << ", " << s.y << ") outside [0,inf) x [0,1]";
        throw InvalidParameter(os.str());
    }
}

/**
 * Parameters of the controlled system.
 *
 * `a` is the width of the controllable strip x in [0, a], `eps` the ramp width of the
 * smoothed stage cost. When both are in use the strip must be narrower than the ramp.
 */
struct SystemParams {
    double a = 1e-4;
    double eps = 1e-2;
    bool compactified = false;

    void validate() const {
        if (!(a > 0.0 && a < 1.0))
            throw InvalidParameter("controllability width a must lie in (0,1)");
        if (!(eps >= 0.0 && eps < 0.5))
            throw InvalidParameter("smoothing width eps must lie in [0,0.5)");
        if (eps > 0.0 && !(a < eps))
            throw InvalidParameter("controllability width a must be smaller than eps");
    }
};

/// Closed interval [lo, hi]; a singleton when lo == hi.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double u, double slack = kFeasibilitySlack) const {
        return u >= lo - slack && u <= hi + slack;
    }
    bool is_singleton() const { return lo == hi; }
    double width() const { return hi - lo; }
    double clamp(double u) const { return std::clamp(u, lo, hi); }
};

inline FlowState step_uncontrolled(FlowState s) { return {s.x + s.y, s.y}; }

/// U(x, y): [xy/a, 1 - x(1-y)/a] on the strip 0 <= x <= a, the singleton {y} beyond it.
inline Interval control_set(FlowState s, double a) {
    if (!(a > 0.0 && a < 1.0))
        throw InvalidParameter("controllability width a must lie in (0,1)");
    require_valid(s);
    if (s.x >= a)
        return {s.y, s.y};
    const double lo = std::clamp(s.x * s.y / a, 0.0, 1.0);
    const double hi = std::clamp(1.0 - s.x * (1.0 - s.y) / a, 0.0, 1.0);
    if (lo >= hi)
        return {s.y, s.y};
    return {lo, hi};
}

/// Control set of the system that can only be steered while parked at the origin.
inline Interval control_set_initial_only(FlowState s) {
    require_valid(s);
    if (s.x == 0.0 && s.y == 0.0)
        return {0.0, 1.0};
    return {s.y, s.y};
}

/**
 * Drift q(x) that confines the compactified system to [0,3] x [0,1].
 *
 * q = 0 on [0,2], slope -1.5 on [2, 2.99], linear down to q(3) = -3, and q(x) = -x from 3 on.
 * On the sloped segment x -> x + y + q(x) sends 2 + d to 2 + y - d/2, so an orbit with
 * y <= 0.99 that crosses x = 2 stays in (2, 2 + y] for good and never returns to x = 2.
 */
inline double compactification_drift(double x) {
    if (x <= 2.0)
        return 0.0;
    if (x <= kDriftKnee)
        return -kDriftSlope * (x - 2.0);
    if (x < kBoxWidth) {
        const double q_knee = -kDriftSlope * (kDriftKnee - 2.0);
        const double slope = (-kBoxWidth - q_knee) / (kBoxWidth - kDriftKnee);
        return q_knee + slope * (x - kDriftKnee);
    }
    return -x;
}

inline double next_position(FlowState s, bool compactified) {
    const double x = s.x + s.y + (compactified ? compactification_drift(s.x) : 0.0);
    return std::max(x, 0.0);
}

enum class ControlRegime {
    controlled,   ///< control set U(x, y) with strip width a
    initial_only  ///< control set [0,1] at the origin only
};

inline Interval control_set(FlowState s, const SystemParams& p, ControlRegime regime) {
    return regime == ControlRegime::controlled ? control_set(s, p.a) : control_set_initial_only(s);
}

namespace detail {

inline FlowState checked_step(FlowState s, double u, const SystemParams& p, ControlRegime regime,
                              long long t) {
    const Interval set = control_set(s, p, regime);
    if (!std::isfinite(u) || !set.contains(u)) {
        std::ostringstream os;
        os.precision(17);
        os << "infeasible control " << u << " at state (" << s.x << ", " << s.y
           << "); control set [" << set.lo << ", " << set.hi << "]";
        throw InfeasibleControl(os.str(), t);
    }
    return {next_position(s, p.compactified), set.clamp(u)};
}

} // namespace detail

inline FlowState step_controlled(FlowState s, double u, const SystemParams& p, long long t = 0) {
    return detail::checked_step(s, u, p, ControlRegime::controlled, t);
}

inline FlowState step_initial_only(FlowState s, double v, bool compactified = false,
                                   long long t = 0) {
    SystemParams p;
    p.compactified = compactified;
    return detail::checked_step(s, v, p, ControlRegime::initial_only, t);
}

/// Controls u(t), t >= -1, either listed explicitly or produced by a feedback rule.
class ControlSequence {
public:
    using Policy = std::function<double(long long t, const FlowState& s)>;

    /// Listed controls for t = -1, 0, 1, ...; past the end the velocity is held.
    static ControlSequence values(std::vector<double> u) {
        return ControlSequence([u = std::move(u)](long long t, const FlowState& s) {
            const auto k = t + 1;
            return k >= 0 && static_cast<std::size_t>(k) < u.size() ? u[static_cast<std::size_t>(k)]
                                                                    : s.y;
        });
    }

    /// Keep the current velocity; feasible everywhere for both regimes.
    static ControlSequence hold() {
        return ControlSequence([](long long, const FlowState& s) { return s.y; });
    }

    static ControlSequence policy(Policy rule) { return ControlSequence(std::move(rule)); }

    double operator()(long long t, const FlowState& s) const { return rule_(t, s); }

private:
    explicit ControlSequence(Policy rule) : rule_(std::move(rule)) {}
    Policy rule_;
};

/// States x(t), y(t) for consecutive t starting at `first_index`.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(long long first_index, std::vector<FlowState> states)
        : first_index_(first_index), states_(std::move(states)) {}

    long long first_index() const { return first_index_; }
    long long last_index() const { return first_index_ + static_cast<long long>(states_.size()) - 1; }
    std::size_t size() const { return states_.size(); }
    bool empty() const { return states_.empty(); }

    const FlowState& at(long long t) const {
        if (t < first_index_ || t > last_index())
            throw std::out_of_range("trajectory index " + std::to_string(t) + " out of range");
        return states_[static_cast<std::size_t>(t - first_index_)];
    }

    std::span<const FlowState> states() const { return states_; }

    /// x(from), x(from+1), ..., x(last).
    std::vector<double> positions(long long from = 0) const {
        std::vector<double> xs;
        for (long long t = std::max(from, first_index_); t <= last_index(); ++t)
            xs.push_back(at(t).x);
        return xs;
    }

private:
    long long first_index_ = 0;
    std::vector<FlowState> states_;
};

/// Uncontrolled flow from t = 0 to t = T.
inline Trajectory simulate_uncontrolled(FlowState initial, long long T) {
    require_valid(initial);
    if (T < 1)
        throw InvalidParameter("horizon T must be at least 1");
    std::vector<FlowState> states;
    states.reserve(static_cast<std::size_t>(T) + 1);
    states.push_back(initial);
    for (long long t = 0; t < T; ++t)
        states.push_back(step_uncontrolled(states.back()));
    return {0, std::move(states)};
}

/// Controlled (or initial-only) system from t = -1 to t = T; T + 2 states.
inline Trajectory simulate(FlowState initial, const ControlSequence& controls, long long T,
                           const SystemParams& p, ControlRegime regime = ControlRegime::controlled) {
    require_valid(initial);
    if (T < 1)
        throw InvalidParameter("horizon T must be at least 1");
    if (regime == ControlRegime::controlled && !(p.a > 0.0 && p.a < 1.0))
        throw InvalidParameter("controllability width a must lie in (0,1)");
    std::vector<FlowState> states;
    states.reserve(static_cast<std::size_t>(T) + 2);
    states.push_back(initial);
    for (long long t = -1; t < T; ++t) {
        const FlowState& s = states.back();
        states.push_back(detail::checked_step(s, controls(t, s), p, regime, t));
    }
    return {-1, std::move(states)};
}

/**
 * Re-checks the dynamics and control constraints of a stored trajectory.
 * Throws InfeasibleControl carrying the first offending time index.
 */
inline void check_admissible(const Trajectory& traj, const SystemParams& p, ControlRegime regime,
                             double position_tol = 1e-9) {
    for (long long t = traj.first_index(); t < traj.last_index(); ++t) {
        const FlowState& s = traj.at(t);
        const FlowState& next = traj.at(t + 1);
        const double expected_x = next_position(s, p.compactified);
        if (std::abs(next.x - expected_x) > position_tol) {
            std::ostringstream os;
            os.precision(17);
            os << "position " << next.x << " does not follow the dynamics (expected " << expected_x
               << ")";
            throw InfeasibleControl(os.str(), t);
        }
        const Interval set = control_set(s, p, regime);
        if (!set.contains(next.y)) {
            std::ostringstream os;
            os.precision(17);
            os << "velocity " << next.y << " outside control set [" << set.lo << ", " << set.hi
               << "]";
            throw InfeasibleControl(os.str(), t);
        }
    }
}

inline bool is_admissible(const Trajectory& traj, const SystemParams& p, ControlRegime regime) {
    try {
        check_admissible(traj, p, regime);
        return true;
    } catch (const InfeasibleControl&) {
        return false;
    }
}

} // namespace cagap

#endif // CAGAP_DYNAMICS_HPP
