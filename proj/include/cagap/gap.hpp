#ifndef CAGAP_GAP_HPP
#define CAGAP_GAP_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "cagap/analytic.hpp"
#include "cagap/dp.hpp"
#include "cagap/errors.hpp"
#include "cagap/reduction.hpp"

namespace cagap {

/// Slack for the difference between a scanned infimum and the true one.
inline constexpr double kScanSlack = 1e-4;

/// Largest envelope for which the two limits can still be told apart.
inline constexpr double kMaxEnvelope = 0.125;

/// A gap counts as certified when its lower bound reaches this value.
inline constexpr double kCertifiedGap = 0.19;

enum class GapMethod { reduction, dp, both };

inline std::string_view to_string(GapMethod m) {
    switch (m) {
    case GapMethod::reduction: return "reduction";
    case GapMethod::dp: return "dp";
    case GapMethod::both: return "both";
    }
    return "unknown";
}

inline GapMethod parse_gap_method(std::string_view s) {
    if (s == "reduction")
        return GapMethod::reduction;
    if (s == "dp")
        return GapMethod::dp;
    if (s == "both")
        return GapMethod::both;
    throw InvalidParameter("unknown method '" + std::string(s) + "'");
}

struct GapOptions {
    ScanOptions scan;
    GridSpec grid;
    double vi_tol = 1e-7;
    /// Allowed |reduction - dp| when both methods run.
    double agreement_tol = 0.05;
    /// DP is only run at moderate scale.
    long long dp_max_T = 20000;
    double dp_max_alpha = 0.999;
};

/**
 * Estimates of the finite-horizon average and discounted optimal costs from (0,0).
 *
 * V/h_estimate come from the reduction (initial-velocity scan) unless method == dp. The dp
 * fields hold the grid solutions when that method ran.
 */
struct GapReport {
    double V_estimate = 0.0;
    double h_estimate = 0.0;
    double V_envelope = 0.0;
    double h_envelope = 0.0;
    SystemParams params;
    long long T = 0;
    double alpha = 0.0;
    GapMethod method = GapMethod::reduction;
    std::optional<double> V_dp;
    std::optional<double> h_dp;
    double V_argmin = 0.0;
    double h_argmin = 0.0;

    /// (h - h_envelope) - (V + V_envelope).
    double certified_gap_lower_bound() const {
        return (h_estimate - h_envelope) - (V_estimate + V_envelope);
    }
    bool certified() const { return certified_gap_lower_bound() >= kCertifiedGap; }
    /// h - V >= 1/4 - (V_envelope + h_envelope).
    bool envelope_assertion() const {
        return h_estimate - V_estimate >= 0.25 - (V_envelope + h_envelope);
    }
    /// Both methods ran and agree within `tol`.
    std::optional<bool> methods_agree(double tol) const {
        if (method != GapMethod::both || !V_dp || !h_dp)
            return std::nullopt;
        return std::abs(V_estimate - *V_dp) <= tol && std::abs(h_estimate - *h_dp) <= tol;
    }
};

/**
 * V_envelope = a/eps + 4/T + 2 eps + slack; h_envelope = a/eps + (1-alpha) + |omega2(0, eps)| + slack.
 * Both estimates start at x0 = 0, so omega2 is taken there rather than as the sup over x0.
 */
inline std::pair<double, double> gap_envelopes(const SystemParams& p, long long T, double alpha) {
    const ErrorEnvelope env = error_envelope(T, alpha, p.eps, p.a);
    return {env.mu_bound + env.eta2 + env.omega1 + kScanSlack,
            env.mu_bound + env.nu_bound + std::abs(omega2(0.0, p.eps)) + kScanSlack};
}

/// Grid-solved V_T and h_alpha, each evaluated from a state given at t = -1.
struct DpSolution {
    SystemParams params;
    GridFunction V;
    GridFunction h;
};

inline DpSolution solve_dp(const SystemParams& p, long long T, double alpha,
                           const GapOptions& opt = {}) {
    SystemParams q = p;
    q.compactified = true;
    const StateGrid grid(q, opt.grid);
    auto h = value_iteration_discounted(q, grid, alpha, opt.vi_tol);
    return {q, finite_horizon_dp(q, grid, T), std::move(h.value)};
}

/**
 * Paired estimates of the optimal average cost over T steps and the optimal discounted cost
 * from (0,0). Throws InsufficientResolution when an envelope exceeds kMaxEnvelope.
 */
inline GapReport estimate_gap(const SystemParams& p, long long T, double alpha,
                              GapMethod method = GapMethod::reduction, const GapOptions& opt = {}) {
    p.validate();
    if (!(p.eps > 0.0))
        throw InvalidParameter("gap estimation needs eps > 0");
    if (!(p.a <= p.eps / 10.0))
        throw InvalidParameter("gap estimation needs a <= eps/10");
    GapReport r;
    r.params = p;
    r.T = T;
    r.alpha = alpha;
    r.method = method;
    std::tie(r.V_envelope, r.h_envelope) = gap_envelopes(p, T, alpha);
    if (r.V_envelope > kMaxEnvelope || r.h_envelope > kMaxEnvelope)
        throw InsufficientResolution("error envelopes (" + std::to_string(r.V_envelope) + ", " +
                                     std::to_string(r.h_envelope) + ") exceed " +
                                     std::to_string(kMaxEnvelope));

    if (method != GapMethod::reduction) {
        if (T > opt.dp_max_T || alpha > opt.dp_max_alpha)
            throw InvalidParameter("dp method limited to T <= " + std::to_string(opt.dp_max_T) +
                                   " and alpha <= " + std::to_string(opt.dp_max_alpha));
        const DpSolution dp = solve_dp(p, T, alpha, opt);
        const FlowState origin{0.0, 0.0};
        r.V_dp = dp.V.value_from_initial(origin, dp.params);
        r.h_dp = dp.h.value_from_initial(origin, dp.params);
        r.V_estimate = *r.V_dp;
        r.h_estimate = *r.h_dp;
    }
    if (method != GapMethod::dp) {
        const auto V = best_initial_choice(Criterion::cesaro(T), p.eps, p.compactified, opt.scan);
        const auto h = best_initial_choice(Criterion::abel(alpha), p.eps, p.compactified, opt.scan);
        r.V_estimate = V.value;
        r.h_estimate = h.value;
        r.V_argmin = V.argmin;
        r.h_argmin = h.argmin;
    }
    return r;
}

/// Square probe grid {origin + (i, j) * spacing : 0 <= i, j < n} of initial states.
struct ProbeGrid {
    FlowState origin{0.0, 0.0};
    double spacing = 0.01;
    int n = 5;
};

struct ContinuityProbe {
    double max_jump_V = 0.0;
    double max_jump_h = 0.0;
    std::vector<double> V;
    std::vector<double> h;
};

/// Largest difference between horizontally or vertically adjacent probe nodes.
inline double max_adjacent_jump(const std::vector<double>& v, int n) {
    double jump = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double here = v[static_cast<std::size_t>(i * n + j)];
            if (i + 1 < n)
                jump = std::max(jump, std::abs(v[static_cast<std::size_t>((i + 1) * n + j)] - here));
            if (j + 1 < n)
                jump = std::max(jump, std::abs(v[static_cast<std::size_t>(i * n + j + 1)] - here));
        }
    }
    return jump;
}

/// Evaluates V_T and h_alpha on the probe grid and reports the largest adjacent jumps.
inline ContinuityProbe continuity_probe(const DpSolution& dp, const ProbeGrid& probe) {
    if (probe.n < 2 || !(probe.spacing > 0.0))
        throw InvalidParameter("probe grid needs n >= 2 and a positive spacing");
    ContinuityProbe out;
    for (int i = 0; i < probe.n; ++i) {
        for (int j = 0; j < probe.n; ++j) {
            const FlowState s{probe.origin.x + i * probe.spacing, probe.origin.y + j * probe.spacing};
            if (!is_valid(s) || s.x > kBoxWidth)
                throw InvalidParameter("probe grid leaves the invariant box");
            out.V.push_back(dp.V.value_from_initial(s, dp.params));
            out.h.push_back(dp.h.value_from_initial(s, dp.params));
        }
    }
    out.max_jump_V = max_adjacent_jump(out.V, probe.n);
    out.max_jump_h = max_adjacent_jump(out.h, probe.n);
    return out;
}

inline ContinuityProbe continuity_probe(const SystemParams& p, long long T, double alpha,
                                        const ProbeGrid& probe, const GapOptions& opt = {}) {
    return continuity_probe(solve_dp(p, T, alpha, opt), probe);
}

} // namespace cagap

#endif // CAGAP_GAP_HPP
