#ifndef CAGAP_DP_HPP
#define CAGAP_DP_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cagap/costs.hpp"
#include "cagap/dynamics.hpp"
#include "cagap/errors.hpp"

namespace cagap {

enum class YSpacing {
    graded, ///< y = 0 plus nodes geometric between y_min and 1
    uniform ///< y = k / y_cells
};

struct GridSpec {
    int x_cells_per_unit = 400;
    int y_cells = 100;
    YSpacing y_spacing = YSpacing::graded;
    double y_min = 1e-4;

    void validate() const {
        if (x_cells_per_unit < 2 || y_cells < 2)
            throw InvalidParameter("grid needs at least 2 cells per axis");
        if (y_spacing == YSpacing::graded && !(y_min > 0.0 && y_min < 1.0))
            throw InvalidParameter("graded y grid needs y_min in (0,1)");
    }
};

/// Position of a coordinate between two nodes: value = (1-w) * node[lo] + w * node[lo+1].
struct Bracket {
    std::size_t lo = 0;
    double w = 0.0;
};

/**
 * Rectangular grid on the invariant box [0,3] x [0,1] of the compactified system.
 * Contains x = 0, a, 1, 2 (and the ramp knots 1+eps, 2-eps) and y = 0, 1 exactly.
 */
class StateGrid {
public:
    StateGrid(const SystemParams& p, const GridSpec& spec = {}) : spec_(spec) {
        p.validate();
        spec.validate();
        const int nx = static_cast<int>(std::lround(kBoxWidth * spec.x_cells_per_unit));
        for (int i = 0; i <= nx; ++i)
            x_.push_back(kBoxWidth * i / nx);
        for (double extra : {p.a, 1.0, 2.0, 1.0 + p.eps, 2.0 - p.eps})
            x_.push_back(extra);
        std::sort(x_.begin(), x_.end());
        x_.erase(std::unique(x_.begin(), x_.end(),
                             [](double u, double v) { return std::abs(u - v) < 1e-12; }),
                 x_.end());

        y_.push_back(0.0);
        if (spec.y_spacing == YSpacing::uniform) {
            for (int j = 1; j <= spec.y_cells; ++j)
                y_.push_back(j == spec.y_cells ? 1.0 : double(j) / spec.y_cells);
        } else {
            const int m = spec.y_cells - 1;
            for (int j = 0; j <= m; ++j)
                y_.push_back(j == m ? 1.0 : spec.y_min * std::pow(1.0 / spec.y_min, double(j) / m));
        }
    }

    const std::vector<double>& x_nodes() const { return x_; }
    const std::vector<double>& y_nodes() const { return y_; }
    std::size_t nx() const { return x_.size(); }
    std::size_t ny() const { return y_.size(); }
    std::size_t size() const { return nx() * ny(); }
    std::size_t index(std::size_t i, std::size_t j) const { return i * ny() + j; }
    double x_max() const { return x_.back(); }
    const GridSpec& spec() const { return spec_; }

    /// Clamps into the node range, then brackets.
    Bracket bracket_x(double x) const { return locate(x_, x); }
    Bracket bracket_y(double y) const { return locate(y_, y); }

private:
    static Bracket locate(const std::vector<double>& nodes, double v) {
        v = std::clamp(v, nodes.front(), nodes.back());
        auto it = std::upper_bound(nodes.begin(), nodes.end(), v);
        std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
        if (hi >= nodes.size())
            return {nodes.size() - 2, 1.0};
        const std::size_t lo = hi - 1;
        return {lo, (v - nodes[lo]) / (nodes[hi] - nodes[lo])};
    }

    GridSpec spec_;
    std::vector<double> x_;
    std::vector<double> y_;
};

namespace detail {

/**
 * min over y in `controls` of the bilinear interpolant at (x, y), x given by its bracket.
 * The interpolant is linear in y between nodes, so the min sits at an end or at a node.
 */
inline double min_over_controls(const std::vector<double>& values, const StateGrid& grid,
                                const Bracket& bx, const Interval& controls) {
    const std::size_t ny = grid.ny();
    const auto column = [&](std::size_t j) {
        return (1.0 - bx.w) * values[bx.lo * ny + j] + bx.w * values[(bx.lo + 1) * ny + j];
    };
    const auto at_y = [&](double y) {
        const Bracket by = grid.bracket_y(y);
        return (1.0 - by.w) * column(by.lo) + by.w * column(by.lo + 1);
    };
    double best = std::min(at_y(controls.lo), at_y(controls.hi));
    const auto& ys = grid.y_nodes();
    for (auto j = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), controls.lo) -
                                           ys.begin());
         j < ny && ys[j] <= controls.hi; ++j)
        best = std::min(best, column(j));
    return best;
}

} // namespace detail

/// Nodal values on a StateGrid with bilinear interpolation.
class GridFunction {
public:
    GridFunction(StateGrid grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw InvalidParameter("value count does not match the grid");
    }

    const StateGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double node(std::size_t i, std::size_t j) const { return values_[grid_.index(i, j)]; }

    double at(const FlowState& s) const {
        const Bracket bx = grid_.bracket_x(s.x);
        const Bracket by = grid_.bracket_y(s.y);
        const auto row = [&](std::size_t i) {
            return (1.0 - by.w) * node(i, by.lo) + by.w * node(i, by.lo + 1);
        };
        return (1.0 - bx.w) * row(bx.lo) + bx.w * row(bx.lo + 1);
    }

    /// min over y in `controls` of the interpolated value at position x_next.
    double min_over_controls(double x_next, const Interval& controls) const {
        return detail::min_over_controls(values_, grid_, grid_.bracket_x(x_next), controls);
    }

    /// Cost from a state given at t = -1: min over the first control of the value at t = 0.
    double value_from_initial(const FlowState& s, const SystemParams& p) const {
        require_valid(s);
        return min_over_controls(next_position(s, true), control_set(s, p.a));
    }

private:
    StateGrid grid_;
    std::vector<double> values_;
};

namespace detail {

/// One application of W -> stage_weight * g + continuation_weight * min W(successor).
class BellmanOperator {
public:
    BellmanOperator(const SystemParams& p, const StateGrid& grid) : grid_(grid) {
        const StageCost c(p.eps);
        const auto& xs = grid.x_nodes();
        const auto& ys = grid.y_nodes();
        stage_.resize(grid.size());
        succ_.resize(grid.size());
        controllable_.assign(grid.size(), false);
        controls_.resize(grid.size());
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            for (std::size_t j = 0; j < grid.ny(); ++j) {
                const std::size_t k = grid.index(i, j);
                const FlowState s{xs[i], ys[j]};
                stage_[k] = c(s.x);
                succ_[k] = grid.bracket_x(next_position(s, true));
                const Interval set = control_set(s, p.a);
                if (!set.is_singleton()) {
                    controllable_[k] = true;
                    controls_[k] = set;
                }
            }
        }
    }

    /// dst = stage_weight * g + continuation_weight * min over controls of src(successor).
    void apply(const std::vector<double>& src, std::vector<double>& dst, double stage_weight,
               double continuation_weight) const {
        const std::size_t ny = grid_.ny();
        for (std::size_t k = 0; k < grid_.size(); ++k) {
            const Bracket& b = succ_[k];
            double next;
            if (controllable_[k]) {
                next = min_over_controls(src, grid_, b, controls_[k]);
            } else {
                const std::size_t j = k % ny;
                next = (1.0 - b.w) * src[b.lo * ny + j] + b.w * src[(b.lo + 1) * ny + j];
            }
            dst[k] = stage_weight * stage_[k] + continuation_weight * next;
        }
    }

private:
    const StateGrid& grid_;
    std::vector<double> stage_;
    std::vector<Bracket> succ_;
    std::vector<bool> controllable_;
    std::vector<Interval> controls_;
};

inline void require_compactified(const SystemParams& p) {
    if (!p.compactified)
        throw InvalidParameter("grid solvers need the compactified (bounded) system");
    p.validate();
}

} // namespace detail

struct DiscountedSolution {
    GridFunction value;
    long long sweeps = 0;
    /// Sup-norm change of every sweep, in order.
    std::vector<double> sweep_diffs;
    /// A-priori distance to the grid fixed point: vi_tol * alpha / (1 - alpha).
    double certificate = 0.0;
};

/// Iteration cap ceil(ln(vi_tol (1-alpha)) / ln alpha) + 100.
inline long long value_iteration_cap(double alpha, double vi_tol) {
    return static_cast<long long>(std::ceil(std::log(vi_tol * (1.0 - alpha)) / std::log(alpha))) +
           100;
}

/**
 * Fixed point of W = (1-alpha) g^eps + alpha * min W(successor) on the grid, starting from W = 0.
 * Throws NonConvergence if the sweep change is still above vi_tol at the cap.
 */
inline DiscountedSolution value_iteration_discounted(const SystemParams& p, const StateGrid& grid,
                                                     double alpha, double vi_tol = 1e-7) {
    detail::require_compactified(p);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidParameter("discount factor alpha must lie in (0,1)");
    if (!(vi_tol > 0.0))
        throw InvalidParameter("value iteration tolerance must be positive");
    const detail::BellmanOperator bellman(p, grid);
    const long long cap = value_iteration_cap(alpha, vi_tol);
    std::vector<double> w(grid.size(), 0.0);
    std::vector<double> next(grid.size(), 0.0);
    std::vector<double> diffs;
    for (long long sweep = 1; sweep <= cap; ++sweep) {
        bellman.apply(w, next, 1.0 - alpha, alpha);
        double diff = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k)
            diff = std::max(diff, std::abs(next[k] - w[k]));
        w.swap(next);
        diffs.push_back(diff);
        if (diff <= vi_tol) {
            return {GridFunction(grid, std::move(w)), sweep, std::move(diffs),
                    vi_tol * alpha / (1.0 - alpha)};
        }
    }
    throw NonConvergence("value iteration did not reach tolerance within " + std::to_string(cap) +
                             " sweeps",
                         cap);
}

/// V_T on the grid: J_k = g^eps + min J_{k-1}(successor), J_0 = 0, returned as J_T / T.
inline GridFunction finite_horizon_dp(const SystemParams& p, const StateGrid& grid, long long T) {
    detail::require_compactified(p);
    if (T < 1)
        throw InvalidParameter("horizon T must be at least 1");
    const detail::BellmanOperator bellman(p, grid);
    std::vector<double> j(grid.size(), 0.0);
    std::vector<double> next(grid.size(), 0.0);
    for (long long k = 0; k < T; ++k) {
        bellman.apply(j, next, 1.0, 1.0);
        j.swap(next);
    }
    const double scale = 1.0 / static_cast<double>(T);
    for (double& v : j)
        v *= scale;
    return GridFunction(grid, std::move(j));
}

} // namespace cagap

#endif // CAGAP_DP_HPP
