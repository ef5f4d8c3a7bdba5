#include <gtest/gtest.h>

#include "cagap/dp.hpp"
#include "cagap/reduction.hpp"

using namespace cagap;

namespace {

const GridSpec kSmall{100, 40, YSpacing::graded, 1e-3};

bool contains(const std::vector<double>& nodes, double v) {
    return std::any_of(nodes.begin(), nodes.end(), [&](double n) { return n == v; });
}

} // namespace

TEST(StateGrid, ContainsStructuralNodes) {
    const SystemParams p{0.0123, 0.05, true};
    const StateGrid grid(p, kSmall);
    for (double v : {0.0, p.a, 1.0, 2.0, 1.0 + p.eps, 2.0 - p.eps, kBoxWidth})
        EXPECT_TRUE(contains(grid.x_nodes(), v)) << v;
    EXPECT_EQ(grid.y_nodes().front(), 0.0);
    EXPECT_EQ(grid.y_nodes().back(), 1.0);
    EXPECT_TRUE(std::is_sorted(grid.x_nodes().begin(), grid.x_nodes().end()));
    EXPECT_TRUE(std::is_sorted(grid.y_nodes().begin(), grid.y_nodes().end()));
    EXPECT_EQ(grid.ny(), 41u);
    EXPECT_DOUBLE_EQ(grid.y_nodes()[1], 1e-3);
}

TEST(StateGrid, UniformYSpacing) {
    const StateGrid grid({0.01, 0.0, true}, {50, 10, YSpacing::uniform, 1e-4});
    EXPECT_EQ(grid.ny(), 11u);
    EXPECT_DOUBLE_EQ(grid.y_nodes()[3], 0.3);
}

TEST(StateGrid, RejectsTinyGrids) {
    EXPECT_THROW(StateGrid({0.01, 0.0, true}, {1, 10}), InvalidParameter);
    EXPECT_THROW(StateGrid({0.01, 0.0, true}, {10, 1}), InvalidParameter);
}

TEST(GridFunction, InterpolatesBilinearFunctionsExactly) {
    const StateGrid grid({0.01, 0.0, true}, kSmall);
    std::vector<double> v;
    for (double x : grid.x_nodes())
        for (double y : grid.y_nodes())
            v.push_back(2.0 * x - 3.0 * y + 0.5 * x * y);
    const GridFunction f(grid, v);
    for (double x : {0.0, 0.333, 1.7, 2.999})
        for (double y : {0.0, 0.0101, 0.5, 1.0})
            EXPECT_NEAR(f.at({x, y}), 2.0 * x - 3.0 * y + 0.5 * x * y, 1e-12);
}

TEST(ValueIteration, StationaryInBandCostsNothing) {
    const SystemParams p{0.01, 0.0, true};
    const StateGrid grid(p, kSmall);
    const auto sol = value_iteration_discounted(p, grid, 0.9);
    EXPECT_NEAR(sol.value.at({1.5, 0.0}), 0.0, 1e-12);
    EXPECT_NEAR(sol.value.value_from_initial({1.5, 0.0}, p), 0.0, 1e-12);
}

TEST(ValueIteration, MyopicDiscountTracksStageCost) {
    const SystemParams p{0.01, 0.0, true};
    const StateGrid grid(p, kSmall);
    const double alpha = 0.01;
    const auto sol = value_iteration_discounted(p, grid, alpha);
    const StageCost g(p.eps);
    for (std::size_t i = 0; i < grid.nx(); i += 7)
        for (std::size_t j = 0; j < grid.ny(); j += 5)
            EXPECT_LE(std::abs(sol.value.node(i, j) - g(grid.x_nodes()[i])), alpha + 1e-12);
}

TEST(ValueIteration, ContractsAtRateAlpha) {
    const SystemParams p{0.01, 0.02, true};
    const StateGrid grid(p, kSmall);
    const double alpha = 0.9;
    const auto sol = value_iteration_discounted(p, grid, alpha, 1e-9);
    const auto& d = sol.sweep_diffs;
    ASSERT_GE(d.size(), 11u);
    EXPECT_LE(d.back(), 1e-9);
    for (std::size_t k = d.size() - 10; k < d.size(); ++k)
        EXPECT_LE(d[k], alpha * d[k - 1] + 1e-15);
    EXPECT_DOUBLE_EQ(sol.certificate, 1e-9 * alpha / (1.0 - alpha));
    EXPECT_LE(sol.sweeps, value_iteration_cap(alpha, 1e-9));
}

TEST(ValueIteration, ValuesInUnitInterval) {
    const SystemParams p{0.01, 0.02, true};
    const StateGrid grid(p, kSmall);
    const auto sol = value_iteration_discounted(p, grid, 0.95);
    for (double v : sol.value.values()) {
        EXPECT_GE(v, -1e-12);
        EXPECT_LE(v, 1.0 + 1e-12);
    }
}

TEST(ValueIteration, CapFormula) {
    EXPECT_EQ(value_iteration_cap(0.5, 1e-6),
              static_cast<long long>(std::ceil(std::log(0.5e-6) / std::log(0.5))) + 100);
    EXPECT_GT(value_iteration_cap(0.999, 1e-7), 20000);
}

TEST(ValueIteration, RequiresCompactifiedSystem) {
    const SystemParams open{0.01, 0.0, false};
    const StateGrid grid({0.01, 0.0, true}, kSmall);
    EXPECT_THROW(value_iteration_discounted(open, grid, 0.9), InvalidParameter);
    EXPECT_THROW(finite_horizon_dp(open, grid, 10), InvalidParameter);
    const SystemParams p{0.01, 0.0, true};
    EXPECT_THROW(value_iteration_discounted(p, grid, 1.0), InvalidParameter);
    EXPECT_THROW(value_iteration_discounted(p, grid, 0.9, 0.0), InvalidParameter);
    EXPECT_THROW(finite_horizon_dp(p, grid, 0), InvalidParameter);
}

TEST(FiniteHorizon, OneStepIsStageCost) {
    const SystemParams p{0.01, 0.05, true};
    const StateGrid grid(p, kSmall);
    const auto V = finite_horizon_dp(p, grid, 1);
    const StageCost g(p.eps);
    for (std::size_t i = 0; i < grid.nx(); ++i)
        for (std::size_t j = 0; j < grid.ny(); j += 9)
            EXPECT_DOUBLE_EQ(V.node(i, j), g(grid.x_nodes()[i]));
}

TEST(FiniteHorizon, ExactOnUncontrolledLatticeOrbit) {
    // From (0.5, 0.25) the orbit visits grid nodes only: 0.5, 0.75, 1.0, ... ; costs 1, 1, 0, 0.
    const SystemParams p{0.01, 0.0, true};
    const StateGrid grid(p, {100, 4, YSpacing::uniform, 1e-4});
    const auto V = finite_horizon_dp(p, grid, 4);
    EXPECT_NEAR(V.at({0.5, 0.25}), 0.5, 1e-12);
}

TEST(DynamicProgramming, NotAboveTwoVelocityStrategy) {
    // The grid solution minimizes over all controlled trajectories; an explicit admissible
    // strategy bounds it from above up to interpolation error.
    const SystemParams p{0.02, 0.05, true};
    const StateGrid grid(p, {200, 60, YSpacing::graded, 1e-3});
    const double alpha = 0.95;
    const auto h = value_iteration_discounted(p, grid, alpha);
    const auto two = best_two_velocity_choice(Criterion::abel(alpha), p.eps, 1.0, true);
    EXPECT_LE(h.value.value_from_initial({0.0, 0.0}, p), two.value + 0.02);
}
