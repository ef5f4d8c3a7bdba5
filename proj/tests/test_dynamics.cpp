#include <gtest/gtest.h>

#include "cagap/dynamics.hpp"

using namespace cagap;

TEST(StepUncontrolled, MovesByVelocity) {
    EXPECT_EQ(step_uncontrolled({0.0, 0.0}), (FlowState{0.0, 0.0}));
    EXPECT_EQ(step_uncontrolled({0.0, 0.4}), (FlowState{0.4, 0.4}));
    EXPECT_EQ(step_uncontrolled({1.5, 1.0}), (FlowState{2.5, 1.0}));
}

TEST(ControlSet, FullIntervalAtOrigin) {
    const Interval u = control_set({0.0, 0.3}, 0.01);
    EXPECT_EQ(u.lo, 0.0);
    EXPECT_EQ(u.hi, 1.0);
}

TEST(ControlSet, SingletonBeyondStrip) {
    const Interval u = control_set({0.02, 0.3}, 0.01);
    EXPECT_TRUE(u.is_singleton());
    EXPECT_EQ(u.lo, 0.3);
}

TEST(ControlSet, SingletonAtStripEdge) {
    const Interval u = control_set({0.01, 0.3}, 0.01);
    EXPECT_TRUE(u.is_singleton());
    EXPECT_EQ(u.lo, 0.3);
}

TEST(ControlSet, InteriorEndpointsFollowFormula) {
    const double a = 0.01;
    const FlowState s{0.004, 0.25};
    const Interval u = control_set(s, a);
    EXPECT_DOUBLE_EQ(u.lo, s.x * s.y / a);
    EXPECT_DOUBLE_EQ(u.hi, 1.0 - s.x * (1.0 - s.y) / a);
    EXPECT_TRUE(u.contains(s.y));
}

TEST(ControlSet, RejectsWidthOutsideUnitInterval) {
    EXPECT_THROW(control_set({0.0, 0.0}, 0.0), InvalidParameter);
    EXPECT_THROW(control_set({0.0, 0.0}, 1.0), InvalidParameter);
    EXPECT_THROW(control_set({0.0, 0.0}, -0.5), InvalidParameter);
}

TEST(ControlSet, EndpointsContinuousAcrossStripEdge) {
    const double a = 0.01;
    double worst_at_edge = 0.0;
    double worst_slope = 0.0;
    for (int j = 0; j <= 100; ++j) {
        const double y = j / 100.0;
        // Formula endpoints at x = a coincide with y.
        worst_at_edge = std::max({worst_at_edge, std::abs(a * y / a - y),
                                  std::abs(1.0 - a * (1.0 - y) / a - y)});
        for (int k = 1; k <= 50; ++k) {
            const double h = a * k / 1000.0;
            const Interval inside = control_set({a - h, y}, a);
            const Interval outside = control_set({a + h, y}, a);
            const double gap = std::max(std::abs(inside.lo - outside.lo), std::abs(inside.hi - outside.hi));
            worst_slope = std::max(worst_slope, gap / h);
        }
    }
    EXPECT_LT(worst_at_edge, 1e-12);
    // Hausdorff distance to {y} grows at most like distance / a.
    EXPECT_LE(worst_slope, 1.0 / a + 1e-6);
}

TEST(StepControlled, SetsVelocityAtOrigin) {
    const SystemParams p{0.01, 0.0, false};
    EXPECT_EQ(step_controlled({0.0, 0.0}, 0.7, p), (FlowState{0.0, 0.7}));
}

TEST(StepControlled, UncontrollableRegionMatchesFreeFlow) {
    const SystemParams p{0.01, 0.0, false};
    const FlowState next = step_controlled({0.5, 0.2}, 0.2, p);
    EXPECT_DOUBLE_EQ(next.x, 0.7);
    EXPECT_EQ(next.y, 0.2);
}

TEST(StepControlled, InfeasibleControlCarriesTimeIndex) {
    const SystemParams p{0.01, 0.0, false};
    try {
        step_controlled({0.5, 0.2}, 0.9, p, 7);
        FAIL() << "expected InfeasibleControl";
    } catch (const InfeasibleControl& e) {
        EXPECT_EQ(e.time_index(), 7);
    }
}

TEST(StepControlled, EqualsFreeFlowPlusDriftBeyondStrip) {
    for (bool compact : {false, true}) {
        const SystemParams p{0.01, 0.0, compact};
        for (int i = 1; i <= 300; ++i) {
            for (int j = 0; j <= 10; ++j) {
                const FlowState s{0.01 * i, 0.1 * j};
                const FlowState next = step_controlled(s, s.y, p);
                const FlowState free = step_uncontrolled(s);
                const double drift = compact ? compactification_drift(s.x) : 0.0;
                EXPECT_DOUBLE_EQ(next.x, std::max(0.0, free.x + drift));
                EXPECT_EQ(next.y, free.y);
            }
        }
    }
}

TEST(ControlSetInitialOnly, OnlyOriginIsControllable) {
    const Interval origin = control_set_initial_only({0.0, 0.0});
    EXPECT_EQ(origin.lo, 0.0);
    EXPECT_EQ(origin.hi, 1.0);
    const Interval parked = control_set_initial_only({0.0, 0.5});
    EXPECT_TRUE(parked.is_singleton());
    EXPECT_EQ(parked.lo, 0.5);
    const Interval far = control_set_initial_only({3.0, 1.0});
    EXPECT_TRUE(far.is_singleton());
    EXPECT_EQ(far.lo, 1.0);
}

TEST(CompactificationDrift, PrescribedPieces) {
    EXPECT_EQ(compactification_drift(1.0), 0.0);
    EXPECT_EQ(compactification_drift(2.0), 0.0);
    EXPECT_EQ(compactification_drift(4.0), -4.0);
    EXPECT_EQ(compactification_drift(3.0), -3.0);
    // Trapping profile on [2,3]: slope -1.5 up to the knee.
    EXPECT_DOUBLE_EQ(compactification_drift(2.5), -0.75);
    EXPECT_NEAR(compactification_drift(kDriftKnee), -1.5 * (kDriftKnee - 2.0), 1e-15);
}

TEST(CompactificationDrift, ContinuousAndNonincreasing) {
    double prev = compactification_drift(0.0);
    for (int i = 1; i <= 400000; ++i) {
        const double x = i * 1e-5;
        const double q = compactification_drift(x);
        EXPECT_LE(q, prev + 1e-15) << "at x = " << x;
        EXPECT_LE(std::abs(q - prev), 1e-5 * 200.0 + 1e-12) << "jump at x = " << x;
        prev = q;
        if (HasFailure())
            return;
    }
}

TEST(Compactification, BoxIsInvariant) {
    for (double a : {0.001, 0.01, 0.2}) {
        const SystemParams p{a, 0.0, true};
        for (int i = 0; i <= 600; ++i) {
            for (int j = 0; j <= 50; ++j) {
                const FlowState s{i * 0.005, j * 0.02};
                const Interval u = control_set(s, a);
                for (double v : {u.lo, 0.5 * (u.lo + u.hi), u.hi}) {
                    const FlowState next = step_controlled(s, v, p);
                    ASSERT_GE(next.x, 0.0);
                    ASSERT_LE(next.x, kBoxWidth) << "from (" << s.x << ", " << s.y << ")";
                    ASSERT_GE(next.y, 0.0);
                    ASSERT_LE(next.y, 1.0);
                }
            }
        }
    }
}

TEST(Compactification, CrossingOrbitsStayAboveTwo) {
    for (int j = 1; j <= 99; ++j) {
        const double y = j * 0.01;
        FlowState s{1.9, y};
        bool crossed = false;
        bool strictly_above = false;
        for (int t = 0; t < 2000; ++t) {
            s.x = next_position(s, true);
            if (s.x >= 2.0)
                crossed = true;
            if (crossed) {
                ASSERT_TRUE(s.x >= 2.0 && s.x <= 2.0 + y + 1e-12) << "y = " << y << ", t = " << t;
            }
            if (s.x > 2.0)
                strictly_above = true;
            if (strictly_above) {
                ASSERT_GT(s.x, 2.0) << "orbit returned to x = 2, y = " << y << ", t = " << t;
            }
        }
        EXPECT_TRUE(crossed);
    }
}

TEST(Simulate, FrozenAtOrigin) {
    const SystemParams p{0.01, 0.0, false};
    const Trajectory traj = simulate({0.0, 0.0}, ControlSequence::values({0, 0, 0, 0, 0, 0, 0}), 5, p);
    EXPECT_EQ(traj.first_index(), -1);
    EXPECT_EQ(traj.size(), 7u);
    for (const auto& s : traj.states())
        EXPECT_EQ(s, (FlowState{0.0, 0.0}));
}

TEST(Simulate, UncontrolledPositions) {
    const Trajectory traj = simulate_uncontrolled({0.0, 0.5}, 4);
    EXPECT_EQ(traj.positions(), (std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0}));
}

TEST(Simulate, InitialOnlyLaunch) {
    const SystemParams p{0.01, 0.0, false};
    const Trajectory traj =
        simulate({0.0, 0.0}, ControlSequence::values({0.4}), 5, p, ControlRegime::initial_only);
    const std::vector<double> expected{0.0, 0.4, 0.8, 1.2, 1.6, 2.0};
    const auto xs = traj.positions(0);
    ASSERT_EQ(xs.size(), expected.size());
    for (std::size_t t = 0; t < xs.size(); ++t)
        EXPECT_NEAR(xs[t], expected[t], 1e-15);
}

TEST(Simulate, PropagatesInfeasibleControlIndex) {
    const SystemParams p{0.01, 0.0, false};
    // (0,0) -> (0,0.5) -> (0.5,0.5); the third control must equal 0.5.
    try {
        simulate({0.0, 0.0}, ControlSequence::values({0.5, 0.5, 0.9}), 5, p);
        FAIL() << "expected InfeasibleControl";
    } catch (const InfeasibleControl& e) {
        EXPECT_EQ(e.time_index(), 1);
    }
}

TEST(Simulate, RejectsBadInputs) {
    const SystemParams p{0.01, 0.0, false};
    EXPECT_THROW(simulate({0.0, 0.0}, ControlSequence::hold(), 0, p), InvalidParameter);
    EXPECT_THROW(simulate({-1.0, 0.0}, ControlSequence::hold(), 3, p), InvalidParameter);
    EXPECT_THROW(simulate_uncontrolled({0.0, 1.5}, 3), InvalidParameter);
}

TEST(Admissibility, InitialOnlyTrajectoriesAreControlledTrajectories) {
    for (double a : {0.001, 0.01, 0.5}) {
        for (bool compact : {false, true}) {
            const SystemParams p{a, 0.0, compact};
            for (int delay = 0; delay < 4; ++delay) {
                for (int k = 0; k <= 20; ++k) {
                    std::vector<double> v(static_cast<std::size_t>(delay), 0.0);
                    v.push_back(k / 20.0);
                    const Trajectory traj = simulate({0.0, 0.0}, ControlSequence::values(v), 200, p,
                                                     ControlRegime::initial_only);
                    EXPECT_TRUE(is_admissible(traj, p, ControlRegime::controlled));
                }
            }
        }
    }
}

TEST(Admissibility, DetectsTamperedPositions) {
    const SystemParams p{0.01, 0.0, false};
    std::vector<FlowState> states{{0.0, 0.0}, {0.0, 0.5}, {0.5, 0.5}, {1.2, 0.5}};
    const Trajectory traj(-1, states);
    try {
        check_admissible(traj, p, ControlRegime::controlled);
        FAIL() << "expected InfeasibleControl";
    } catch (const InfeasibleControl& e) {
        EXPECT_EQ(e.time_index(), 1);
    }
}

TEST(SystemParams, Validation) {
    EXPECT_NO_THROW((SystemParams{1e-4, 1e-2, false}.validate()));
    EXPECT_NO_THROW((SystemParams{0.02, 0.0, false}.validate()));
    EXPECT_THROW((SystemParams{0.02, 0.01, false}.validate()), InvalidParameter);
    EXPECT_THROW((SystemParams{0.0, 0.01, false}.validate()), InvalidParameter);
    EXPECT_THROW((SystemParams{1e-4, 0.5, false}.validate()), InvalidParameter);
}
