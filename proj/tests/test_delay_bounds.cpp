#include "bwmin/delay_bounds.hpp"
#include "bwmin/error.hpp"

#include "support/random_instances.hpp"

#include <gtest/gtest.h>

using namespace bwmin;

TEST(EdfServiceCurves, Evaluation) {
    FlowSet fs({{1, 45, 10}, {1, 5, 1}, {2, 0, 3}});
    const auto sc = edf_service_curves(fs);
    // sorted: d = 10, 3, 1
    EXPECT_EQ(sc[0](10), 45);
    EXPECT_EQ(sc[0](12), 47);
    EXPECT_EQ(sc[0](9.99), 0);
    EXPECT_EQ(sc[2](1), 5);
    EXPECT_EQ(sc[1](3), 0);
    EXPECT_EQ(sc[1](4), 2);
}

TEST(SpDelayUnshaped, TwoFlowExample) {
    FlowSet fs({{1, 5, 1.4}, {4, 5, 1.25}});
    const double R = 78.0 / 7.0;
    const auto d = sp_delay_unshaped(fs, R);
    EXPECT_NEAR(d[1], 5.0 / R, 1e-12);
    EXPECT_NEAR(d[1], 0.4487, 1e-4);
    EXPECT_NEAR(d[0], 1.4, 1e-12);
}

TEST(SpDelayUnshaped, SingleFlowAndZeroBursts) {
    EXPECT_DOUBLE_EQ(sp_delay_unshaped(FlowSet({{2, 6, 1}}), 3)[0], 2.0);
    for (double d : sp_delay_unshaped(FlowSet({{1, 0, 1}, {2, 0, 0.5}}), 3)) EXPECT_EQ(d, 0.0);
}

TEST(SpDelayUnshaped, InsufficientBandwidth) {
    FlowSet fs({{1, 5, 1.4}, {4, 5, 1.25}});
    try {
        sp_delay_unshaped(fs, 4.9);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientBandwidth);
    }
}

TEST(SpDelayShaped, TwoFlowExample) {
    FlowSet fs({{1, 5, 1.4}, {4, 5, 1.25}});
    const double R = 53.0 / 7.0;
    const auto d = sp_delay_shaped(fs, ReshapingPlan({5, 0}), R);
    EXPECT_NEAR(d[1], 1.25, 1e-12);
    EXPECT_NEAR(d[0], 1.4, 1e-12);
}

TEST(SpDelayShaped, ZeroBurstTopFlow) {
    FlowSet fs({{1, 5, 1.4}, {4, 5, 1.25}});
    const auto d = sp_delay_shaped(fs, ReshapingPlan({5, 0}), 9.0);
    EXPECT_DOUBLE_EQ(d[1], std::max(5.0 / 9.0, 5.0 / 4.0));
}

TEST(SpDelayShaped, IdentityPlanMatchesUnshaped) {
    std::mt19937_64 g(11);
    for (int k = 0; k < 200; ++k) {
        FlowSet fs(testing_support::flows(g, 1 + k % 6));
        const double R = fs.total_rate() * testing_support::uniform(g, 1.0, 3.0);
        const auto a = sp_delay_unshaped(fs, R);
        const auto b = sp_delay_shaped(fs, ReshapingPlan::identity(fs), R);
        for (std::size_t i = 0; i < fs.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12 * a[i]);
    }
}

TEST(FifoDelayShaped, Examples) {
    FlowSet fs({{1, 5, 1.4}, {4, 5, 1.25}});
    // b' = (0, 5) in decreasing-deadline order
    const auto d = fifo_delay_shaped(fs, ReshapingPlan({0, 5}), 8);
    EXPECT_DOUBLE_EQ(d[0], 5.625);
    for (double x : fifo_delay_shaped(fs, ReshapingPlan::identity(fs), 8)) EXPECT_DOUBLE_EQ(x, 10.0 / 8.0);
    EXPECT_DOUBLE_EQ(fifo_delay_unshaped(FlowSet({{2, 6, 1}}), 4)[0], 1.5);
}

TEST(DelayBounds, MonotoneInBandwidth) {
    std::mt19937_64 g(3);
    for (int k = 0; k < 200; ++k) {
        FlowSet fs(testing_support::flows(g, 1 + k % 5));
        std::vector<double> bp;
        for (const auto& f : fs.flows()) bp.push_back(f.burst * testing_support::uniform(g, 0, 1));
        bp[0] = fs.burst(0);
        ReshapingPlan plan(bp);
        const double R = fs.total_rate() * testing_support::uniform(g, 1.0, 2.0);
        const double R2 = R * testing_support::uniform(g, 1.0, 1.5);
        for (auto fn : {+[](const FlowSet& f, const ReshapingPlan& p, double r) { return sp_delay_shaped(f, p, r); },
                        +[](const FlowSet& f, const ReshapingPlan& p, double r) { return fifo_delay_shaped(f, p, r); }}) {
            const auto a = fn(fs, plan, R);
            const auto b = fn(fs, plan, R2);
            for (std::size_t i = 0; i < fs.size(); ++i) {
                EXPECT_LE(b[i], a[i] + 1e-12);
                EXPECT_GE(b[i], 0.0);
                EXPECT_TRUE(std::isfinite(a[i]));
            }
        }
    }
}

TEST(DelayBounds, Homogeneous) {
    std::mt19937_64 g(5);
    for (int k = 0; k < 100; ++k) {
        auto flows = testing_support::flows(g, 1 + k % 5);
        FlowSet fs(flows);
        const double c = testing_support::uniform(g, 0.1, 10);
        for (auto& f : flows) {
            f.rate *= c;
            f.burst *= c;
        }
        FlowSet scaled(flows);
        std::vector<double> bp, bps;
        for (const auto& f : fs.flows()) bp.push_back(f.burst * 0.5);
        for (double x : bp) bps.push_back(x * c);
        const double R = fs.total_rate() * 1.7;
        const auto a = fifo_delay_shaped(fs, ReshapingPlan(bp), R);
        const auto b = fifo_delay_shaped(scaled, ReshapingPlan(bps), R * c);
        const auto s1 = sp_delay_shaped(fs, ReshapingPlan(bp), R);
        const auto s2 = sp_delay_shaped(scaled, ReshapingPlan(bps), R * c);
        for (std::size_t i = 0; i < fs.size(); ++i) {
            EXPECT_NEAR(a[i], b[i], 1e-9 * a[i]);
            EXPECT_NEAR(s1[i], s2[i], 1e-9 * s1[i]);
        }
    }
}

TEST(DelayBounds, DispatchNeedsPlanForShaped) {
    FlowSet fs({{1, 5, 1.4}, {4, 5, 1.25}});
    EXPECT_THROW(delay_bounds(fs, SchedulerKind::FifoShaped, 8), Error);
    EXPECT_THROW(edf_delay(fs, 7.0), Error);
    EXPECT_EQ(edf_delay(fs, 8.0), (std::vector<double>{1.4, 1.25}));
}
