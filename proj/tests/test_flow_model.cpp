#include "bwmin/error.hpp"
#include "bwmin/flow_model.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace bwmin;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no bwmin::Error thrown";
    return ErrorCode::InvalidInput;
}

} // namespace

TEST(FlowSet, SortsByDecreasingDeadlineWithSums) {
    FlowSet fs({{1, 5, 1}, {1, 45, 10}});
    ASSERT_EQ(fs.size(), 2u);
    EXPECT_EQ(fs.deadline(0), 10);
    EXPECT_EQ(fs.deadline(1), 1);
    EXPECT_EQ(fs.suffix_rate(0), 2);
    EXPECT_EQ(fs.suffix_rate(1), 1);
    EXPECT_EQ(fs.suffix_rate(2), 0);
    EXPECT_EQ(fs.prefix_burst(0), 0);
    EXPECT_EQ(fs.prefix_burst(1), 45);
    EXPECT_EQ(fs.prefix_burst(2), 50);
    EXPECT_EQ(fs.total_burst(), 50);
}

TEST(FlowSet, Singleton) {
    FlowSet fs({{3, 7, 2}});
    EXPECT_EQ(fs.total_rate(), 3);
    EXPECT_EQ(fs.min_deadline(), 2);
}

TEST(FlowSet, RejectsEqualDeadlines) {
    EXPECT_EQ(code_of([] { FlowSet({{1, 1, 1}, {1, 1, 1}}); }), ErrorCode::EqualDeadlines);
}

TEST(FlowSet, RejectsInvalidProfiles) {
    EXPECT_EQ(code_of([] { FlowSet({{0, 1, 1}}); }), ErrorCode::InvalidProfile);
    EXPECT_EQ(code_of([] { FlowSet({{1, -1, 1}}); }), ErrorCode::InvalidProfile);
    EXPECT_EQ(code_of([] { FlowSet({{1, 1, 0}}); }), ErrorCode::InvalidProfile);
    EXPECT_EQ(code_of([] { FlowSet({{1, 1, 1.0 / 0.0}}); }), ErrorCode::InvalidProfile);
    EXPECT_EQ(code_of([] { FlowSet({{1, 1, 1, 2}}); }), ErrorCode::InvalidProfile);
    EXPECT_EQ(code_of([] { FlowSet(std::vector<FlowProfile>{}); }), ErrorCode::InvalidInput);
}

TEST(FlowSet, ZeroBurstAllowed) {
    FlowSet fs({{2, 0, 3}});
    EXPECT_EQ(fs.total_burst(), 0);
}

TEST(FlowSet, OrderInsensitive) {
    std::vector<FlowProfile> flows{{1, 2, 3}, {4, 5, 0.5}, {2, 1, 1.5}, {0.5, 9, 2.2}};
    FlowSet ref(flows);
    std::mt19937_64 g(7);
    for (int k = 0; k < 20; ++k) {
        std::shuffle(flows.begin(), flows.end(), g);
        FlowSet fs(flows);
        EXPECT_EQ(fs.flows(), ref.flows());
        for (std::size_t i = 0; i <= fs.size(); ++i) {
            EXPECT_DOUBLE_EQ(fs.suffix_rate(i), ref.suffix_rate(i));
            EXPECT_DOUBLE_EQ(fs.prefix_burst(i), ref.prefix_burst(i));
        }
    }
}

TEST(FlowSet, SuffixRatesNonincreasing) {
    FlowSet fs({{1, 2, 3}, {4, 5, 0.5}, {2, 1, 1.5}});
    for (std::size_t i = 0; i + 1 < fs.size(); ++i) EXPECT_GE(fs.suffix_rate(i), fs.suffix_rate(i + 1));
    EXPECT_GT(fs.suffix_rate(fs.size() - 1), 0);
}

TEST(FlowSetJson, ParsesAndValidates) {
    FlowSet fs = flow_set_from_json(R"({"flows":[{"r":1,"b":5,"d":1.4},{"r":4,"b":5,"d":1.25,"l":0.5}]})");
    ASSERT_EQ(fs.size(), 2u);
    EXPECT_EQ(fs[1].max_packet, 0.5);
    EXPECT_EQ(code_of([] { flow_set_from_json(R"({"flows":[{"r":1,"b":5}]})"); }), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([] { flow_set_from_json("{not json"); }), ErrorCode::InvalidInput);
    EXPECT_EQ(code_of([] { flow_set_from_json(R"({"flows":[{"r":-1,"b":5,"d":1}]})"); }),
              ErrorCode::InvalidProfile);
    EXPECT_EQ(code_of([] { flow_set_from_json(R"({"flows":[{"r":1,"b":5,"d":1},{"r":2,"b":1,"d":1}]})"); }),
              ErrorCode::EqualDeadlines);
}

TEST(ReshapingPlan, SumsAndValidation) {
    FlowSet fs({{1, 5, 1.4}, {4, 5, 1.25}, {2, 3, 1}});
    ReshapingPlan p({5, 2, 1});
    EXPECT_EQ(p.suffix(0), 8);
    EXPECT_EQ(p.suffix(1), 3);
    EXPECT_EQ(p.suffix(3), 0);
    EXPECT_EQ(p.prefix(2), 7);
    EXPECT_DOUBLE_EQ(p.shaper_delay(fs, 1), 3.0 / 4.0);
    p.validate(fs);
    EXPECT_EQ(code_of([&] { ReshapingPlan({5, 6, 1}).validate(fs); }), ErrorCode::InfeasibleReshaping);
    EXPECT_EQ(code_of([&] { ReshapingPlan({5, -1, 1}).validate(fs); }), ErrorCode::InfeasibleReshaping);
    EXPECT_EQ(code_of([&] { ReshapingPlan({5, 1}).validate(fs); }), ErrorCode::InvalidInput);
    EXPECT_EQ(ReshapingPlan::identity(fs).b_prime(), (std::vector<double>{5, 5, 3}));
}

TEST(Scheduler, NamesRoundTrip) {
    for (auto k : {SchedulerKind::Edf, SchedulerKind::StaticPriority, SchedulerKind::StaticPriorityShaped,
                   SchedulerKind::Fifo, SchedulerKind::FifoShaped})
        EXPECT_EQ(parse_scheduler(scheduler_name(k)), k);
    EXPECT_THROW(parse_scheduler("gps"), Error);
}
