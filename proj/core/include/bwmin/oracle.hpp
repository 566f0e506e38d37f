#pragma once

#include "bwmin/flow_model.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace bwmin {

// Flow i sends its whole burst at offsets[i], then its rate forever.
struct ArrivalPattern {
    std::vector<double> offsets;

    static ArrivalPattern synchronized(std::size_t n) { return {std::vector<double>(n, 0.0)}; }
};

struct SimConfig {
    double dt = 0.0;      // 0 selects min deadline / 1000
    double horizon = 0.0; // 0 selects a bound derived from the busy period
    SchedulerKind scheduler = SchedulerKind::Fifo;
    std::optional<ReshapingPlan> plan; // required for the shaped kinds
};

SimConfig default_sim_config(const FlowSet& fs, double R, SchedulerKind kind,
                             std::optional<ReshapingPlan> plan = std::nullopt);

// Cumulative curves sampled at t = k*dt: source arrivals, shaper output and
// link departures, indexed [flow][k].
struct SimTrace {
    double dt = 0.0;
    std::size_t window_steps = 0; // delays are measured for data sent up to here
    bool drained = false;         // all measured data left before the horizon
    std::vector<std::vector<double>> arrivals;
    std::vector<std::vector<double>> shaped;
    std::vector<std::vector<double>> departures;
};

SimTrace simulate_trace(const FlowSet& fs, double R, const SimConfig& cfg, const ArrivalPattern& pattern);

// Largest virtual delay seen by each flow.
std::vector<double> max_virtual_delays(const SimTrace& trace);

std::vector<double> simulate(const FlowSet& fs, double R, const SimConfig& cfg, const ArrivalPattern& pattern);

// Offsets tried per flow: offset_grid evenly spaced points over
// [0, max(shaper delay, deadline)] plus every flow's shaper delay. Patterns
// where no flow starts at 0 are skipped (only relative offsets matter).
// offset_grid <= 1 runs the synchronized pattern only; otherwise n <= 3.
std::vector<double> adversarial_search(const FlowSet& fs, double R, const SimConfig& cfg, std::size_t offset_grid);

inline constexpr std::size_t kMaxSearchFlows = 3;

} // namespace bwmin
