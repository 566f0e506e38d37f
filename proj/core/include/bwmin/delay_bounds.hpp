#pragma once

#include "bwmin/flow_model.hpp"

#include <vector>

namespace bwmin {

// Shifted token-bucket service curve: 0 before `offset`, then jump + slope*(t - offset).
struct ServiceCurveSpec {
    double offset = 0.0;
    double jump = 0.0;
    double slope = 0.0;

    double operator()(double t) const { return t < offset ? 0.0 : jump + slope * (t - offset); }
};

std::vector<ServiceCurveSpec> edf_service_curves(const FlowSet& fs);

// All functions below throw InsufficientBandwidth when R < sum of rates.
std::vector<double> sp_delay_unshaped(const FlowSet& fs, double R);
std::vector<double> sp_delay_shaped(const FlowSet& fs, const ReshapingPlan& plan, double R);
std::vector<double> fifo_delay_shaped(const FlowSet& fs, const ReshapingPlan& plan, double R);
std::vector<double> fifo_delay_unshaped(const FlowSet& fs, double R);

// EDF meets every deadline exactly when R >= the EDF minimum; below it
// there is no finite per-flow guarantee to report.
std::vector<double> edf_delay(const FlowSet& fs, double R);

// Dispatch on scheduler kind. Shaped kinds need a plan; unshaped kinds ignore it.
std::vector<double> delay_bounds(const FlowSet& fs, SchedulerKind kind, double R,
                                 const ReshapingPlan* plan = nullptr);

} // namespace bwmin
