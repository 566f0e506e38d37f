#pragma once

#include "bwmin/flow_model.hpp"

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace bwmin {

inline constexpr std::size_t kMaxSpShapedFlows = 30;
inline constexpr std::size_t kMaxFifoShapedFlows = 14;
// Full materialization of the static-priority feasibility set holds 2^n - 1 values.
inline constexpr std::size_t kMaxMaterializedFlows = 20;

SolveResult min_bw_edf(const FlowSet& fs);
SolveResult min_bw_sp(const FlowSet& fs);
SolveResult min_bw_sp_shaped(const FlowSet& fs);
SolveResult min_bw_fifo(const FlowSet& fs);
SolveResult min_bw_fifo_shaped(const FlowSet& fs);
SolveResult solve(const FlowSet& fs, SchedulerKind kind);

// EDF minimum after reshaping; each flow's deadline budget shrinks by its
// shaper delay. Throws InfeasibleReshaping if a budget is exhausted.
double min_bw_edf_reshaped(const FlowSet& fs, const ReshapingPlan& plan);

// Smallest R in [lo, hi] with pred(R), assuming pred is monotone and pred(hi)
// holds. Stops once hi - lo <= max(abs_tol, rel_tol*hi) and returns the feasible end.
double bisect_min_feasible(double lo, double hi, const std::function<bool(double)>& pred, double rel_tol = 1e-9,
                           double abs_tol = 1e-9);

// Static priority with reshaping. The feasibility set is tracked as a running
// minimum; feasibility_set() materializes every element for inspection.
double feasibility_set_min(const FlowSet& fs, double R);
std::vector<double> feasibility_set(const FlowSet& fs, double R);
bool sp_shaped_feasible(const FlowSet& fs, double R);
ReshapingPlan sp_shaped_plan(const FlowSet& fs, double R);

// FIFO with reshaping: x is the least total reshaped burst that any flow's
// deadline forces, y the most that the prefix burst sums allow.
struct FifoBounds {
    double x = 0.0;
    double y = 0.0;
};
FifoBounds fifo_bounds(const FlowSet& fs, double R);
bool fifo_shaped_feasible(const FlowSet& fs, double R);
ReshapingPlan fifo_shaped_plan(const FlowSet& fs, double R);
// Bracket [lower, upper] searched by min_bw_fifo_shaped.
std::pair<double, double> fifo_shaped_bracket(const FlowSet& fs);

// The five minimum bandwidths of one flow set.
struct Minima {
    double edf = 0.0;
    double sp = 0.0;
    double sp_shaped = 0.0;
    double fifo = 0.0;
    double fifo_shaped = 0.0;
};

Minima all_minima(const FlowSet& fs);

// f1 must have the larger deadline.
Minima two_flow_closed_forms(const FlowProfile& f1, const FlowProfile& f2);

// True iff shaped FIFO needs strictly less bandwidth than shaped static
// priority for the two flows.
bool fifo_beats_sp_two_flow(const FlowProfile& f1, const FlowProfile& f2);

} // namespace bwmin
