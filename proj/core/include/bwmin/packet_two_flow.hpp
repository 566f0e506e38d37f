#pragma once

#include "bwmin/flow_model.hpp"

namespace bwmin {

// Packet-based, non-preemptive static priority with two flows. f1 is the
// low-priority flow (larger deadline), f2 the high-priority one; both use
// FlowProfile::max_packet as their packet size l.

// Greedy leaky-bucket shaper (rate, burst) on the high-priority flow.
// The identity shaper (f2.rate, f2.burst) leaves the flow untouched.
struct PacketShaper {
    double rate = 0.0;
    double burst = 0.0;

    static PacketShaper identity(const FlowProfile& f2) { return {f2.rate, f2.burst}; }
};

double packet_sp_min_bw_unshaped(const FlowProfile& f1, const FlowProfile& f2);

double packet_high_priority_delay(const FlowProfile& f2, const PacketShaper& shaper, double R, double l1);

// Throws InsufficientBandwidth when R < f1.rate + f2.rate.
double packet_low_priority_delay(const FlowProfile& f1, const FlowProfile& f2, const PacketShaper& shaper,
                                 double R);

struct PacketSolution {
    double r_min = 0.0;
    PacketShaper shaper;
    // 1..4: the binding regime of the optimum; 5: shaping cannot help.
    int region = 5;
};

PacketSolution packet_sp_min_bw_shaped(const FlowProfile& f1, const FlowProfile& f2);

} // namespace bwmin
