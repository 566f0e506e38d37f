#include "bwmin/packet_two_flow.hpp"

#include "bwmin/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bwmin {

namespace {

void check_pair(const FlowProfile& f1, const FlowProfile& f2) {
    validate_profile(f1);
    validate_profile(f2);
    if (!(f1.deadline > f2.deadline))
        throw Error(ErrorCode::InvalidInput, "low-priority flow must have the strictly larger deadline");
    for (const auto* f : {&f1, &f2}) {
        if (f->max_packet > 0.0 && !(f->max_packet < f->burst))
            throw Error(ErrorCode::InvalidProfile, "packet size must be smaller than the burst");
    }
}

// Lower end of the feasible shaper-burst interval when the shaper keeps the
// flow's own rate: the high-priority deadline forces b' up to this value.
double min_shaper_burst(const FlowProfile& f1, const FlowProfile& f2, double R) {
    const double l12 = f1.max_packet + f2.max_packet;
    const double need = f2.burst - f2.rate * (f2.deadline - l12 / R);
    return std::min(f2.burst, std::max(f2.max_packet, need));
}

} // namespace

double packet_sp_min_bw_unshaped(const FlowProfile& f1, const FlowProfile& f2) {
    check_pair(f1, f2);
    return std::max({f1.rate + f2.rate, (f1.max_packet + f2.burst) / f2.deadline,
                     (f1.burst + f2.burst) / f1.deadline + f2.rate});
}

double packet_high_priority_delay(const FlowProfile& f2, const PacketShaper& shaper, double R, double l1) {
    if (!(R > f2.rate)) throw Error(ErrorCode::InsufficientBandwidth, "bandwidth must exceed the flow rate");
    return std::max((f2.burst + l1) / R, (f2.burst - shaper.burst) / shaper.rate + (l1 + f2.max_packet) / R);
}

double packet_low_priority_delay(const FlowProfile& f1, const FlowProfile& f2, const PacketShaper& shaper,
                                 double R) {
    const double r1 = f1.rate, b1 = f1.burst, r2 = f2.rate, b2 = f2.burst;
    const double rs = shaper.rate, bs = shaper.burst;
    if (R < r1 + r2) throw Error(ErrorCode::InsufficientBandwidth, "bandwidth below the aggregate rate");
    if (rs < r2) throw Error(ErrorCode::InvalidInput, "shaper rate below the flow rate");
    if (rs == r2) return (b1 + bs) / (R - r2);
    const double test = (R - rs) * (b2 - bs) / (rs - r2) - (b1 + bs);
    if (test < 0.0) return (b1 + b2) / (R - r2);
    // test >= 0 with bs < b2 implies R > rs
    const double first = (b1 + bs) > 0.0 ? (b1 + bs) / (R - rs) : 0.0;
    return std::max(first, (b1 + b2) / r1 - (R - r1 - r2) * (b2 - bs) / (r1 * (rs - r2)));
}

PacketSolution packet_sp_min_bw_shaped(const FlowProfile& f1, const FlowProfile& f2) {
    check_pair(f1, f2);
    const double r1 = f1.rate, b1 = f1.burst, d1 = f1.deadline, l1 = f1.max_packet;
    const double r2 = f2.rate, b2 = f2.burst, d2 = f2.deadline, l2 = f2.max_packet;
    const double unshaped = packet_sp_min_bw_unshaped(f1, f2);

    // Regions of the rate-preserving sub-problem, first match wins.
    const double split = (b2 + l1) / (r1 + r2);
    const double k = (b1 + l2) * (d2 - (b2 - l2) / r2) / (l1 + b2 - r2 * d2);
    const double two_lo = d2 * (b1 + l2) / (b2 + l1 - d2 * r2) + d2 * (b2 - l2) / (b2 + l1);
    const double two_hi = d2 * (b1 + b2) / (b2 + l1 - d2 * r2);

    int region = 5;
    double opt1 = unshaped;
    if ((l2 + b1) / r1 <= d1 && d1 < (b1 + b2) / r1 &&
        d2 >= std::max(split, (b1 + b2 - d1 * r1) / r2 + (l1 + l2) / (r1 + r2))) {
        region = 1;
        opt1 = r1 + r2;
    } else if (d2 < split && two_lo <= d1 && d1 < two_hi) {
        region = 2;
        opt1 = (b2 + l1) / d2;
    } else if ((d2 < (l1 + b2) / r2 && d1 < std::min((b1 + l2) / r1, k)) ||
               (d2 >= (l1 + b2) / r2 && d1 < (b1 + l2) / r1)) {
        region = 3;
        opt1 = (l2 + b1) / d1 + r2;
    } else if ((d2 < split && k <= d1 && d1 < two_lo) ||
               (split <= d2 && d2 <= (b2 + l1) / r2 && k <= d1 &&
                d1 < r2 * (l1 + l2) / (r1 * (r1 + r2)) + (b1 + b2 - d2 * r2) / r1)) {
        region = 4;
        const double a = (d1 - d2) * r2 + b1 + b2;
        opt1 = (a + std::sqrt(a * a + 4.0 * d1 * r2 * (l1 + l2))) / (2.0 * d1);
    }

    // Faster shaper rate: only ever reaches the high-priority bound.
    double opt2 = unshaped;
    if (d2 < split && d2 * (b2 - l2) / (b2 + l1) + (b1 + l2) / r1 <= d1 && d1 < two_hi) opt2 = (b2 + l1) / d2;

    PacketSolution sol;
    sol.r_min = std::min(opt1, opt2);
    if (sol.r_min >= unshaped) {
        sol.r_min = unshaped;
        sol.region = 5;
        sol.shaper = PacketShaper::identity(f2);
        return sol;
    }
    sol.region = opt1 <= opt2 ? region : 2;
    sol.shaper = {r2, min_shaper_burst(f1, f2, sol.r_min)};
    return sol;
}

} // namespace bwmin
