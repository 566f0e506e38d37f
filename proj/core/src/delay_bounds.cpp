#include "bwmin/delay_bounds.hpp"

#include "bwmin/error.hpp"
#include "bwmin/solvers.hpp"

#include <algorithm>
#include <cassert>
#include <string>

namespace bwmin {

namespace {

void require_stable(const FlowSet& fs, double R) {
    if (!(R >= fs.total_rate()))
        throw Error(ErrorCode::InsufficientBandwidth,
                    "bandwidth " + std::to_string(R) + " is below the aggregate rate " + std::to_string(fs.total_rate()));
}

} // namespace

std::vector<ServiceCurveSpec> edf_service_curves(const FlowSet& fs) {
    std::vector<ServiceCurveSpec> out;
    out.reserve(fs.size());
    for (const auto& f : fs.flows()) out.push_back({f.deadline, f.burst, f.rate});
    return out;
}

std::vector<double> sp_delay_unshaped(const FlowSet& fs, double R) {
    require_stable(fs, R);
    const std::size_t n = fs.size();
    std::vector<double> d(n);
    for (std::size_t h = 0; h < n; ++h) {
        const double room = R - fs.suffix_rate(h + 1);
        assert(room > 0.0);
        d[h] = (fs.total_burst() - fs.prefix_burst(h)) / room;
    }
    return d;
}

std::vector<double> sp_delay_shaped(const FlowSet& fs, const ReshapingPlan& plan, double R) {
    require_stable(fs, R);
    plan.validate(fs);
    const std::size_t n = fs.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double room = R - fs.suffix_rate(i + 1);
        assert(room > 0.0);
        const double above = plan.suffix(i + 1);
        d[i] = std::max((fs.burst(i) + above) / room, plan.shaper_delay(fs, i) + above / room);
    }
    return d;
}

std::vector<double> fifo_delay_shaped(const FlowSet& fs, const ReshapingPlan& plan, double R) {
    require_stable(fs, R);
    plan.validate(fs);
    const std::size_t n = fs.size();
    const double total = plan.total();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double wait = plan.shaper_delay(fs, i);
        d[i] = std::max(wait + (total - plan[i]) / R, total / R + wait * fs.total_rate() / R);
    }
    return d;
}

std::vector<double> fifo_delay_unshaped(const FlowSet& fs, double R) {
    return fifo_delay_shaped(fs, ReshapingPlan::identity(fs), R);
}

std::vector<double> edf_delay(const FlowSet& fs, double R) {
    require_stable(fs, R);
    const double need = min_bw_edf(fs).r_min;
    if (R < need)
        throw Error(ErrorCode::InsufficientBandwidth,
                    "EDF needs at least " + std::to_string(need) + " to meet all deadlines");
    std::vector<double> d(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) d[i] = fs.deadline(i);
    return d;
}

std::vector<double> delay_bounds(const FlowSet& fs, SchedulerKind kind, double R, const ReshapingPlan* plan) {
    if (is_shaped(kind) && plan == nullptr)
        throw Error(ErrorCode::InvalidInput, "shaped scheduler needs a reshaping plan");
    switch (kind) {
    case SchedulerKind::Edf: return edf_delay(fs, R);
    case SchedulerKind::StaticPriority: return sp_delay_unshaped(fs, R);
    case SchedulerKind::StaticPriorityShaped: return sp_delay_shaped(fs, *plan, R);
    case SchedulerKind::Fifo: return fifo_delay_unshaped(fs, R);
    case SchedulerKind::FifoShaped: return fifo_delay_shaped(fs, *plan, R);
    }
    throw Error(ErrorCode::InvalidInput, "unknown scheduler");
}

} // namespace bwmin
