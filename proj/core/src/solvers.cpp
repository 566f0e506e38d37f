#include "bwmin/solvers.hpp"

#include "bwmin/delay_bounds.hpp"
#include "bwmin/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bwmin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_burst(double v, double b) {
    if (std::abs(v) <= 1e-9) v = 0.0;
    return std::clamp(v, 0.0, b);
}

void require_at_most(const FlowSet& fs, std::size_t limit, const char* what) {
    if (fs.size() > limit)
        throw Error(ErrorCode::TooManyFlows, std::string(what) + " supports at most " + std::to_string(limit) +
                                                 " flows, got " + std::to_string(fs.size()));
}

SolveResult make_result(const FlowSet& fs, SchedulerKind kind, double R, std::optional<ReshapingPlan> plan) {
    SolveResult res;
    res.scheduler = kind;
    res.r_min = R;
    res.delays = delay_bounds(fs, kind, R, plan ? &*plan : nullptr);
    res.plan = std::move(plan);
    return res;
}

// Depth-first walk over assignments of each index to {excluded, P1, P2}.
// P1 members contribute the shaper-delay-bound constraint, P2 members the
// busy-period constraint of the FIFO delay.
struct FifoEnum {
    const FlowSet& fs;
    double R;
    std::vector<double> p1_num, p1_coef, p2_num, p2_coef;

    FifoEnum(const FlowSet& f, double r) : fs(f), R(r) {
        const std::size_t n = fs.size();
        const double R1 = fs.total_rate();
        p1_num.resize(n);
        p1_coef.resize(n);
        p2_num.resize(n);
        p2_coef.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ri = fs.rate(i), bi = fs.burst(i), di = fs.deadline(i);
            p1_num[i] = R * (bi - di * ri) / (R + ri);
            p1_coef[i] = ri / (R + ri);
            p2_num[i] = bi - ri * di * R / R1;
            p2_coef[i] = ri / R1;
        }
    }

    // min over nonempty (P1, P2) within the first k indices, 1 <= k <= n-1
    void walk_y(std::size_t k, double num, double coef, bool any, double& best) const {
        if (k > 0 && any) best = std::min(best, (fs.prefix_burst(k) - num) / coef);
        if (k + 1 >= fs.size()) return;
        walk_y(k + 1, num, coef, any, best);
        walk_y(k + 1, num + p1_num[k], coef + p1_coef[k], true, best);
        walk_y(k + 1, num + p2_num[k], coef + p2_coef[k], true, best);
    }

    // max over all (P1, P2) except P2 = everything; returns early once the
    // running max exceeds `stop`.
    bool walk_x(std::size_t k, double num, double coef, bool all_p2, double& best, double stop) const {
        if (k == fs.size()) {
            if (!all_p2) {
                best = std::max(best, num / (1.0 - coef));
                if (best > stop) return false;
            }
            return true;
        }
        return walk_x(k + 1, num, coef, false, best, stop) &&
               walk_x(k + 1, num + p1_num[k], coef + p1_coef[k], false, best, stop) &&
               walk_x(k + 1, num + p2_num[k], coef + p2_coef[k], all_p2, best, stop);
    }

    double y() const {
        double best = std::min(fs.total_burst(), R * fs.min_deadline());
        walk_y(0, 0.0, 0.0, false, best);
        return best;
    }

    // P2 = everything does not depend on S and reduces to R sum(r d) >= R1 sum(b)
    double x(double stop = kInf) const {
        double all_p2 = 0.0;
        for (double v : p2_num) all_p2 += v;
        if (all_p2 > 1e-12 * std::max(1.0, fs.total_burst())) return kInf;
        double best = 0.0;
        walk_x(0, 0.0, 0.0, true, best, stop);
        return best;
    }
};

double fifo_slack(double y) { return 1e-12 * std::max(1.0, std::abs(y)); }

} // namespace

double bisect_min_feasible(double lo, double hi, const std::function<bool(double)>& pred, double rel_tol,
                           double abs_tol) {
    if (pred(lo)) return lo;
    while (hi - lo > std::max(abs_tol, rel_tol * hi)) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

SolveResult min_bw_edf(const FlowSet& fs) {
    const std::size_t n = fs.size();
    double R = fs.total_rate();
    for (std::size_t h = 0; h < n; ++h) {
        const double dh = fs.deadline(h);
        double need = 0.0;
        for (std::size_t i = h; i < n; ++i) need += fs.burst(i) + fs.rate(i) * (dh - fs.deadline(i));
        R = std::max(R, need / dh);
    }
    // EDF at its minimum meets each deadline exactly; no need to go through edf_delay.
    SolveResult res;
    res.scheduler = SchedulerKind::Edf;
    res.r_min = R;
    for (const auto& f : fs.flows()) res.delays.push_back(f.deadline);
    return res;
}

double min_bw_edf_reshaped(const FlowSet& fs, const ReshapingPlan& plan) {
    plan.validate(fs);
    const std::size_t n = fs.size();
    std::vector<double> budget(n);
    for (std::size_t i = 0; i < n; ++i) {
        budget[i] = fs.deadline(i) - plan.shaper_delay(fs, i);
        if (!(budget[i] > 0.0))
            throw Error(ErrorCode::InfeasibleReshaping,
                        "shaper delay of flow " + std::to_string(i) + " uses up its whole deadline");
    }
    // Reshaping can reorder the effective deadlines, so every pair is checked.
    double R = fs.total_rate();
    for (std::size_t h = 0; h < n; ++h) {
        double need = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (budget[i] <= budget[h]) need += plan[i] + fs.rate(i) * (budget[h] - budget[i]);
        }
        R = std::max(R, need / budget[h]);
    }
    return R;
}

SolveResult min_bw_sp(const FlowSet& fs) {
    const std::size_t n = fs.size();
    double R = fs.total_rate();
    for (std::size_t h = 0; h < n; ++h) {
        const double bursts = fs.total_burst() - fs.prefix_burst(h);
        R = std::max(R, bursts / fs.deadline(h) + fs.suffix_rate(h + 1));
    }
    return make_result(fs, SchedulerKind::StaticPriority, R, std::nullopt);
}

double feasibility_set_min(const FlowSet& fs, double R) {
    require_at_most(fs, kMaxSpShapedFlows, "static-priority reshaping");
    const std::size_t n = fs.size();
    double m = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        const double room = R - fs.suffix_rate(i + 1);
        const double v = fs.deadline(i) * room - fs.burst(i);
        if (i == 0) {
            m = v;
            continue;
        }
        const double h = fs.burst(i) - fs.deadline(i) * fs.rate(i);
        const double pi = (fs.rate(i) + room) / room;
        // s -> (s - h)/pi is increasing, so the image's minimum comes from m.
        m = std::min({m, v, (m - h) / pi});
    }
    return m;
}

std::vector<double> feasibility_set(const FlowSet& fs, double R) {
    require_at_most(fs, kMaxMaterializedFlows, "feasibility set materialization");
    std::vector<double> s;
    s.reserve((std::size_t{1} << fs.size()) - 1);
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const double room = R - fs.suffix_rate(i + 1);
        const double v = fs.deadline(i) * room - fs.burst(i);
        if (i == 0) {
            s.push_back(v);
            continue;
        }
        const double h = fs.burst(i) - fs.deadline(i) * fs.rate(i);
        const double pi = (fs.rate(i) + room) / room;
        const std::size_t prev = s.size();
        s.push_back(v);
        for (std::size_t k = 0; k < prev; ++k) s.push_back((s[k] - h) / pi);
    }
    return s;
}

bool sp_shaped_feasible(const FlowSet& fs, double R) {
    if (R < fs.total_rate()) return false;
    return feasibility_set_min(fs, R) >= 0.0;
}

ReshapingPlan sp_shaped_plan(const FlowSet& fs, double R) {
    const std::size_t n = fs.size();
    std::vector<double> bp(n);
    double above = 0.0;
    for (std::size_t i = n; i-- > 1;) {
        const double room = R - fs.suffix_rate(i + 1);
        const double v = fs.burst(i) - fs.rate(i) * fs.deadline(i) + fs.rate(i) * above / room;
        bp[i] = clamp_burst(v, fs.burst(i));
        above += bp[i];
    }
    bp[0] = fs.burst(0);
    return ReshapingPlan(std::move(bp));
}

SolveResult min_bw_sp_shaped(const FlowSet& fs) {
    require_at_most(fs, kMaxSpShapedFlows, "static-priority reshaping");
    const double hi = min_bw_sp(fs).r_min;
    // The predicate is O(n), so search well past the generic tolerance.
    const double R = bisect_min_feasible(
        fs.total_rate(), hi, [&](double r) { return sp_shaped_feasible(fs, r); }, 1e-14, 0.0);
    return make_result(fs, SchedulerKind::StaticPriorityShaped, R, sp_shaped_plan(fs, R));
}

SolveResult min_bw_fifo(const FlowSet& fs) {
    const double R = std::max(fs.total_rate(), fs.total_burst() / fs.min_deadline());
    return make_result(fs, SchedulerKind::Fifo, R, std::nullopt);
}

FifoBounds fifo_bounds(const FlowSet& fs, double R) {
    require_at_most(fs, kMaxFifoShapedFlows, "FIFO reshaping");
    if (R < fs.total_rate())
        throw Error(ErrorCode::InsufficientBandwidth, "bandwidth below the aggregate rate");
    FifoEnum e(fs, R);
    return {e.x(), e.y()};
}

bool fifo_shaped_feasible(const FlowSet& fs, double R) {
    require_at_most(fs, kMaxFifoShapedFlows, "FIFO reshaping");
    if (R < fs.total_rate()) return false;
    FifoEnum e(fs, R);
    const double y = e.y();
    const double stop = y + fifo_slack(y);
    return e.x(stop) <= stop;
}

ReshapingPlan fifo_shaped_plan(const FlowSet& fs, double R) {
    require_at_most(fs, kMaxFifoShapedFlows, "FIFO reshaping");
    const std::size_t n = fs.size();
    const double R1 = fs.total_rate();
    const double S = FifoEnum(fs, R).x();

    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ri = fs.rate(i), bi = fs.burst(i), di = fs.deadline(i);
        const double own = R / (R + ri) * (bi - di * ri + ri * S / R);
        const double busy = bi + ri * (S - R * di) / R1;
        t[i] = std::max({0.0, own, busy});
    }
    // prefix[i] is the reshaped burst total of the first i flows
    std::vector<double> prefix(n + 1, 0.0);
    prefix[n] = S;
    double t_sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) t_sum += t[i];
    for (std::size_t i = n; i-- > 1;) {
        prefix[i] = std::max(t_sum, prefix[i + 1] - fs.burst(i));
        t_sum -= t[i - 1];
    }
    std::vector<double> bp(n);
    for (std::size_t i = 0; i < n; ++i) bp[i] = clamp_burst(prefix[i + 1] - prefix[i], fs.burst(i));
    return ReshapingPlan(std::move(bp));
}

std::pair<double, double> fifo_shaped_bracket(const FlowSet& fs) {
    double weighted = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) weighted += fs.rate(i) * fs.deadline(i);
    const double lower = std::max(fs.total_rate(), fs.total_burst() * fs.total_rate() / weighted);
    const double upper = min_bw_fifo(fs).r_min;
    return {std::min(lower, upper), upper};
}

SolveResult min_bw_fifo_shaped(const FlowSet& fs) {
    require_at_most(fs, kMaxFifoShapedFlows, "FIFO reshaping");
    const auto [lo, hi] = fifo_shaped_bracket(fs);
    const double R = bisect_min_feasible(
        lo, hi, [&](double r) { return fifo_shaped_feasible(fs, r); }, 1e-10, 0.0);
    return make_result(fs, SchedulerKind::FifoShaped, R, fifo_shaped_plan(fs, R));
}

SolveResult solve(const FlowSet& fs, SchedulerKind kind) {
    switch (kind) {
    case SchedulerKind::Edf: return min_bw_edf(fs);
    case SchedulerKind::StaticPriority: return min_bw_sp(fs);
    case SchedulerKind::StaticPriorityShaped: return min_bw_sp_shaped(fs);
    case SchedulerKind::Fifo: return min_bw_fifo(fs);
    case SchedulerKind::FifoShaped: return min_bw_fifo_shaped(fs);
    }
    throw Error(ErrorCode::InvalidInput, "unknown scheduler");
}

Minima all_minima(const FlowSet& fs) {
    return {min_bw_edf(fs).r_min, min_bw_sp(fs).r_min, min_bw_sp_shaped(fs).r_min, min_bw_fifo(fs).r_min,
            min_bw_fifo_shaped(fs).r_min};
}

Minima two_flow_closed_forms(const FlowProfile& f1, const FlowProfile& f2) {
    validate_profile(f1);
    validate_profile(f2);
    if (!(f1.deadline > f2.deadline))
        throw Error(ErrorCode::InvalidInput, "first flow must have the strictly larger deadline");
    const double r1 = f1.rate, b1 = f1.burst, d1 = f1.deadline;
    const double r2 = f2.rate, b2 = f2.burst, d2 = f2.deadline;
    const double rs = r1 + r2;

    Minima m;
    m.edf = std::max({rs, b2 / d2, (b1 + b2 - r2 * d2) / d1 + r2});
    m.sp = std::max({rs, b2 / d2, (b1 + b2) / d1 + r2});
    if (b2 / r2 >= b1 / r1)
        m.sp_shaped = m.edf;
    else
        m.sp_shaped = std::max({rs, b2 / d2, (b1 + std::max(b2 - r2 * d2, 0.0)) / d1 + r2});
    m.fifo = std::max(rs, (b1 + b2) / d2);
    const double q = b1 + b2 - d1 * r1;
    m.fifo_shaped = std::max({rs, b2 / d2, (b1 + b2) * rs / (d1 * r1 + d2 * r2),
                              (q + std::sqrt(q * q + 4.0 * r1 * d2 * b2)) / (2.0 * d2)});
    return m;
}

bool fifo_beats_sp_two_flow(const FlowProfile& f1, const FlowProfile& f2) {
    validate_profile(f1);
    validate_profile(f2);
    if (!(f1.deadline > f2.deadline))
        throw Error(ErrorCode::InvalidInput, "first flow must have the strictly larger deadline");
    const double r1 = f1.rate, b1 = f1.burst, d1 = f1.deadline;
    const double r2 = f2.rate, b2 = f2.burst, d2 = f2.deadline;
    if (!(b2 / r2 < d1 && d1 < b1 / r1)) return false;
    const double g = (b1 + b2) * (r1 + r2) / (r2 * (b1 / d1 + r2)) - d1 * r1 / r2;
    return g < d2 && d2 < d1;
}

} // namespace bwmin
