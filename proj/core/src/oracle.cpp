#include "bwmin/oracle.hpp"

#include "bwmin/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <string>

namespace bwmin {

namespace {

struct Tagged {
    double amount;
    double tag;
};

struct Chunk {
    std::vector<double> amount;
    double total;
};

double shaper_delay_max(const FlowSet& fs, const std::optional<ReshapingPlan>& plan) {
    if (!plan) return 0.0;
    double m = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) m = std::max(m, plan->shaper_delay(fs, i));
    return m;
}

// Serves up to `cap` from the queues and adds what each flow got to `served`.
class Link {
public:
    Link(SchedulerKind kind, std::size_t n) : kind_(kind), backlog_(n, 0.0), edf_(n) {}

    void enqueue(const std::vector<double>& amount, const std::vector<double>& tag) {
        switch (kind_) {
        case SchedulerKind::StaticPriority:
        case SchedulerKind::StaticPriorityShaped:
            for (std::size_t i = 0; i < amount.size(); ++i) backlog_[i] += amount[i];
            break;
        case SchedulerKind::Edf:
            for (std::size_t i = 0; i < amount.size(); ++i)
                if (amount[i] > 0.0) edf_[i].push_back({amount[i], tag[i]});
            break;
        case SchedulerKind::Fifo:
        case SchedulerKind::FifoShaped: {
            double total = 0.0;
            for (double a : amount) total += a;
            if (total > 0.0) fifo_.push_back({amount, total});
            break;
        }
        }
    }

    void serve(double cap, std::vector<double>& served) {
        switch (kind_) {
        case SchedulerKind::StaticPriority:
        case SchedulerKind::StaticPriorityShaped:
            for (std::size_t i = backlog_.size(); i-- > 0 && cap > 0.0;) {
                const double x = std::min(backlog_[i], cap);
                backlog_[i] -= x;
                served[i] += x;
                cap -= x;
            }
            break;
        case SchedulerKind::Edf:
            while (cap > 0.0) {
                std::size_t pick = edf_.size();
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < edf_.size(); ++i) {
                    if (!edf_[i].empty() && edf_[i].front().tag < best) {
                        best = edf_[i].front().tag;
                        pick = i;
                    }
                }
                if (pick == edf_.size()) break;
                auto& head = edf_[pick].front();
                const double x = std::min(head.amount, cap);
                head.amount -= x;
                served[pick] += x;
                cap -= x;
                if (head.amount <= 0.0) edf_[pick].pop_front();
            }
            break;
        case SchedulerKind::Fifo:
        case SchedulerKind::FifoShaped:
            while (cap > 0.0 && !fifo_.empty()) {
                auto& head = fifo_.front();
                if (head.total <= cap) {
                    for (std::size_t i = 0; i < head.amount.size(); ++i) served[i] += head.amount[i];
                    cap -= head.total;
                    fifo_.pop_front();
                } else {
                    // a chunk arrived within one step, so its flows leave side by side
                    const double f = cap / head.total;
                    for (std::size_t i = 0; i < head.amount.size(); ++i) {
                        served[i] += head.amount[i] * f;
                        head.amount[i] *= 1.0 - f;
                    }
                    head.total -= cap;
                    cap = 0.0;
                }
            }
            break;
        }
    }

private:
    SchedulerKind kind_;
    std::vector<double> backlog_;
    std::vector<std::deque<Tagged>> edf_;
    std::deque<Chunk> fifo_;
};

} // namespace

SimConfig default_sim_config(const FlowSet& fs, double R, SchedulerKind kind, std::optional<ReshapingPlan> plan) {
    SimConfig cfg;
    cfg.scheduler = kind;
    cfg.plan = std::move(plan);
    cfg.dt = fs.min_deadline() / 1000.0;
    const double gap = std::max(R - fs.total_rate(), 0.01 * fs.total_rate());
    cfg.horizon = 3.0 * (fs.max_deadline() + fs.total_burst() / gap);
    return cfg;
}

SimTrace simulate_trace(const FlowSet& fs, double R, const SimConfig& cfg, const ArrivalPattern& pattern) {
    const std::size_t n = fs.size();
    if (!(R >= fs.total_rate()))
        throw Error(ErrorCode::InsufficientBandwidth, "simulated bandwidth below the aggregate rate");
    if (is_shaped(cfg.scheduler) && !cfg.plan)
        throw Error(ErrorCode::InvalidInput, "shaped scheduler needs a reshaping plan");
    if (cfg.plan) cfg.plan->validate(fs);
    if (pattern.offsets.size() != n) throw Error(ErrorCode::InvalidInput, "one offset per flow is required");
    for (double o : pattern.offsets)
        if (!std::isfinite(o) || o < 0.0) throw Error(ErrorCode::InvalidInput, "offsets must be finite and >= 0");

    const SimConfig def = default_sim_config(fs, R, cfg.scheduler);
    const double dt = cfg.dt > 0.0 ? cfg.dt : def.dt;
    if (dt > fs.min_deadline() / 100.0)
        throw Error(ErrorCode::GridTooCoarse, "time step " + std::to_string(dt) + " exceeds min deadline / 100");

    std::vector<std::size_t> start(n);
    double last_start = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        start[i] = static_cast<std::size_t>(std::llround(pattern.offsets[i] / dt));
        last_start = std::max(last_start, start[i] * dt);
    }
    const double window = last_start + shaper_delay_max(fs, cfg.plan) + fs.max_deadline();
    const double horizon = window + (cfg.horizon > 0.0 ? cfg.horizon : def.horizon);

    SimTrace tr;
    tr.dt = dt;
    tr.window_steps = static_cast<std::size_t>(std::ceil(window / dt));
    const std::size_t max_steps = std::max(tr.window_steps + 1, static_cast<std::size_t>(std::ceil(horizon / dt)));
    tr.arrivals.assign(n, {});
    tr.shaped.assign(n, {});
    tr.departures.assign(n, {0.0});

    auto source = [&](std::size_t i, std::size_t k) {
        return k < start[i] ? 0.0 : fs.burst(i) + fs.rate(i) * static_cast<double>(k - start[i]) * dt;
    };
    // emission time of the x-th unit of flow i
    auto emitted_at = [&](std::size_t i, double x) {
        const double t0 = start[i] * dt;
        return x <= fs.burst(i) ? t0 : t0 + (x - fs.burst(i)) / fs.rate(i);
    };

    Link link(cfg.scheduler, n);
    std::vector<double> tokens_cap(n), fresh(n), tag(n), served(n, 0.0), total_dep(n, 0.0);
    std::vector<double> shaper_m(n, std::numeric_limits<double>::infinity()), prev_src(n, 0.0), prev_out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) tokens_cap[i] = cfg.plan ? (*cfg.plan)[i] : fs.burst(i);

    const double cap = R * dt;
    double volume_scale = 1.0;
    for (std::size_t k = 0; k < max_steps; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double a = source(i, k);
            double out = a;
            if (cfg.plan) {
                // greedy shaper: min over past of arrivals plus the token envelope
                shaper_m[i] = std::min(shaper_m[i] + fs.rate(i) * dt, prev_src[i] + tokens_cap[i]);
                out = std::min(a, shaper_m[i]);
            }
            fresh[i] = out - prev_out[i];
            tag[i] = emitted_at(i, out) + fs.deadline(i);
            prev_src[i] = a;
            prev_out[i] = out;
            tr.arrivals[i].push_back(a);
            tr.shaped[i].push_back(out);
        }
        link.enqueue(fresh, tag);
        std::fill(served.begin(), served.end(), 0.0);
        link.serve(cap, served);
        for (std::size_t i = 0; i < n; ++i) {
            total_dep[i] += served[i];
            tr.departures[i].push_back(total_dep[i]);
        }

        if (k == tr.window_steps) {
            volume_scale = 1.0;
            for (std::size_t i = 0; i < n; ++i) volume_scale += tr.arrivals[i][k];
        }
        if (k >= tr.window_steps) {
            bool done = true;
            for (std::size_t i = 0; i < n && done; ++i)
                done = total_dep[i] >= tr.arrivals[i][tr.window_steps] - 1e-9 * volume_scale;
            if (done) {
                tr.drained = true;
                break;
            }
        }
    }
    return tr;
}

std::vector<double> max_virtual_delays(const SimTrace& tr) {
    const std::size_t n = tr.arrivals.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = tr.arrivals[i];
        const auto& dep = tr.departures[i];
        const std::size_t last = std::min(tr.window_steps, a.size() - 1);
        const double eps = 1e-9 * (1.0 + a[last]);
        std::size_t m = 1;
        for (std::size_t k = 0; k <= last; ++k) {
            const double target = a[k];
            if (target <= 0.0) continue;
            while (m < dep.size() && dep[m] < target - eps) ++m;
            double when;
            if (m >= dep.size()) {
                // never fully left; the delay is at least the remaining horizon
                when = static_cast<double>(dep.size() - 1) * tr.dt;
            } else {
                const double lo = dep[m - 1], hi = dep[m];
                const double frac = hi > lo ? std::clamp((target - eps - lo) / (hi - lo), 0.0, 1.0) : 1.0;
                when = (static_cast<double>(m - 1) + frac) * tr.dt;
            }
            out[i] = std::max(out[i], when - static_cast<double>(k) * tr.dt);
        }
    }
    return out;
}

std::vector<double> simulate(const FlowSet& fs, double R, const SimConfig& cfg, const ArrivalPattern& pattern) {
    return max_virtual_delays(simulate_trace(fs, R, cfg, pattern));
}

std::vector<double> adversarial_search(const FlowSet& fs, double R, const SimConfig& cfg, std::size_t offset_grid) {
    const std::size_t n = fs.size();
    if (offset_grid <= 1) return simulate(fs, R, cfg, ArrivalPattern::synchronized(n));
    if (n > kMaxSearchFlows)
        throw Error(ErrorCode::TooManyFlows,
                    "offset search is limited to " + std::to_string(kMaxSearchFlows) + " flows");

    double span = shaper_delay_max(fs, cfg.plan);
    std::set<double> cand{0.0};
    if (cfg.plan)
        for (std::size_t i = 0; i < n; ++i) cand.insert(cfg.plan->shaper_delay(fs, i));
    span = std::max(span, fs.max_deadline());
    for (std::size_t g = 1; g < offset_grid; ++g) cand.insert(span * g / (offset_grid - 1));
    const std::vector<double> pts(cand.begin(), cand.end());

    std::vector<double> worst(n, 0.0);
    std::vector<std::size_t> idx(n, 0);
    ArrivalPattern pattern{std::vector<double>(n, 0.0)};
    while (true) {
        bool anchored = false;
        for (std::size_t i = 0; i < n; ++i) {
            pattern.offsets[i] = pts[idx[i]];
            anchored = anchored || idx[i] == 0;
        }
        if (anchored) {
            const auto d = simulate(fs, R, cfg, pattern);
            for (std::size_t i = 0; i < n; ++i) worst[i] = std::max(worst[i], d[i]);
        }
        std::size_t pos = 0;
        while (pos < n && ++idx[pos] == pts.size()) idx[pos++] = 0;
        if (pos == n) break;
    }
    return worst;
}

} // namespace bwmin
