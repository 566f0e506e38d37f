#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace bwmin {

// Token-bucket contract (rate, burst) plus a hard deadline. max_packet is
// only used by the packet model; 0 means fluid.
struct FlowProfile {
    double rate = 0.0;
    double burst = 0.0;
    double deadline = 0.0;
    double max_packet = 0.0;

    bool operator==(const FlowProfile&) const = default;
};

void validate_profile(const FlowProfile& f);

// Flows sorted by strictly decreasing deadline. Index 0 has the largest
// deadline (lowest static priority), index n-1 the smallest.
class FlowSet {
public:
    explicit FlowSet(std::vector<FlowProfile> flows);

    std::size_t size() const noexcept { return flows_.size(); }
    const FlowProfile& operator[](std::size_t i) const { return flows_[i]; }
    const std::vector<FlowProfile>& flows() const noexcept { return flows_; }

    double rate(std::size_t i) const { return flows_[i].rate; }
    double burst(std::size_t i) const { return flows_[i].burst; }
    double deadline(std::size_t i) const { return flows_[i].deadline; }

    // sum of rates over j >= i; suffix_rate(size()) == 0
    double suffix_rate(std::size_t i) const { return suffix_rate_[i]; }
    // sum of bursts over j < i; prefix_burst(0) == 0
    double prefix_burst(std::size_t i) const { return prefix_burst_[i]; }

    double total_rate() const { return suffix_rate_[0]; }
    double total_burst() const { return prefix_burst_.back(); }
    double min_deadline() const { return flows_.back().deadline; }
    double max_deadline() const { return flows_.front().deadline; }

private:
    std::vector<FlowProfile> flows_;
    std::vector<double> suffix_rate_;
    std::vector<double> prefix_burst_;
};

FlowSet new_flow_set(std::vector<FlowProfile> flows);

// {"flows":[{"r":..,"b":..,"d":..,"l":..}, ...]}; "l" is optional.
FlowSet flow_set_from_json(std::string_view text);

// Reshaped bursts b' (rates unchanged), indexed like the FlowSet.
class ReshapingPlan {
public:
    ReshapingPlan() = default;
    explicit ReshapingPlan(std::vector<double> b_prime);

    static ReshapingPlan identity(const FlowSet& fs);

    std::size_t size() const noexcept { return b_prime_.size(); }
    double operator[](std::size_t i) const { return b_prime_[i]; }
    const std::vector<double>& b_prime() const noexcept { return b_prime_; }

    // sum over j >= i; suffix(size()) == 0
    double suffix(std::size_t i) const { return suffix_[i]; }
    // sum over j < i; prefix(0) == 0
    double prefix(std::size_t i) const { return prefix_[i]; }
    double total() const { return prefix_.back(); }

    // Throws InvalidInput on size mismatch, InfeasibleReshaping when some
    // b'_i falls outside [0, b_i].
    void validate(const FlowSet& fs) const;

    // Time the last bit of a full burst waits in flow i's shaper.
    double shaper_delay(const FlowSet& fs, std::size_t i) const;

private:
    std::vector<double> b_prime_;
    std::vector<double> suffix_{0.0};
    std::vector<double> prefix_{0.0};
};

enum class SchedulerKind { Edf, StaticPriority, StaticPriorityShaped, Fifo, FifoShaped };

std::string_view scheduler_name(SchedulerKind kind);
SchedulerKind parse_scheduler(std::string_view name);
bool is_shaped(SchedulerKind kind);

struct SolveResult {
    SchedulerKind scheduler = SchedulerKind::Edf;
    double r_min = 0.0;
    std::optional<ReshapingPlan> plan;
    std::vector<double> delays;
};

} // namespace bwmin
