#include "bwmin/flow_model.hpp"

#include "bwmin/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bwmin {

namespace {

std::string describe(const FlowProfile& f) {
    std::ostringstream os;
    os << "(r=" << f.rate << ", b=" << f.burst << ", d=" << f.deadline << ", l=" << f.max_packet << ")";
    return os.str();
}

} // namespace

void validate_profile(const FlowProfile& f) {
    auto fail = [&](const char* what) {
        throw Error(ErrorCode::InvalidProfile, std::string(what) + " in flow " + describe(f));
    };
    if (!std::isfinite(f.rate) || f.rate <= 0.0) fail("rate must be finite and > 0");
    if (!std::isfinite(f.burst) || f.burst < 0.0) fail("burst must be finite and >= 0");
    if (!std::isfinite(f.deadline) || f.deadline <= 0.0) fail("deadline must be finite and > 0");
    if (!std::isfinite(f.max_packet) || f.max_packet < 0.0) fail("max packet must be finite and >= 0");
    if (f.max_packet > f.burst) fail("max packet exceeds burst");
}

FlowSet::FlowSet(std::vector<FlowProfile> flows) : flows_(std::move(flows)) {
    if (flows_.empty()) throw Error(ErrorCode::InvalidInput, "flow set is empty");
    for (const auto& f : flows_) validate_profile(f);

    std::stable_sort(flows_.begin(), flows_.end(),
                     [](const FlowProfile& a, const FlowProfile& b) { return a.deadline > b.deadline; });
    for (std::size_t i = 1; i < flows_.size(); ++i) {
        if (flows_[i].deadline == flows_[i - 1].deadline) {
            throw Error(ErrorCode::EqualDeadlines,
                        "flows " + describe(flows_[i - 1]) + " and " + describe(flows_[i]) +
                            " share a deadline; perturb one deadline by a small epsilon");
        }
    }

    const std::size_t n = flows_.size();
    suffix_rate_.assign(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) suffix_rate_[i] = suffix_rate_[i + 1] + flows_[i].rate;
    prefix_burst_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix_burst_[i + 1] = prefix_burst_[i] + flows_[i].burst;
}

FlowSet new_flow_set(std::vector<FlowProfile> flows) { return FlowSet(std::move(flows)); }

FlowSet flow_set_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("flows") || !doc["flows"].is_array())
        throw Error(ErrorCode::InvalidInput, "expected an object with a \"flows\" array");

    std::vector<FlowProfile> flows;
    for (const auto& item : doc["flows"]) {
        if (!item.is_object()) throw Error(ErrorCode::InvalidInput, "each flow must be an object");
        auto number = [&](const char* key, bool required) -> double {
            if (!item.contains(key)) {
                if (required) throw Error(ErrorCode::InvalidInput, std::string("flow is missing \"") + key + "\"");
                return 0.0;
            }
            const auto& v = item[key];
            if (!v.is_number()) throw Error(ErrorCode::InvalidInput, std::string("\"") + key + "\" must be a number");
            return v.get<double>();
        };
        flows.push_back({number("r", true), number("b", true), number("d", true), number("l", false)});
    }
    return FlowSet(std::move(flows));
}

ReshapingPlan::ReshapingPlan(std::vector<double> b_prime) : b_prime_(std::move(b_prime)) {
    const std::size_t n = b_prime_.size();
    suffix_.assign(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) suffix_[i] = suffix_[i + 1] + b_prime_[i];
    prefix_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix_[i + 1] = prefix_[i] + b_prime_[i];
}

ReshapingPlan ReshapingPlan::identity(const FlowSet& fs) {
    std::vector<double> b(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) b[i] = fs.burst(i);
    return ReshapingPlan(std::move(b));
}

void ReshapingPlan::validate(const FlowSet& fs) const {
    if (b_prime_.size() != fs.size())
        throw Error(ErrorCode::InvalidInput, "plan has " + std::to_string(b_prime_.size()) + " entries for " +
                                                 std::to_string(fs.size()) + " flows");
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (!std::isfinite(b_prime_[i]) || b_prime_[i] < 0.0 || b_prime_[i] > fs.burst(i))
            throw Error(ErrorCode::InfeasibleReshaping,
                        "reshaped burst " + std::to_string(b_prime_[i]) + " outside [0, b] for flow " +
                            describe(fs[i]));
    }
}

double ReshapingPlan::shaper_delay(const FlowSet& fs, std::size_t i) const {
    return (fs.burst(i) - b_prime_[i]) / fs.rate(i);
}

std::string_view scheduler_name(SchedulerKind kind) {
    switch (kind) {
    case SchedulerKind::Edf: return "edf";
    case SchedulerKind::StaticPriority: return "sp";
    case SchedulerKind::StaticPriorityShaped: return "sp-shaped";
    case SchedulerKind::Fifo: return "fifo";
    case SchedulerKind::FifoShaped: return "fifo-shaped";
    }
    return "unknown";
}

SchedulerKind parse_scheduler(std::string_view name) {
    for (auto k : {SchedulerKind::Edf, SchedulerKind::StaticPriority, SchedulerKind::StaticPriorityShaped,
                   SchedulerKind::Fifo, SchedulerKind::FifoShaped}) {
        if (scheduler_name(k) == name) return k;
    }
    throw Error(ErrorCode::InvalidInput, "unknown scheduler '" + std::string(name) + "'");
}

bool is_shaped(SchedulerKind kind) {
    return kind == SchedulerKind::StaticPriorityShaped || kind == SchedulerKind::FifoShaped;
}

} // namespace bwmin
