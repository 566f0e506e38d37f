#pragma once

#include "bwmin/flow_model.hpp"
#include "bwmin/solvers.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bwmin {

struct DeadlineScenario {
    std::string name;
    std::vector<double> deadlines;
};

// d11, d21, d22, d23, d31, d32, d33, d34
const std::vector<DeadlineScenario>& standard_scenarios();
const DeadlineScenario& scenario_by_name(std::string_view name);
// {"name": "...", "deadlines": [...]}
DeadlineScenario scenario_from_json(std::string_view text);

enum class Metric {
    EdfVsSpShaped,        // (sp_shaped - edf) / sp_shaped
    EdfVsFifoShaped,      // (fifo_shaped - edf) / fifo_shaped
    SpShapedVsFifoShaped, // (fifo_shaped - sp_shaped) / fifo_shaped
    SpReshapingGain,      // (sp - sp_shaped) / sp
    FifoReshapingGain,    // (fifo - fifo_shaped) / fifo
};

inline constexpr Metric kAllMetrics[] = {Metric::EdfVsSpShaped, Metric::EdfVsFifoShaped, Metric::SpShapedVsFifoShaped,
                                         Metric::SpReshapingGain, Metric::FifoReshapingGain};

std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view name);
double metric_value(Metric m, const Minima& x);

struct ScenarioStats {
    std::string metric;
    std::string scenario;
    double mean = 0.0;
    double std_dev = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t trials = 0;
};

ScenarioStats summarize(std::string metric, std::string scenario, const std::vector<double>& samples);

// Sub-seed for trial t: SplitMix64 output number t of a stream seeded with `master`.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t t);

// One random flow set: bursts ~ U(1,10) drawn first, then rates ~ U(0, sum of bursts).
FlowSet sample_flows(const DeadlineScenario& sc, std::uint64_t seed);

// Minima of every trial, in trial order. Runs on up to BWMIN_THREADS threads.
std::vector<Minima> sample_minima(const DeadlineScenario& sc, std::size_t trials, std::uint64_t seed);

std::vector<ScenarioStats> run_scenario(const DeadlineScenario& sc, std::size_t trials, std::uint64_t seed);

struct GainSamples {
    std::vector<double> sp;   // sorted (sp - sp_shaped) / sp
    std::vector<double> fifo; // sorted (fifo - fifo_shaped) / fifo
};

GainSamples reshaping_gain_cdf(const DeadlineScenario& sc, std::size_t trials, std::uint64_t seed);

struct Envelope {
    double rate = 0.0;
    double burst = 0.0;
};

// Axis points lo + (hi - lo) * k / count for k = 1..count.
std::vector<double> grid_axis(double lo, double hi, std::size_t count);

struct Heatmap {
    Metric metric = Metric::EdfVsSpShaped;
    std::vector<double> d1; // columns
    std::vector<double> d2; // rows
    std::vector<std::vector<std::optional<double>>> cells; // [row][col]; empty unless d2 < d1
};

Heatmap heatmap(Envelope f1, Envelope f2, std::pair<double, double> d1_range, std::pair<double, double> d2_range,
                std::pair<std::size_t, std::size_t> grid, Metric metric);

// Worker count: hardware concurrency capped by BWMIN_THREADS when set.
std::size_t worker_threads();

// CSV writers; numbers carry 10 significant digits.
void write_stats_csv(std::ostream& os, const std::vector<ScenarioStats>& rows);
void write_heatmap_csv(std::ostream& os, const Heatmap& h);
void write_cdf_csv(std::ostream& os, const GainSamples& g);

} // namespace bwmin
