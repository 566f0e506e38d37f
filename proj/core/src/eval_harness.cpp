#include "bwmin/eval_harness.hpp"

#include "bwmin/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <ostream>
#include <random>
#include <thread>

namespace bwmin {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// 53 high bits to [0, 1); std::uniform_real_distribution is not portable across standard libraries.
double unit(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t workers = std::min(worker_threads(), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace

const std::vector<DeadlineScenario>& standard_scenarios() {
    static const std::vector<DeadlineScenario> all = {
        {"d11", {1, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1}},
        {"d21", {1, 0.95, 0.9, 0.85, 0.8, 0.3, 0.25, 0.2, 0.15, 0.1}},
        {"d22", {1, 0.96, 0.93, 0.9, 0.86, 0.83, 0.8, 0.2, 0.15, 0.1}},
        {"d23", {1, 0.95, 0.9, 0.3, 0.26, 0.23, 0.2, 0.16, 0.13, 0.1}},
        {"d31", {1, 0.95, 0.9, 0.6, 0.55, 0.5, 0.45, 0.2, 0.15, 0.1}},
        {"d32", {1, 0.68, 0.65, 0.62, 0.6, 0.57, 0.55, 0.53, 0.5, 0.1}},
        {"d33", {1, 0.6, 0.28, 0.25, 0.23, 0.2, 0.17, 0.15, 0.12, 0.1}},
        {"d34", {1, 0.97, 0.95, 0.93, 0.9, 0.88, 0.85, 0.82, 0.6, 0.1}},
    };
    return all;
}

const DeadlineScenario& scenario_by_name(std::string_view name) {
    for (const auto& s : standard_scenarios())
        if (s.name == name) return s;
    throw Error(ErrorCode::InvalidInput, "unknown scenario '" + std::string(name) + "'");
}

DeadlineScenario scenario_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("deadlines") || !doc["deadlines"].is_array())
        throw Error(ErrorCode::InvalidInput, "expected an object with a \"deadlines\" array");
    DeadlineScenario sc;
    sc.name = doc.value("name", "custom");
    for (const auto& v : doc["deadlines"]) {
        if (!v.is_number()) throw Error(ErrorCode::InvalidInput, "deadlines must be numbers");
        sc.deadlines.push_back(v.get<double>());
    }
    if (sc.deadlines.empty()) throw Error(ErrorCode::InvalidInput, "scenario has no deadlines");
    return sc;
}

std::string_view metric_name(Metric m) {
    switch (m) {
    case Metric::EdfVsSpShaped: return "edf_vs_sp_shaped";
    case Metric::EdfVsFifoShaped: return "edf_vs_fifo_shaped";
    case Metric::SpShapedVsFifoShaped: return "sp_shaped_vs_fifo_shaped";
    case Metric::SpReshapingGain: return "sp_reshaping_gain";
    case Metric::FifoReshapingGain: return "fifo_reshaping_gain";
    }
    return "unknown";
}

Metric parse_metric(std::string_view name) {
    for (Metric m : kAllMetrics)
        if (metric_name(m) == name) return m;
    throw Error(ErrorCode::InvalidInput, "unknown metric '" + std::string(name) + "'");
}

double metric_value(Metric m, const Minima& x) {
    switch (m) {
    case Metric::EdfVsSpShaped: return (x.sp_shaped - x.edf) / x.sp_shaped;
    case Metric::EdfVsFifoShaped: return (x.fifo_shaped - x.edf) / x.fifo_shaped;
    case Metric::SpShapedVsFifoShaped: return (x.fifo_shaped - x.sp_shaped) / x.fifo_shaped;
    case Metric::SpReshapingGain: return (x.sp - x.sp_shaped) / x.sp;
    case Metric::FifoReshapingGain: return (x.fifo - x.fifo_shaped) / x.fifo;
    }
    return 0.0;
}

ScenarioStats summarize(std::string metric, std::string scenario, const std::vector<double>& samples) {
    ScenarioStats s;
    s.metric = std::move(metric);
    s.scenario = std::move(scenario);
    s.trials = samples.size();
    if (samples.empty()) return s;
    double sum = 0.0;
    for (double v : samples) sum += v;
    s.mean = sum / static_cast<double>(samples.size());
    if (samples.size() > 1) {
        double sq = 0.0;
        for (double v : samples) sq += (v - s.mean) * (v - s.mean);
        s.std_dev = std::sqrt(sq / static_cast<double>(samples.size() - 1));
    }
    const double half = 1.96 * s.std_dev / std::sqrt(static_cast<double>(samples.size()));
    s.ci_low = s.mean - half;
    s.ci_high = s.mean + half;
    return s;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t t) {
    return splitmix64(master + t * 0x9E3779B97F4A7C15ULL);
}

FlowSet sample_flows(const DeadlineScenario& sc, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    const std::size_t n = sc.deadlines.size();
    std::vector<double> b(n);
    double total = 0.0;
    for (auto& x : b) {
        x = 1.0 + 9.0 * unit(g);
        total += x;
    }
    std::vector<FlowProfile> flows(n);
    for (std::size_t i = 0; i < n; ++i) {
        double r = total * unit(g);
        // rates must be positive; an exact zero draw has probability 2^-53
        if (r <= 0.0) r = total * 0x1.0p-53;
        flows[i] = {r, b[i], sc.deadlines[i], 0.0};
    }
    return FlowSet(std::move(flows));
}

std::vector<Minima> sample_minima(const DeadlineScenario& sc, std::size_t trials, std::uint64_t seed) {
    std::vector<Minima> out(trials);
    parallel_for(trials, [&](std::size_t t) { out[t] = all_minima(sample_flows(sc, trial_seed(seed, t))); });
    return out;
}

std::vector<ScenarioStats> run_scenario(const DeadlineScenario& sc, std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw Error(ErrorCode::InvalidInput, "trials must be at least 1");
    const auto minima = sample_minima(sc, trials, seed);
    std::vector<ScenarioStats> rows;
    for (Metric m : kAllMetrics) {
        std::vector<double> v;
        v.reserve(trials);
        for (const auto& x : minima) v.push_back(metric_value(m, x));
        rows.push_back(summarize(std::string(metric_name(m)), sc.name, v));
    }
    return rows;
}

GainSamples reshaping_gain_cdf(const DeadlineScenario& sc, std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw Error(ErrorCode::InvalidInput, "trials must be at least 1");
    GainSamples g;
    for (const auto& x : sample_minima(sc, trials, seed)) {
        g.sp.push_back(metric_value(Metric::SpReshapingGain, x));
        g.fifo.push_back(metric_value(Metric::FifoReshapingGain, x));
    }
    std::sort(g.sp.begin(), g.sp.end());
    std::sort(g.fifo.begin(), g.fifo.end());
    return g;
}

std::vector<double> grid_axis(double lo, double hi, std::size_t count) {
    if (!(hi > lo) || lo < 0.0 || count == 0) throw Error(ErrorCode::InvalidInput, "invalid grid axis");
    std::vector<double> axis(count);
    for (std::size_t k = 1; k <= count; ++k)
        axis[k - 1] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count);
    return axis;
}

Heatmap heatmap(Envelope f1, Envelope f2, std::pair<double, double> d1_range, std::pair<double, double> d2_range,
                std::pair<std::size_t, std::size_t> grid, Metric metric) {
    Heatmap h;
    h.metric = metric;
    h.d1 = grid_axis(d1_range.first, d1_range.second, grid.first);
    h.d2 = grid_axis(d2_range.first, d2_range.second, grid.second);
    h.cells.assign(h.d2.size(), std::vector<std::optional<double>>(h.d1.size()));
    for (std::size_t row = 0; row < h.d2.size(); ++row) {
        for (std::size_t col = 0; col < h.d1.size(); ++col) {
            if (!(h.d2[row] < h.d1[col])) continue;
            const auto m = two_flow_closed_forms({f1.rate, f1.burst, h.d1[col], 0.0}, {f2.rate, f2.burst, h.d2[row], 0.0});
            h.cells[row][col] = metric_value(metric, m);
        }
    }
    return h;
}

std::size_t worker_threads() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("BWMIN_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
    }
    return n;
}

void write_stats_csv(std::ostream& os, const std::vector<ScenarioStats>& rows) {
    const auto old = os.precision(10);
    os << "metric,scenario,mean,std,ci_lo,ci_hi,trials\n";
    for (const auto& r : rows)
        os << r.metric << ',' << r.scenario << ',' << r.mean << ',' << r.std_dev << ',' << r.ci_low << ','
           << r.ci_high << ',' << r.trials << '\n';
    os.precision(old);
}

void write_heatmap_csv(std::ostream& os, const Heatmap& h) {
    const auto old = os.precision(10);
    os << "d2\\d1";
    for (double d : h.d1) os << ',' << d;
    os << '\n';
    for (std::size_t row = 0; row < h.d2.size(); ++row) {
        os << h.d2[row];
        for (const auto& c : h.cells[row]) {
            os << ',';
            if (c) os << *c;
        }
        os << '\n';
    }
    os.precision(old);
}

void write_cdf_csv(std::ostream& os, const GainSamples& g) {
    const auto old = os.precision(10);
    os << "p,sp_gain,fifo_gain\n";
    const std::size_t n = g.sp.size();
    for (std::size_t k = 0; k < n; ++k)
        os << static_cast<double>(k + 1) / static_cast<double>(n) << ',' << g.sp[k] << ',' << g.fifo[k] << '\n';
    os.precision(old);
}

} // namespace bwmin
