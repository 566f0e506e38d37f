#include "cli.hpp"

#include "bwmin/delay_bounds.hpp"
#include "bwmin/error.hpp"
#include "bwmin/eval_harness.hpp"
#include "bwmin/oracle.hpp"
#include "bwmin/packet_two_flow.hpp"
#include "bwmin/solvers.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace bwmin::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 1;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FlowSet load_flows(const std::string& path) { return flow_set_from_json(read_file(path)); }

// Writes to --out when given, stdout otherwise.
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
    if (path.empty() || path == "-") {
        write(out);
        return;
    }
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::InvalidInput, "cannot write '" + path + "'");
    write(f);
}

json deadlines_of(const FlowSet& fs) {
    json d = json::array();
    for (const auto& f : fs.flows()) d.push_back(f.deadline);
    return d;
}

std::optional<ReshapingPlan> plan_arg(const FlowSet& fs, const std::vector<double>& b_prime) {
    if (b_prime.empty()) return std::nullopt;
    ReshapingPlan p(b_prime);
    p.validate(fs);
    return p;
}

// Plan used when the caller does not give one: the optimal construction at R.
std::optional<ReshapingPlan> default_plan(const FlowSet& fs, SchedulerKind kind, double R) {
    if (kind == SchedulerKind::StaticPriorityShaped) return sp_shaped_plan(fs, R);
    if (kind == SchedulerKind::FifoShaped) return fifo_shaped_plan(fs, R);
    return std::nullopt;
}

json solve_fluid(const FlowSet& fs, SchedulerKind kind) {
    const SolveResult res = solve(fs, kind);
    json j;
    j["scheduler"] = scheduler_name(kind);
    j["model"] = "fluid";
    j["r_min"] = res.r_min;
    j["b_prime"] = res.plan ? json(res.plan->b_prime()) : json(nullptr);
    j["delays"] = res.delays;
    j["deadlines"] = deadlines_of(fs);
    return j;
}

json solve_packet(const FlowSet& fs, SchedulerKind kind) {
    if (fs.size() != 2) throw Error(ErrorCode::InvalidInput, "the packet model needs exactly two flows");
    const FlowProfile& lo = fs[0];
    const FlowProfile& hi = fs[1];
    PacketShaper shaper = PacketShaper::identity(hi);
    json j;
    j["scheduler"] = scheduler_name(kind);
    j["model"] = "packet";
    if (kind == SchedulerKind::StaticPriority) {
        j["r_min"] = packet_sp_min_bw_unshaped(lo, hi);
        j["b_prime"] = nullptr;
    } else if (kind == SchedulerKind::StaticPriorityShaped) {
        const PacketSolution sol = packet_sp_min_bw_shaped(lo, hi);
        shaper = sol.shaper;
        j["r_min"] = sol.r_min;
        j["b_prime"] = {lo.burst, shaper.burst};
        j["shaper_rate"] = shaper.rate;
        j["region"] = sol.region;
    } else {
        throw Error(ErrorCode::InvalidInput, "the packet model supports sp and sp-shaped only");
    }
    const double R = j["r_min"].get<double>();
    j["delays"] = {packet_low_priority_delay(lo, hi, shaper, R),
                   packet_high_priority_delay(hi, shaper, R, lo.max_packet)};
    j["deadlines"] = deadlines_of(fs);
    return j;
}

json compare_all(const FlowSet& fs) {
    const Minima m = all_minima(fs);
    json j;
    j["edf"] = m.edf;
    j["sp"] = m.sp;
    j["sp-shaped"] = m.sp_shaped;
    j["fifo"] = m.fifo;
    j["fifo-shaped"] = m.fifo_shaped;
    json rel;
    for (Metric k : kAllMetrics) rel[std::string(metric_name(k))] = metric_value(k, m);
    j["relative"] = rel;
    return j;
}

void print_error(std::ostream& out, std::string_view name, const std::string& detail) {
    out << json{{"error", name}, {"detail", detail}}.dump() << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minimum link bandwidth and reshaping for deadline-constrained token-bucket flows", "bwmin"};
    app.require_subcommand(1, 1);

    std::string input, scheduler_arg, model = "fluid", out_path, scenario_arg, scenario_file, metric_arg, cdf_scenario;
    double rate = 0.0, dt = 0.0;
    std::size_t offsets = 1, trials = 1000, grid = 100;
    std::uint64_t seed = kDefaultSeed;
    std::vector<double> b_prime;
    double r1 = 4, b1 = 10, r2 = 10, b2 = 18, d_min = 0.0, d_max = 4.0;
    const std::vector<std::string> schedulers = {"edf", "sp", "sp-shaped", "fifo", "fifo-shaped"};

    auto* solve_cmd = app.add_subcommand("solve", "Minimum bandwidth for one scheduler");
    solve_cmd->add_option("--input", input, "Flow set JSON")->required();
    solve_cmd->add_option("--scheduler", scheduler_arg)->required()->check(CLI::IsMember(schedulers));
    solve_cmd->add_option("--model", model)->check(CLI::IsMember({"fluid", "packet"}));

    auto* delay_cmd = app.add_subcommand("delay", "Worst-case delay bounds at a given bandwidth");
    delay_cmd->add_option("--input", input)->required();
    delay_cmd->add_option("--scheduler", scheduler_arg)->required()->check(CLI::IsMember(schedulers));
    delay_cmd->add_option("--r", rate, "Link bandwidth")->required();
    delay_cmd->add_option("--b-prime", b_prime, "Reshaped bursts in decreasing-deadline order")->delimiter(',');

    auto* compare_cmd = app.add_subcommand("compare", "All five minima and their relative differences");
    compare_cmd->add_option("--input", input)->required();

    auto* verify_cmd = app.add_subcommand("verify", "Check analytic bounds against the fluid simulation");
    verify_cmd->add_option("--input", input)->required();
    verify_cmd->add_option("--scheduler", scheduler_arg)->required()->check(CLI::IsMember(schedulers));
    verify_cmd->add_option("--r", rate, "Link bandwidth (default: solver minimum)");
    verify_cmd->add_option("--dt", dt, "Time step (default: min deadline / 1000)");
    verify_cmd->add_option("--offsets", offsets, "Offset grid points per flow (1: synchronized bursts)");
    verify_cmd->add_option("--b-prime", b_prime)->delimiter(',');

    auto* eval_cmd = app.add_subcommand("evaluate", "Monte Carlo relative savings per deadline scenario");
    eval_cmd->add_option("--scenario", scenario_arg, "Scenario name or 'all'")->default_val("all");
    eval_cmd->add_option("--scenario-file", scenario_file, "Custom scenario JSON");
    eval_cmd->add_option("--trials", trials)->check(CLI::PositiveNumber);
    eval_cmd->add_option("--seed", seed);
    eval_cmd->add_option("--out", out_path);

    auto* heat_cmd = app.add_subcommand("heatmap", "Two-flow relative difference over a deadline grid");
    heat_cmd->add_option("--metric", metric_arg)->default_val("edf_vs_sp_shaped");
    heat_cmd->add_option("--r1", r1);
    heat_cmd->add_option("--b1", b1);
    heat_cmd->add_option("--r2", r2);
    heat_cmd->add_option("--b2", b2);
    heat_cmd->add_option("--d-min", d_min);
    heat_cmd->add_option("--d-max", d_max);
    heat_cmd->add_option("--grid", grid)->check(CLI::PositiveNumber);
    heat_cmd->add_option("--out", out_path);

    auto* cdf_cmd = app.add_subcommand("cdf", "Sorted reshaping gains for static priority and FIFO");
    cdf_cmd->add_option("--scenario", cdf_scenario, "Scenario name")->default_val("d21");
    cdf_cmd->add_option("--scenario-file", scenario_file);
    cdf_cmd->add_option("--trials", trials)->check(CLI::PositiveNumber);
    cdf_cmd->add_option("--seed", seed);
    cdf_cmd->add_option("--out", out_path);

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        print_error(out, "InvalidInput", e.what());
        return kInputError;
    }

    try {
        if (solve_cmd->parsed()) {
            const FlowSet fs = load_flows(input);
            const SchedulerKind kind = parse_scheduler(scheduler_arg);
            const json j = model == "packet" ? solve_packet(fs, kind) : solve_fluid(fs, kind);
            out << j.dump(2) << '\n';
            return kOk;
        }
        if (delay_cmd->parsed()) {
            const FlowSet fs = load_flows(input);
            const SchedulerKind kind = parse_scheduler(scheduler_arg);
            auto plan = plan_arg(fs, b_prime);
            if (!plan) plan = default_plan(fs, kind, rate);
            const auto d = delay_bounds(fs, kind, rate, plan ? &*plan : nullptr);
            bool meets = true;
            for (std::size_t i = 0; i < fs.size(); ++i) meets = meets && d[i] <= fs.deadline(i) + 1e-9;
            json j;
            j["scheduler"] = scheduler_name(kind);
            j["r"] = rate;
            j["b_prime"] = plan ? json(plan->b_prime()) : json(nullptr);
            j["delays"] = d;
            j["deadlines"] = deadlines_of(fs);
            j["meets_deadlines"] = meets;
            out << j.dump(2) << '\n';
            return kOk;
        }
        if (compare_cmd->parsed()) {
            out << compare_all(load_flows(input)).dump(2) << '\n';
            return kOk;
        }
        if (verify_cmd->parsed()) {
            const FlowSet fs = load_flows(input);
            const SchedulerKind kind = parse_scheduler(scheduler_arg);
            std::optional<ReshapingPlan> plan = plan_arg(fs, b_prime);
            double R = rate;
            if (verify_cmd->count("--r") == 0) {
                const SolveResult res = solve(fs, kind);
                R = res.r_min;
                if (!plan) plan = res.plan;
            }
            if (!plan) plan = default_plan(fs, kind, R);
            const auto analytic = delay_bounds(fs, kind, R, plan ? &*plan : nullptr);
            SimConfig cfg = default_sim_config(fs, R, kind, plan);
            if (dt > 0.0) cfg.dt = dt;
            const auto sim = adversarial_search(fs, R, cfg, offsets);
            bool sound = true;
            json flows = json::array();
            for (std::size_t i = 0; i < fs.size(); ++i) {
                const double margin = analytic[i] - sim[i];
                sound = sound && margin >= -2.0 * cfg.dt;
                flows.push_back(
                    {{"flow", i + 1}, {"analytic", analytic[i]}, {"simulated_max", sim[i]}, {"margin", margin}});
            }
            json j;
            j["scheduler"] = scheduler_name(kind);
            j["r"] = R;
            j["dt"] = cfg.dt;
            j["b_prime"] = plan ? json(plan->b_prime()) : json(nullptr);
            j["flows"] = flows;
            j["sound"] = sound;
            out << j.dump(2) << '\n';
            return sound ? kOk : kVerifyFailed;
        }
        if (eval_cmd->parsed()) {
            std::vector<DeadlineScenario> scenarios;
            if (!scenario_file.empty())
                scenarios.push_back(scenario_from_json(read_file(scenario_file)));
            else if (scenario_arg == "all")
                scenarios = standard_scenarios();
            else
                scenarios.push_back(scenario_by_name(scenario_arg));
            std::vector<ScenarioStats> rows;
            for (const auto& sc : scenarios) {
                auto r = run_scenario(sc, trials, seed);
                rows.insert(rows.end(), r.begin(), r.end());
            }
            // group by metric, like the published tables
            std::stable_sort(rows.begin(), rows.end(), [](const ScenarioStats& a, const ScenarioStats& b) {
                return parse_metric(a.metric) < parse_metric(b.metric);
            });
            emit(out_path, out, [&](std::ostream& os) { write_stats_csv(os, rows); });
            return kOk;
        }
        if (heat_cmd->parsed()) {
            const Metric m = parse_metric(metric_arg);
            const Heatmap h = heatmap({r1, b1}, {r2, b2}, {d_min, d_max}, {d_min, d_max}, {grid, grid}, m);
            emit(out_path, out, [&](std::ostream& os) { write_heatmap_csv(os, h); });
            return kOk;
        }
        if (cdf_cmd->parsed()) {
            const DeadlineScenario sc =
                scenario_file.empty() ? scenario_by_name(cdf_scenario) : scenario_from_json(read_file(scenario_file));
            const GainSamples g = reshaping_gain_cdf(sc, trials, seed);
            emit(out_path, out, [&](std::ostream& os) { write_cdf_csv(os, g); });
            return kOk;
        }
    } catch (const Error& e) {
        print_error(out, error_name(e.code()), e.what());
        return kInputError;
    } catch (const std::exception& e) {
        print_error(out, "InvalidInput", e.what());
        return kInputError;
    }
    err << "no subcommand\n";
    return kInputError;
}

} // namespace bwmin::cli
