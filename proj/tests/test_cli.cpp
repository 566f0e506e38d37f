#include "cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("bwmin_cli_test_" + name);
    std::ofstream(path) << text;
    return path;
}

struct Run {
    int code;
    std::string out;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = bwmin::cli::run(args, out, err);
    return {code, out.str()};
}

const std::string kTwo = R"({"flows":[{"r":1,"b":5,"d":1.4},{"r":4,"b":5,"d":1.25}]})";

} // namespace

TEST(Cli, SolveSchedulers) {
    const auto in = write_temp("two.json", kTwo).string();
    auto r = run({"solve", "--input", in, "--scheduler", "sp"});
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NEAR(json::parse(r.out)["r_min"].get<double>(), 78.0 / 7.0, 1e-12);

    r = run({"solve", "--input", in, "--scheduler", "sp-shaped"});
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["r_min"].get<double>(), 53.0 / 7.0, 1e-9);
    EXPECT_EQ(j["b_prime"], json::array({5.0, 0.0}));
    EXPECT_EQ(j["delays"].size(), 2u);

    const auto big = write_temp("big.json", R"({"flows":[{"r":1,"b":45,"d":10},{"r":1,"b":5,"d":1}]})").string();
    r = run({"solve", "--input", big, "--scheduler", "edf"});
    EXPECT_NEAR(json::parse(r.out)["r_min"].get<double>(), 5.9, 1e-12);
}

TEST(Cli, SolveFullPrecision) {
    const auto in = write_temp("two.json", kTwo).string();
    const auto r = run({"solve", "--input", in, "--scheduler", "sp"});
    EXPECT_EQ(json::parse(r.out)["r_min"].get<double>(), 78.0 / 7.0);
}

TEST(Cli, SolvePacket) {
    const auto in =
        write_temp("pk.json", R"({"flows":[{"r":1,"b":5,"d":1.4,"l":0.5},{"r":4,"b":5,"d":1.25,"l":0.5}]})").string();
    auto r = run({"solve", "--input", in, "--scheduler", "sp-shaped", "--model", "packet"});
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    EXPECT_LE(j["delays"][0].get<double>(), 1.4 + 1e-6);
    EXPECT_LE(j["delays"][1].get<double>(), 1.25 + 1e-6);
    r = run({"solve", "--input", in, "--scheduler", "fifo", "--model", "packet"});
    EXPECT_EQ(r.code, 2);
    const auto three =
        write_temp("three.json", R"({"flows":[{"r":1,"b":5,"d":1.4},{"r":4,"b":5,"d":1.25},{"r":1,"b":1,"d":1}]})");
    r = run({"solve", "--input", three.string(), "--scheduler", "sp", "--model", "packet"});
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, InputErrorsAreStructured) {
    const auto bad = write_temp("eq.json", R"({"flows":[{"r":1,"b":1,"d":1},{"r":1,"b":1,"d":1}]})").string();
    auto r = run({"solve", "--input", bad, "--scheduler", "edf"});
    EXPECT_EQ(r.code, 2);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["error"], "EqualDeadlines");
    EXPECT_TRUE(j.contains("detail"));

    r = run({"solve", "--input", "/nonexistent/x.json", "--scheduler", "edf"});
    EXPECT_EQ(r.code, 2);
    r = run({"solve", "--scheduler", "edf"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.out)["error"], "InvalidInput");
    r = run({"solve", "--input", bad, "--scheduler", "gps"});
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, Compare) {
    const auto in = write_temp("two.json", kTwo).string();
    const auto r = run({"compare", "--input", in});
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["edf"].get<double>(), 53.0 / 7.0, 1e-12);
    EXPECT_NEAR(j["sp"].get<double>(), 78.0 / 7.0, 1e-12);
    EXPECT_NEAR(j["sp-shaped"].get<double>(), 53.0 / 7.0, 1e-9);
    EXPECT_NEAR(j["fifo"].get<double>(), 8.0, 1e-12);
    EXPECT_NEAR(j["fifo-shaped"].get<double>(), 7.8125, 1e-8);
    EXPECT_TRUE(j["relative"].contains("fifo_reshaping_gain"));

    const auto one = write_temp("one.json", R"({"flows":[{"r":2,"b":6,"d":1}]})").string();
    const auto k = json::parse(run({"compare", "--input", one}).out);
    for (const char* key : {"edf", "sp", "sp-shaped", "fifo", "fifo-shaped"}) EXPECT_NEAR(k[key].get<double>(), 6.0, 1e-8);
}

TEST(Cli, Delay) {
    const auto in = write_temp("two.json", kTwo).string();
    auto r = run({"delay", "--input", in, "--scheduler", "fifo-shaped", "--r", "8", "--b-prime", "0,5"});
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_DOUBLE_EQ(json::parse(r.out)["delays"][0].get<double>(), 5.625);
    r = run({"delay", "--input", in, "--scheduler", "sp", "--r", "4"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.out)["error"], "InsufficientBandwidth");
}

TEST(Cli, VerifyRoundTrip) {
    const auto in = write_temp("two.json", kTwo).string();
    for (const char* s : {"edf", "sp", "sp-shaped", "fifo", "fifo-shaped"}) {
        const auto solved = json::parse(run({"solve", "--input", in, "--scheduler", s}).out);
        std::ostringstream rate;
        rate.precision(17);
        rate << solved["r_min"].get<double>();
        std::vector<std::string> args{"verify", "--input", in, "--scheduler", s, "--r", rate.str(), "--offsets", "3"};
        if (!solved["b_prime"].is_null()) {
            std::ostringstream bp;
            bp.precision(17);
            bp << solved["b_prime"][0].get<double>() << ',' << solved["b_prime"][1].get<double>();
            args.push_back("--b-prime");
            args.push_back(bp.str());
        }
        const auto r = run(args);
        EXPECT_EQ(r.code, 0) << s << r.out;
        const auto j = json::parse(r.out);
        EXPECT_TRUE(j["sound"].get<bool>());
        for (const auto& f : j["flows"]) EXPECT_GE(f["margin"].get<double>(), -2 * j["dt"].get<double>());
    }
}

TEST(Cli, VerifyErrorsAndFailure) {
    const auto in = write_temp("two.json", kTwo).string();
    auto r = run({"verify", "--input", in, "--scheduler", "fifo", "--r", "4"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.out)["error"], "InsufficientBandwidth");

    const auto one = write_temp("one.json", R"({"flows":[{"r":2,"b":6,"d":4}]})").string();
    r = run({"verify", "--input", one, "--scheduler", "fifo", "--r", "3"});
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["flows"][0]["simulated_max"].get<double>(), 2.0, 2 * j["dt"].get<double>());
}

TEST(Cli, EvaluateHeatmapCdf) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto stats = (dir / "bwmin_cli_stats.csv").string();
    auto r = run({"evaluate", "--scenario", "d11", "--trials", "3", "--seed", "4", "--out", stats});
    ASSERT_EQ(r.code, 0) << r.out;
    std::ifstream in(stats);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "metric,scenario,mean,std,ci_lo,ci_hi,trials");

    r = run({"heatmap", "--metric", "fifo_reshaping_gain", "--grid", "5"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, 6), "d2\\d1,");
    r = run({"heatmap", "--metric", "nope"});
    EXPECT_EQ(r.code, 2);

    r = run({"cdf", "--scenario", "d21", "--trials", "4"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, 17), "p,sp_gain,fifo_ga");

    const auto custom = write_temp("sc.json", R"({"name":"c","deadlines":[1,0.5,0.2]})").string();
    r = run({"evaluate", "--scenario-file", custom, "--trials", "2"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find(",c,"), std::string::npos);
}

TEST(Cli, EvaluateDefaultsToAllScenarios) {
    const auto r = run({"evaluate", "--trials", "2"});
    ASSERT_EQ(r.code, 0);
    for (const char* name : {"d11", "d21", "d22", "d23", "d31", "d32", "d33", "d34"})
        EXPECT_NE(r.out.find(std::string(",") + name + ","), std::string::npos) << name;
}

TEST(Cli, Help) {
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({}).code, 2);
}
