#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "anisodg/study.hpp"

using namespace anisodg;
using nlohmann::json;

namespace {

json small_solve()
{
    return json::parse(R"({
        "command": "convergence",
        "case": "annulus_omega",
        "mesh": {"family": "annulus-quad", "theta_per_r": 4, "jitter": 0},
        "k": [1, 2],
        "d_par": [1, 100],
        "levels": [2, 4]
    })");
}

std::filesystem::path temp_dir(const std::string& name)
{
    const auto d = std::filesystem::temp_directory_path() / ("anisodg_" + name);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

void write_file(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(ANISODG_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Config, ParsesAndValidates)
{
    const auto c = RunConfig::from_json(small_solve());
    EXPECT_EQ(c.command, "convergence");
    EXPECT_EQ(c.ks, (std::vector<int>{1, 2}));
    EXPECT_EQ(c.levels, (std::vector<int>{2, 4}));
    EXPECT_EQ(c.mesh.family.value(), "annulus-quad");
    EXPECT_EQ(c.precond.schwarz_weight, 0.0);
    EXPECT_EQ(c.precond.inner_max_iterations, 50);
}

TEST(Config, RejectsInvalidInput)
{
    auto bad = [](auto mutate) {
        json j = small_solve();
        mutate(j);
        return j;
    };
    EXPECT_THROW(RunConfig::from_json(bad([](json& j) { j["bogus"] = 1; })), Error);
    EXPECT_THROW(RunConfig::from_json(bad([](json& j) { j["mesh"]["n_z"] = 1; })), Error);
    EXPECT_THROW(RunConfig::from_json(bad([](json& j) { j.erase("case"); })), Error);
    EXPECT_THROW(RunConfig::from_json(bad([](json& j) { j["k"] = 9; })), Error);
    EXPECT_THROW(RunConfig::from_json(bad([](json& j) { j["levels"] = json::array({0}); })), Error);
    EXPECT_THROW(RunConfig::from_json(bad([](json& j) { j["tol"] = 1.5; })), Error);
    EXPECT_THROW(RunConfig::from_json(bad([](json& j) { j["beta"] = 0.0; })), Error);
    EXPECT_THROW(RunConfig::from_json(bad([](json& j) { j["solver"] = "bicgstab"; })), Error);
    EXPECT_THROW(RunConfig::from_json(bad([](json& j) { j["preconditioner"] = "bdg-exact"; })), Error);
    EXPECT_THROW(RunConfig::from_json(bad([](json& j) { j["case"] = "nope"; })), Error);
    EXPECT_THROW(RunConfig::from_json(bad([](json& j) { j["d_par"] = 0.5; })), Error);
    EXPECT_THROW(RunConfig::from_json(bad([](json& j) { j["precond"] = {{"amg", {{"smoother", "sor"}}}}; })),
                 Error);
}

TEST(Config, OverridesUseDottedKeysAndJsonValues)
{
    const json j = apply_overrides(small_solve(), {"mesh.jitter=0.1", "k=[3]", "solver=gmres", "precond.inner_tol=1e-3"});
    EXPECT_EQ(j["mesh"]["jitter"], 0.1);
    EXPECT_EQ(j["k"], json::array({3}));
    EXPECT_EQ(j["solver"], "gmres");
    EXPECT_EQ(j["precond"]["inner_tol"], 1e-3);
    EXPECT_THROW(apply_overrides(small_solve(), {"novalue"}), Error);
}

TEST(Config, LoadReportsMissingAndMalformedFiles)
{
    const auto d = temp_dir("load");
    EXPECT_THROW(load_config(d / "missing.json"), Error);
    write_file(d / "bad.json", "{ not json");
    EXPECT_THROW(load_config(d / "bad.json"), Error);
    write_file(d / "ok.json", small_solve().dump());
    EXPECT_EQ(load_config(d / "ok.json", {"k=2"}).ks, std::vector<int>{2});
    std::filesystem::remove_all(d);
}

TEST(Study, ConvergenceSweepShapeAndOrders)
{
    const auto report = run_command("convergence", RunConfig::from_json(small_solve()));
    ASSERT_EQ(report.rows.size(), 2u * 2u * 2u);
    // Sweep order: k, then d_par, then level.
    EXPECT_EQ(report.rows[0].k, 1);
    EXPECT_EQ(report.rows[0].d_par, 1.0);
    EXPECT_EQ(report.rows[1].level, 4);
    EXPECT_EQ(report.rows[2].d_par, 100.0);
    EXPECT_EQ(report.rows[4].k, 2);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& r = report.rows[i];
        EXPECT_FALSE(r.error.has_value());
        ASSERT_TRUE(r.l2_error.has_value());
        EXPECT_GT(*r.l2_error, 0.0);
        EXPECT_EQ(r.order.has_value(), i % 2 == 1);
    }
}

TEST(Study, DeterministicCsvAndJsonRoundTrip)
{
    json j = small_solve();
    j["command"] = "precond";
    j["mesh"]["family"] = "annulus-tri";
    j["mesh"]["jitter"] = 0.15;
    j["case"] = "test5_annulus";
    j["solver"] = "gmres";
    j["preconditioner"] = "bdg-inexact";
    j["levels"] = json::array({2});
    const auto c = RunConfig::from_json(j);
    const auto a = run_command("precond", c);
    const auto b = run_command("precond", c);
    EXPECT_EQ(report_csv(a), report_csv(b));
    ASSERT_EQ(a.rows.size(), 4u);
    for (const auto& r : a.rows) {
        ASSERT_TRUE(r.iterations.has_value());
        EXPECT_EQ(static_cast<int>(r.residuals.size()), *r.iterations + 1);
        EXPECT_TRUE(r.converged.value_or(false));
    }
    const auto back = report_from_json(json::parse(report_to_json(a).dump()));
    EXPECT_EQ(back, a);
}

TEST(Study, CsvFormatting)
{
    StudyReport rep;
    StudyRow r;
    r.case_name = "x";
    r.d_par = 1e6;
    r.converged = true;
    r.error = "bad, \"thing\"";
    rep.rows.push_back(r);
    const std::string csv = report_csv(rep);
    std::istringstream in(csv);
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    EXPECT_EQ(std::count(header.begin(), header.end(), ',') + 1, static_cast<long>(csv_columns().size()));
    EXPECT_NE(line.find("1.00000e+06"), std::string::npos);
    EXPECT_NE(line.find(",true,"), std::string::npos);
    EXPECT_NE(line.find("\"bad, \"\"thing\"\"\""), std::string::npos);
}

TEST(Study, SingleLevelHasNoOrder)
{
    json j = small_solve();
    j["levels"] = json::array({2});
    j["k"] = 1;
    j["d_par"] = 1;
    const auto report = run_command("convergence", RunConfig::from_json(j));
    ASSERT_EQ(report.rows.size(), 1u);
    EXPECT_FALSE(report.rows[0].order.has_value());
}

TEST(Study, WriteOutputsCreatesThreeFiles)
{
    json j = small_solve();
    j["levels"] = json::array({2});
    j["k"] = 1;
    j["d_par"] = 1;
    const auto report = run_command("convergence", RunConfig::from_json(j));
    const auto d = temp_dir("outputs");
    write_outputs(report, d / "nested");
    for (const char* f : {"report.csv", "report.json", "config.echo.json"}) {
        EXPECT_TRUE(std::filesystem::exists(d / "nested" / f)) << f;
    }
    std::ifstream in(d / "nested" / "report.json");
    EXPECT_EQ(report_from_json(json::parse(in)), report);
    std::filesystem::remove_all(d);
}

TEST(Cli, ExitCodes)
{
    const auto d = temp_dir("cli");
    json j = small_solve();
    j["levels"] = json::array({2});
    j["k"] = 1;
    j["d_par"] = 1;
    write_file(d / "ok.json", j.dump());
    write_file(d / "bad.json", "{\"case\": \"annulus_omega\", \"k\": 12}");
    const std::string out = (d / "out").string();
    EXPECT_EQ(run_cli("convergence --config " + (d / "ok.json").string() + " --out " + out), 0);
    EXPECT_TRUE(std::filesystem::exists(d / "out" / "report.csv"));
    EXPECT_EQ(run_cli("convergence --config " + (d / "bad.json").string() + " --out " + out), 2);
    EXPECT_NE(run_cli("convergence --config " + (d / "missing.json").string()), 0);
    EXPECT_NE(run_cli("frobnicate"), 0);
    write_file(d / "blocker", "");
    EXPECT_NE(run_cli("convergence --config " + (d / "ok.json").string() + " --out " + (d / "blocker" / "x").string()), 0);
    EXPECT_EQ(run_cli("--version"), 0);
    std::filesystem::remove_all(d);
}
