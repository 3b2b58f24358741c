#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "vll/error.hpp"
#include "vll/harness.hpp"

using namespace vll;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("vll_harness_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string config_error(const std::string& toml) {
    try {
        parse_config(toml);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_configuration);
        return e.what();
    }
    ADD_FAILURE() << "accepted: " << toml;
    return {};
}

RunConfig equilibrium() {
    RunConfig c;
    c.cells = 256;
    c.datum.density_amplitude = 0.0;
    c.datum.velocity_amplitude = 0.0;
    c.horizon = 0.02;
    c.cadence = 0.01;
    return c;
}

RunConfig small_smooth() {
    RunConfig c;
    c.cells = 128;
    c.epsilon = 0.05;
    c.horizon = 0.05;
    c.cadence = 0.01;
    return c;
}

int cli(const std::string& args) {
    const int status = std::system((std::string(VLL_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Config, DefaultsAndParsing) {
    const RunConfig c = parse_config(R"(
[grid]
cells = 256
[physics]
epsilon = 0.02
drag = "fixed"
r1 = 0.3
[sweep]
epsilons = [0.1, 0.05]
)");
    EXPECT_EQ(c.cells, 256u);
    EXPECT_EQ(c.epsilon, 0.02);
    EXPECT_EQ(c.drag, DragMode::fixed);
    EXPECT_EQ(c.drag_for(0.5), 0.3);
    EXPECT_EQ(c.sweep_epsilons.size(), 2u);
    EXPECT_EQ(c.eos.gamma, 1.4);
    EXPECT_EQ(parse_config("").drag_for(0.25), 0.25);
}

TEST(Config, ShippedFilesParse) {
    const fs::path root = fs::path(__FILE__).parent_path().parent_path().parent_path() / "configs";
    EXPECT_NO_THROW(load_config(root / "default.toml"));
    EXPECT_NO_THROW(load_config(root / "equilibrium.toml"));
}

TEST(Config, FieldLevelErrors) {
    EXPECT_NE(config_error("[grid]\ncells = 2\n").find("grid.cells"), std::string::npos);
    EXPECT_NE(config_error("[eos]\ngamma = 0.9\n").find("eos.gamma"), std::string::npos);
    EXPECT_NE(config_error("[physics]\ndrag = \"sometimes\"\n").find("physics.drag"), std::string::npos);
    EXPECT_NE(config_error("[physics]\nepsilon = \"big\"\n").find("physics.epsilon"), std::string::npos);
    EXPECT_NE(config_error("[sweep]\nepsilons = [0.1, 0.2]\n").find("sweep.epsilons"), std::string::npos);
    EXPECT_NE(config_error("[time]\ncfl = 1.5\n").find("time.cfl"), std::string::npos);
    EXPECT_NE(config_error("[datum]\ndensity_amplitude = 1.5\n").find("datum"), std::string::npos);
    EXPECT_NE(config_error("[physics]\nepsilon = 0.0\n").find("layer.enabled"), std::string::npos);
    EXPECT_NE(config_error("[grid\n").find("TOML"), std::string::npos);
}

TEST(RunSingle, EquilibriumReportsAreZero) {
    const fs::path out = scratch("equilibrium");
    const RunResult r = run_single(equilibrium(), out);
    EXPECT_EQ(r.exit_code, 0);
    for (double e : r.report.energy.total) EXPECT_NEAR(e, 0.0, 1e-20);
    for (double v : r.report.remainders.R) EXPECT_NEAR(v, 0.0, 1e-20);
    EXPECT_NEAR(r.report.metric.sup, 0.0, 1e-14);
    for (const char* f : {"budgets.csv", "report.json", "report.csv", "run.json", "snapshots/snap_0.csv"})
        EXPECT_TRUE(fs::exists(out / f)) << f;
}

TEST(RunSingle, SmoothRunProducesNonnegativeEnergy) {
    const RunResult r = run_single(small_smooth());
    ASSERT_GE(r.report.energy.total.size(), 2u);
    for (double e : r.report.energy.total) EXPECT_GE(e, 0.0);
    EXPECT_GT(r.report.remainders.eta, 0.0);
    EXPECT_EQ(r.exit_code, 0);
}

TEST(RunSingle, DeterministicArtifacts) {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    run_single(small_smooth(), a);
    run_single(small_smooth(), b);
    for (const char* f : {"budgets.csv", "report.json", "report.csv", "run.json", "snapshots/snap_3.csv"})
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Sweep, SingleEntryHasNoSlope) {
    RunConfig c = small_smooth();
    c.sweep_epsilons = {0.125};
    const SweepResult s = sweep(c);
    ASSERT_EQ(s.rows.size(), 1u);
    EXPECT_FALSE(s.metric_slope);
}

TEST(Sweep, EquilibriumMetricIsZero) {
    RunConfig c = equilibrium();
    c.sweep_epsilons = {0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
    const fs::path out = scratch("sweep_eq");
    const SweepResult s = sweep(c, 2, out);
    ASSERT_EQ(s.rows.size(), 5u);
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        EXPECT_NEAR(s.rows[i].metric, 0.0, 1e-14);
        if (i > 0) EXPECT_LT(s.rows[i].epsilon, s.rows[i - 1].epsilon);
    }
    const std::string csv = slurp(out / "sweep.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "epsilon,r1,metric,E0,ET,kato_monitor,lgamma_monitor,gronwall_C");
    EXPECT_TRUE(fs::exists(out / "sweep_summary.json"));
}

TEST(Sweep, RowsReproduceThroughRunSingle) {
    RunConfig c = small_smooth();
    c.sweep_epsilons = {0.125, 0.0625};
    const SweepResult s = sweep(c, 2);
    for (const auto& row : s.rows) {
        const RunConfig entry = sweep_entry_config(c, row.epsilon);
        EXPECT_EQ(entry.cells, row.cells);
        const RunResult r = run_single(entry);
        EXPECT_EQ(r.report.metric.sup, row.metric);
        EXPECT_EQ(r.report.E0, row.E0);
        EXPECT_EQ(r.report.gronwall.C, row.gronwall_C);
    }
}

TEST(Sweep, CellRuleAndThreadCap) {
    RunConfig c;
    c.cells = 64;
    EXPECT_EQ(sweep_cells(c, 0.125), 128u);
    EXPECT_EQ(sweep_cells(c, 0.5), 64u);
    setenv("VLL_THREADS", "2", 1);
    EXPECT_EQ(sweep_threads(8, 5), 2u);
    EXPECT_EQ(sweep_threads(1, 5), 1u);
    unsetenv("VLL_THREADS");
    EXPECT_EQ(sweep_threads(8, 3), 3u);
}

TEST(CheckSuite, DefaultConfigPasses) {
    const CheckReport r = check_suite(RunConfig{});
    for (const auto& item : r.items) EXPECT_TRUE(item.passed) << item.name << ": " << item.detail;
    EXPECT_TRUE(r.all_passed());
}

TEST(CheckSuite, TamperedCutoffIsReported) {
    CutoffFunction bad = make_cutoff();
    bad.xi = [](double r) { return r < 1.0 ? 0.5 : 0.0; };
    const CheckReport r = check_suite(RunConfig{}, bad);
    EXPECT_FALSE(r.all_passed());
    bool cutoff_failed = false;
    for (const auto& item : r.items)
        if (item.name == "cutoff invariants") cutoff_failed = !item.passed;
    EXPECT_TRUE(cutoff_failed);
}

TEST(Cli, ExitCodes) {
    const fs::path dir = scratch("cli");
    std::ofstream(dir / "bad.toml") << "[grid]\ncells = 2\n";
    EXPECT_EQ(cli("run --config " + (dir / "bad.toml").string()), 2);
    EXPECT_EQ(cli("frobnicate"), 2);
    std::ofstream(dir / "eq.toml") << "[grid]\ncells = 256\n[datum]\ndensity_amplitude = 0.0\nvelocity_amplitude = 0.0\n"
                                      "[time]\nhorizon = 0.02\ncadence = 0.01\n";
    EXPECT_EQ(cli("run --config " + (dir / "eq.toml").string() + " --out " + (dir / "out").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "report.json"));
    std::ofstream(dir / "steep.toml") << "[grid]\ncells = 64\n[datum]\nvelocity_amplitude = 8.0\n"
                                         "[time]\nhorizon = 0.5\n[physics]\nepsilon = 0.05\n";
    EXPECT_EQ(cli("run --config " + (dir / "steep.toml").string()), 3);
}
