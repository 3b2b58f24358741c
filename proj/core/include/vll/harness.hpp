#pragma once

// Run configuration, single runs, eps sweeps, the check suite and the layer
// scaling study, with their on-disk artifacts.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vll/boundary_layer.hpp"
#include "vll/euler_reference.hpp"
#include "vll/ns_solver.hpp"
#include "vll/relative_energy.hpp"

namespace vll {

enum class DragMode { fixed, coupled };

struct RunConfig {
    double length = 1.0;
    std::size_t cells = 1024;
    EosParams eos;
    double epsilon = 0.01;
    DragMode drag = DragMode::coupled;
    double r1 = 0.0;              // fixed mode
    double coupling_kappa = 1.0;  // coupled mode: r1 = kappa eps^alpha
    double coupling_alpha = 1.0;
    ComparatorOptions comparator;
    double horizon = 0.2;
    double cadence = 0.01;
    double cfl = 0.5;
    WellPreparedData datum;
    std::size_t refinement = 4;
    std::vector<double> sweep_epsilons{0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
    double cells_per_layer = 16.0; // sweep rule N(eps) = max(N0, ceil(k L / (c eps)))
    std::vector<double> layer_epsilons{0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125};
    std::uint64_t seed = 0;        // recorded in outputs; no component draws random numbers
    bool write_snapshots = true;

    /// Drag coefficient for a given eps under the configured mode.
    double drag_for(double eps) const;
    /// Throws invalid_configuration naming the offending field.
    void validate() const;
};

RunConfig parse_config(const std::string& toml_text);
RunConfig load_config(const std::filesystem::path& path);

struct RunResult {
    RunConfig config;
    Trajectory trajectory;
    RelativeEnergyReport report;
    EnergyBudget energy;
    BDEntropyBudget bd_entropy;
    bool floor_active = false;
    bool monitor_tripped = false;
    int exit_code = 0; // 0 clean, 1 flagged
};

/// Solves the reference and the viscous run, evaluates every report and, when
/// `out` is set, writes snapshots/, budgets.csv, report.json and report.csv.
RunResult run_single(const RunConfig& config, const std::optional<std::filesystem::path>& out = std::nullopt);

/// Same, with a precomputed reference on a refinement of the run grid.
RunResult run_single(const RunConfig& config, const EulerReference& reference,
                     const std::optional<std::filesystem::path>& out = std::nullopt);

struct SweepRow {
    double epsilon = 0.0;
    double r1 = 0.0;
    std::size_t cells = 0;
    double metric = 0.0;
    double E0 = 0.0;
    double ET = 0.0;
    double kato_monitor = 0.0;
    double lgamma_monitor = 0.0;
    double gronwall_C = 0.0;
    double eta = 0.0;
    bool unreliable = false;
};

struct SweepResult {
    std::vector<SweepRow> rows; // eps descending
    std::optional<double> metric_slope;
    bool metric_strictly_decreasing = true;
    bool kato_monotone = true;
    bool lgamma_monotone = true;
    double gronwall_ratio = 1.0; // max C / min C over the sweep, 1 when all C vanish
};

/// Grid cells for one sweep entry: max(N0, ceil(cells_per_layer L / (c eps))).
std::size_t sweep_cells(const RunConfig& config, double eps);

/// The exact per-eps configuration a sweep row uses, reproducible with run_single.
RunConfig sweep_entry_config(const RunConfig& config, double eps);

/// Threads used for a sweep: min(jobs, VLL_THREADS, entries), at least 1.
std::size_t sweep_threads(std::size_t requested_jobs, std::size_t entries);

/// Runs every eps concurrently. On a failed entry the rows finished so far are
/// still written before the error propagates.
SweepResult sweep(const RunConfig& config, std::size_t jobs = 1,
                  const std::optional<std::filesystem::path>& out = std::nullopt);

std::string sweep_csv(const SweepResult& result);

struct CheckItem {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CheckReport {
    std::vector<CheckItem> items;
    bool all_passed() const;
};

/// Identity orders, cutoff invariants, entropy algebra and a short budget
/// ladder. `cutoff` replaces the standard bump (used to exercise failures).
CheckReport check_suite(const RunConfig& config, const CutoffFunction& cutoff = make_cutoff());

/// Layer scaling over the configured sweep eps list on the wall-tangential profile.
ScalingTable layer_scaling(const RunConfig& config, const std::optional<std::filesystem::path>& out = std::nullopt);

} // namespace vll
