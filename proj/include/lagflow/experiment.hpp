#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lagflow/flow.hpp"
#include "lagflow/monitor.hpp"
#include "lagflow/scenario.hpp"
#include "lagflow/singularity.hpp"

namespace lagflow {

// Tolerances above which a monitored law counts as violated.
inline constexpr double kAreaLawTol = 1e-3;  // relative to |A(z_0)|
inline constexpr double kEpsLawTol = 1e-2;

enum ExitCode { kExitOk = 0, kExitViolation = 1, kExitUsage = 2, kExitNumeric = 3 };

struct ExperimentResult {
    RunResult run;
    FlowConfig config;  // as run, n taken from the scenario
    InvariantReport invariants;
    std::optional<SingularityReport> report;
    std::string report_error;  // why `report` is absent
    // Hausdorff distance of the Huisken-rescaled final curve to the circle of
    // radius sqrt(n); needs a report.
    std::optional<double> rescaled_circle_distance;
    // Human-readable entries, one per violated law or property.
    std::vector<std::string> violations;

    int exit_code() const { return violations.empty() ? kExitOk : kExitViolation; }
};

/// generate -> run -> estimate_singularity -> invariant_monitor. With a
/// non-empty `out`, writes trajectory.csv, report.json, snap_{i}.json,
/// curves.svg and invariants.svg there (each file via temp + rename).
/// Throws what generate or run throw.
ExperimentResult experiment(const ScenarioSpec &scenario, const FlowConfig &config,
                            const std::filesystem::path &out = {});

std::string experiment_report_json(const ScenarioSpec &scenario, const ExperimentResult &result);

// Curve overlay graded from blue (first time) to red (last), origin marked.
// Without matching `times` the grading follows the snapshot index.
std::string svg_curves(const std::vector<DiscreteCurve> &snapshots, const std::vector<double> &times = {});

struct InvariantSeries {
    std::vector<double> t;
    std::vector<double> area;
    std::vector<double> m;  // rescaled sup, may be empty
    double area0 = 0.0;
    std::optional<int> slope_index;  // rot + (n-1) wind0
};

InvariantSeries invariant_series(const TrajectoryRecord &record, const std::optional<SingularityReport> &report);

// Area panel (data and the line A_0 - 2 pi (rot + (n-1) wind0) t) over an m(t) panel.
std::string svg_invariants(const InvariantSeries &series);

// Writes curves.svg and invariants.svg into `dir`. Throws IoError.
void emit_svg(const std::vector<DiscreteCurve> &snapshots, const std::vector<double> &times,
              const InvariantSeries &series, const std::filesystem::path &dir);

/// Re-reads trajectory.csv, report.json and the snapshots of an experiment
/// directory and rewrites its SVG files. Throws IoError.
void replot(const std::filesystem::path &dir);

struct SweepJob {
    ScenarioSpec scenario;
    FlowConfig config;
};

// Kind-specific parameters as `key=value` pairs joined by ';'.
std::string scenario_params(const ScenarioSpec &spec);

/// Runs every job on up to `threads` workers; row i writes into out/row_{i}
/// when `out` is non-empty. A failing row is recorded and the sweep goes on.
/// Returns the summary CSV
///   scenario,params,n,T_est,class,type1,area_law_residual,eps_law_residual,violations
/// in job order. Throws EmptyGrid.
std::string sweep(const std::vector<SweepJob> &jobs, unsigned threads, const std::filesystem::path &out = {});

// Worker count: LAGFLOW_THREADS when set and positive, else the hardware
// concurrency, never more than `jobs`.
unsigned worker_count(std::size_t jobs);

}  // namespace lagflow
