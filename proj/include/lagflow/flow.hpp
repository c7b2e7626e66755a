#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lagflow/curve.hpp"
#include "lagflow/topology.hpp"

namespace lagflow {

enum class ResampleMode {
    Arclength,  // equal arclength spacing
    Adaptive,   // equidistribute 1/L + |k| + 1/r (the last term for n >= 2 only)
};

const char *to_string(ResampleMode m);

struct FlowConfig {
    int n = 2;
    double cfl = 0.2;
    int resample_every = 5;
    ResampleMode resample = ResampleMode::Arclength;
    // Absolute threshold; defaults to 1e-3 * initial max r when unset.
    std::optional<double> stop_min_r;
    double stop_max_f = 1e6;
    std::optional<double> t_max;
    // Stop once the shortest segment is below this fraction of max r; beyond
    // it rounding in the coordinates swamps the finite-difference curvature.
    double resolution_floor = 1e-6;
    int record_every = 50;
    // Keep a snapshot curve every this many records (0: first and last only).
    int snapshot_every = 0;
    long max_steps = 50'000'000;

    // Throws InvalidSpec when a field is out of range.
    void validate() const;
};

struct FlowState {
    DiscreteCurve curve;
    double t = 0.0;
    double dt_last = 0.0;
    long steps = 0;
};

// Explicit time step cfl * h^2 / (1 + max|f| h), h the shortest segment.
double stable_time_step(double cfl, double h_min, double max_f);

/// One RK4 step of dz/dt = -f nu. Resamples every `resample_every` steps.
/// `dt_cap` clips the step (used to land on t_max).
/// Throws OriginContact, BlowUp (max|f| > stop_max_f) or StepUnderflow.
FlowState step(const FlowState &state, const FlowConfig &config,
               std::optional<double> dt_cap = std::nullopt);

/// One RK4 step with a prescribed dt and no resampling.
FlowState step_fixed(const FlowState &state, int n, double dt);

enum class StopReason { MinRadius, MaxSpeed, Horizon, StepUnderflow, OriginContact, Resolution, StepBudget };

const char *to_string(StopReason r);

struct TrajectoryRecord {
    int n = 1;
    std::vector<long> steps;
    std::vector<double> times;
    std::vector<double> area;
    std::vector<double> eps_t;  // NaN where the area vanishes
    std::vector<double> min_r;
    std::vector<double> max_r;
    std::vector<double> max_abs_f;
    std::vector<double> max_abs_k;
    std::vector<double> harnack_ratio;  // max r / min r
    std::vector<double> a_proxy_sq;     // max_j k^2 + (n-1) (<nu,e_r>/r)^2
    std::vector<bool> starshaped;
    std::vector<bool> tamed;
    std::vector<bool> austere;
    std::vector<bool> embedded;
    // Snapshot curves with the sample index they were taken at.
    std::vector<std::size_t> snapshot_index;
    std::vector<DiscreteCurve> snapshots;

    TopologyInfo initial;
    StopReason stop = StopReason::Horizon;
    std::string stop_detail;

    std::size_t size() const noexcept { return times.size(); }
};

struct RunResult {
    TrajectoryRecord record;
    FlowState final_state;
};

/// Integrates until a stop condition; records every `record_every` steps and
/// at the final state. The singularity estimate is a separate step.
RunResult run(const DiscreteCurve &initial, const FlowConfig &config);

// Trajectory CSV with the fixed header
// t,area,eps_t,min_r,max_r,max_abs_f,max_abs_k,harnack,starshaped,tamed,austere,embedded
std::string trajectory_to_csv(const TrajectoryRecord &record);

}  // namespace lagflow
