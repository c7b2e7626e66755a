#pragma once

#include <string>
#include <vector>

#include "lagflow/curve.hpp"
#include "lagflow/flow.hpp"

namespace lagflow {

enum class SingularityClass { C1, C2, C3, None };

const char *to_string(SingularityClass c);

struct SingularityReport {
    double T_est = 0.0;
    // A_proxy^2 ~ fit_c / (T_est - t) on the tail.
    double fit_c = 0.0;
    SingularityClass cls = SingularityClass::None;
    bool type1 = false;
    // m(t) = A_proxy^2 (T_est - t) for every sample.
    std::vector<double> rescaled_sup;
    // The tail portion of rescaled_sup used for the verdict.
    std::vector<double> m_tail;
    // Last over first tail value of m.
    double tail_growth = 0.0;
    bool curvature_blowup = false;
    bool reaches_origin = false;
};

// Curvature counts as blown up at 10x its initial maximum; the origin counts as
// reached when min r falls below 1% of the initial max r.
inline constexpr double kBlowupFactor = 10.0;
inline constexpr double kOriginFraction = 1e-2;

/// Least-squares fit of 1/A_proxy^2 against t over the last `tail_fraction`
/// of the samples. Type 1 iff max(m_tail) <= 2 median(m_tail).
/// Throws InsufficientBlowup when max|f| never grew tenfold, when there are
/// fewer than 20 samples, or when the fit shows no approach to a singularity.
SingularityReport estimate_singularity(const TrajectoryRecord &record, double tail_fraction = 0.25);

std::string report_to_json(const SingularityReport &report);

struct RescaledCurve {
    DiscreteCurve curve;
    double s = 0.0;  // -1/2 log(T - t)
};

/// z -> z / sqrt(2 (T - t)). Throws BadHorizon when T_est <= t.
RescaledCurve rescale_huisken(const FlowState &state, double T_est);

}  // namespace lagflow
