#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lagflow/flow.hpp"
#include "lagflow/topology.hpp"

namespace lagflow {

struct PreservationViolation {
    std::string property;  // "tamed", "starshaped", "austere" or "embedded"
    std::size_t first_index = 0;
    double first_t = 0.0;
    std::size_t count = 0;
};

struct InvariantReport {
    // max_t |A(z_t) - A(z_0) + 2 pi (rot + (n-1) wind0) t|; absent without wind0.
    std::optional<double> area_law_residual;
    // max relative gap |eps_t - eps_0/(1 - eps_0 t)| / (eps_0/(1 - eps_0 t)) over
    // t < 0.9/eps_0; absent when eps_0 is undefined.
    std::optional<double> eps_law_residual;
    // max relative gap |2 pi (rot + (n-1) wind0) - A(z_t)/(T - t)| over t <= 0.9 T,
    // i.e. the defect of the rescaled flow from being Hamiltonian.
    std::optional<double> hamiltonian_residual;
    std::vector<PreservationViolation> preservation_violations;
};

InvariantReport invariant_monitor(const TrajectoryRecord &record, const TopologyInfo &initial,
                                  std::optional<double> T_est = std::nullopt);

struct EvolutionResiduals {
    double res_dmu = 0.0;   // d/dt log dmu + k f
    double res_k = 0.0;     // d/dt k - (Laplace f + f k^2)
    double res_f = 0.0;     // evolution of f
    double res_r = 0.0;     // evolution of r
    double res_nuer = 0.0;  // evolution of <nu, e_r>
    double res_dA = 0.0;    // dA/dt + \oint f dmu
    double dt = 0.0;
};

/// Takes two RK4 steps of size cfl h^2/(1 + max|f| h) without resampling, so
/// every node moves along its normal, and compares central time differences
/// at the middle state against the spatial right-hand sides there.
EvolutionResiduals evolution_residuals(const FlowState &state, const FlowConfig &config);

}  // namespace lagflow
