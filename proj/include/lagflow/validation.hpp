#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lagflow/flow.hpp"

namespace lagflow {

// A residual on a coarse grid of N nodes and a fine grid of 2N.
struct ResidualCheck {
    std::string name;
    double coarse = 0.0;
    double fine = 0.0;
    // Order checks pass below this regardless (rounding level); bound checks
    // need both values below it.
    double bound = 0.0;
    bool order_check = true;

    double order() const;
    bool ok() const;
};

// Circle, tamed perturbed_symmetric (a = 0.02, l = 9) and one random seed.
std::vector<std::pair<std::string, DiscreteCurve>> suite_curves(std::uint64_t seed, std::size_t N, int n);

// Polar-graph identities and the f sqrt(g) identity, order >= 2.
std::vector<ResidualCheck> identity_suite(std::uint64_t seed, std::size_t N, int n);

// Evolution equations (order >= 2) and dA/dt + \oint f dmu (< 1e-6).
std::vector<ResidualCheck> evolution_suite(std::uint64_t seed, std::size_t N, int n);

struct PreservationCheck {
    std::uint64_t seed = 0;
    StopReason stop = StopReason::Horizon;
    double t_stop = 0.0;
    std::vector<std::string> lost;  // properties lost before the stop

    // Nothing lost, and for n >= 2 the run ended at the origin.
    bool ok(int n) const { return lost.empty() && (n < 2 || stop == StopReason::MinRadius); }
};

// Flows random_fourier_seed(seed + i) for i < count to its stop.
std::vector<PreservationCheck> preservation_suite(std::uint64_t seed, int count, std::size_t N, int n);

}  // namespace lagflow
