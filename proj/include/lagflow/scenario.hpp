#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "lagflow/curve.hpp"
#include "lagflow/vec2.hpp"

namespace lagflow {

enum class ScenarioKind { Circle, OffsetCircle, PerturbedSymmetric, FigureEight, Dumbbell, Chekanov };

const char *to_string(ScenarioKind k);
// Throws InvalidSpec for an unknown name.
ScenarioKind scenario_from_string(const std::string &name);

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::Circle;
    int n = 2;
    std::size_t N = 512;
    double R = 1.0;               // radius (circle, lobes, lemniscate scale)
    Vec2 center{0.0, 0.0};        // circle center; offset_circle defaults to (3, 0)
    double a = 0.1;               // perturbation amplitude, 0 <= a < 1
    int l = 9;                    // symmetry order
    int omega0 = 1;               // winding about the origin
    double neck_width = 0.2;      // dumbbell neck half-width w
    double separation = 1.5;      // dumbbell lobe centers at (+-d, 0)
    double kappa = 0.70710678118654752440;  // Chekanov curve parameter

    // Throws InvalidSpec.
    void validate() const;
};

// Default spec for a kind; offset_circle is centered at (3, 0).
ScenarioSpec scenario_defaults(ScenarioKind kind);

/// Samples the scenario curve at N nodes.
///  circle / offset_circle: center + R (cos phi, sin phi)
///  perturbed_symmetric:    R (1 + a cos(l phi)) (cos omega0 phi, sin omega0 phi)
///  figure_eight:           lemniscate r^2 = R^2 cos(2 theta), symmetric under z -> -z
///  dumbbell:               smooth union of two disks and a neck strip, equal arclength nodes
///  chekanov:               e^{i kappa cos phi} cos phi + i kappa e^{-i kappa cos phi} sin phi
DiscreteCurve generate(const ScenarioSpec &spec);

/// Unit circle with a random radial perturbation in the modes 2..6, drawn
/// from mt19937_64(seed); amplitudes are halved until the curve is
/// starshaped, tamed and embedded for the given n.
DiscreteCurve random_fourier_seed(std::uint64_t seed, std::size_t N, int n);

}  // namespace lagflow
