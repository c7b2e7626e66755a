#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lagflow/curve.hpp"

namespace lagflow {

/// Per-node geometric quantities of one profile curve at one time.
///
/// Conventions: nu = -J(z'/|z'|) is the outward normal of a counterclockwise
/// curve, k = -<z'', nu>/|z'|^2 is positive on convex arcs, and the driving
/// speed is f = k + (n-1) <nu, e_r>/r, so the flow reads dz/dt = -f nu.
struct GeometryField {
    int n = 1;
    double dphi = 0.0;
    std::vector<Vec2> tangent;
    std::vector<Vec2> nu;
    std::vector<Vec2> e_r;
    std::vector<double> k;
    std::vector<double> r;
    std::vector<double> nu_dot_er;
    std::vector<double> f;
    std::vector<double> g;
    std::vector<double> dmu;
    // Polar angle beta of the starshaped representation; empty unless the
    // curve is starshaped.
    std::optional<std::vector<double>> beta;
    // Winding number used for beta (omega_0).
    std::optional<int> beta_winding;
    // Some node lies within 1e-6 * max r of the origin (allowed for n = 1 only).
    bool near_origin = false;

    std::size_t size() const noexcept { return k.size(); }
};

GeometryField geometry(const DiscreteCurve &curve, int n);
inline GeometryField geometry(const DiscreteCurve &curve) { return geometry(curve, curve.n()); }

// Periodic fourth-order centered differences on a uniform grid.
std::vector<double> periodic_d1(std::span<const double> v, double h);
std::vector<double> periodic_d2(std::span<const double> v, double h);

// Arclength derivative d/ds = |z'|^{-1} d/dphi of a nodal quantity.
std::vector<double> arclength_derivative(const GeometryField &field, std::span<const double> v);
// Second arclength derivative, d/ds applied twice.
std::vector<double> arclength_laplacian(const GeometryField &field, std::span<const double> v);

/// Normal velocity -f nu of the flow at every node, written to `velocity`.
/// Returns max |f|. Throws OriginContact (n >= 2) or DegenerateSegment.
double flow_velocity(std::span<const Vec2> points, int n, std::span<Vec2> velocity);

// Integral of a nodal quantity against dmu.
double integrate(const GeometryField &field, std::span<const double> v);

}  // namespace lagflow
