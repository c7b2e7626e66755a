#pragma once

#include <span>
#include <vector>

#include "lagflow/curve.hpp"

namespace lagflow {

/// Periodic C^2 cubic spline through closed data, parametrized on the uniform
/// grid phi_j = 2 pi j / N (one component per axis).
class PeriodicSpline {
public:
    explicit PeriodicSpline(std::span<const Vec2> nodes);

    std::size_t size() const noexcept { return nodes_.size(); }
    double step() const noexcept { return h_; }
    Vec2 value(double phi) const;
    Vec2 derivative(double phi) const;
    // Arclength of the spline over [phi_a, phi_b] within a single interval.
    double arclength(double phi_a, double phi_b) const;
    // Arclength of interval j, [phi_j, phi_{j+1}].
    double interval_length(std::size_t j) const;

private:
    std::size_t locate(double phi, double &local) const;

    std::vector<Vec2> nodes_;
    std::vector<Vec2> second_;  // second derivatives at the nodes
    double h_;
};

/// Redistribute N nodes at equal arclength along the periodic cubic spline of
/// the input. Node 0 stays fixed. Throws DegenerateSegment.
DiscreteCurve resample_arclength(const DiscreteCurve &curve);

/// Redistribute N nodes so each interval carries an equal share of
/// \int density ds, where density is given per input node (positive) and
/// interpolated linearly in phi.
DiscreteCurve resample_density(const DiscreteCurve &curve, std::span<const double> density);

/// Sample a closed polyline of any size at `count` nodes equally spaced in
/// arclength along its periodic cubic spline (uniform index parameter).
std::vector<Vec2> resample_closed_polyline(std::span<const Vec2> points, std::size_t count);

// Arclength of each interval [phi_j, phi_{j+1}] of the curve's spline.
std::vector<double> spline_segment_lengths(const DiscreteCurve &curve);

}  // namespace lagflow
