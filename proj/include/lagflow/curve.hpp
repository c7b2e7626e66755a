#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "lagflow/vec2.hpp"

namespace lagflow {

inline constexpr std::size_t kMinNodes = 16;
// Segments shorter than this are treated as degenerate.
inline constexpr double kMinSegment = 1e-14;

/// Closed planar polyline z_j = z(phi_j) on the uniform periodic grid
/// phi_j = 2*pi*j/N, used as the profile curve in C^*.
///
/// The ambient dimension n fixes which quantities are meaningful: for n >= 2
/// the curve must avoid the origin. Construction validates the invariants
/// and throws lagflow::Error on violation; afterwards the object is immutable.
class DiscreteCurve {
public:
    DiscreteCurve(std::vector<Vec2> points, int n_ambient);

    std::size_t size() const noexcept { return points_.size(); }
    int n() const noexcept { return n_; }
    std::span<const Vec2> points() const noexcept { return points_; }
    const Vec2 &operator[](std::size_t j) const noexcept { return points_[j]; }
    const Vec2 &at_wrapped(long j) const noexcept;

    double param(std::size_t j) const noexcept {
        return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(size());
    }
    double dphi() const noexcept { return 2.0 * std::numbers::pi / static_cast<double>(size()); }

    double min_radius() const;
    double max_radius() const;
    double polyline_length() const;
    double min_segment() const;
    double max_segment() const;

    // Same point set with a different ambient dimension (revalidated).
    DiscreteCurve with_n(int n_ambient) const { return DiscreteCurve(points_, n_ambient); }
    DiscreteCurve scaled(double c) const;
    DiscreteCurve rotated(double angle) const;
    DiscreteCurve reflected_through_origin() const;

private:
    std::vector<Vec2> points_;
    int n_;
};

}  // namespace lagflow
