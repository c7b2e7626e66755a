#include "lagflow/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lagflow/error.hpp"

namespace lagflow {

namespace {
// Increments this close to pi are ambiguous between +pi and -pi.
constexpr double kBranchMargin = 1e-9;
constexpr double kIntegerTol = 1e-6;
}  // namespace

int turning_number(std::span<const Vec2> vectors) {
    const std::size_t count = vectors.size();
    double total = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        const Vec2 &a = vectors[j];
        const Vec2 &b = vectors[(j + 1) % count];
        if (norm2(a) == 0.0) throw Error(ErrorCode::OriginContact, "zero vector in angle sum at " + std::to_string(j));
        const double increment = std::atan2(cross(a, b), dot(a, b));
        if (std::abs(increment) >= std::numbers::pi - kBranchMargin)
            throw Error(ErrorCode::RefineGrid, "angle increment reaches pi at node " + std::to_string(j));
        total += increment;
    }
    const double turns = total / (2.0 * std::numbers::pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > kIntegerTol)
        throw Error(ErrorCode::NonIntegerWinding, "angle sum " + std::to_string(total) + " is not a multiple of 2 pi");
    return static_cast<int>(rounded);
}

int winding_number(const DiscreteCurve &curve) { return turning_number(curve.points()); }

int rotation_number(const DiscreteCurve &curve) {
    const auto pts = curve.points();
    std::vector<Vec2> segments(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) segments[j] = pts[(j + 1) % pts.size()] - pts[j];
    return turning_number(segments);
}

double symplectic_area(const GeometryField &field, const DiscreteCurve &curve) {
    double total = 0.0;
    for (std::size_t j = 0; j < curve.size(); ++j) total += dot(curve[j], field.nu[j]) * field.dmu[j];
    return 0.5 * total;
}

namespace {
// True when some chord of the polygon passes through the origin.
bool polygon_touches_origin(const DiscreteCurve &curve) {
    const auto pts = curve.points();
    const double tol = 1e-12 * curve.max_radius();
    for (std::size_t j = 0; j < pts.size(); ++j) {
        const Vec2 a = pts[j], b = pts[(j + 1) % pts.size()];
        const Vec2 d = b - a;
        const double u = std::clamp(-dot(a, d) / norm2(d), 0.0, 1.0);
        if (norm(a + d * u) <= tol) return true;
    }
    return false;
}
}  // namespace

TopologyInfo topology(const DiscreteCurve &curve, const GeometryField &field, int n) {
    TopologyInfo info;
    info.rot = rotation_number(curve);
    info.area = symplectic_area(field, curve);
    if (!field.near_origin && !polygon_touches_origin(curve)) info.wind0 = winding_number(curve);

    const double scale = curve.max_radius();
    const bool area_vanishes = std::abs(info.area) <= 1e-12 * scale * scale;
    if (info.wind0 && !area_vanishes)
        info.eps_monotone = 2.0 * std::numbers::pi * (info.rot + (n - 1) * *info.wind0) / info.area;
    return info;
}

}  // namespace lagflow
