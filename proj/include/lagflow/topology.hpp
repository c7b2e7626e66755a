#pragma once

#include <optional>

#include "lagflow/curve.hpp"
#include "lagflow/geometry.hpp"

namespace lagflow {

struct TopologyInfo {
    // Winding number about the origin; absent when the curve touches it.
    std::optional<int> wind0;
    // Rotation number of the tangent.
    int rot = 0;
    // Signed symplectic area 1/2 \oint <z, nu> dmu.
    double area = 0.0;
    // 2 pi (rot + (n-1) wind0) / area, when area != 0 and wind0 is defined.
    std::optional<double> eps_monotone;

    // rot + (n-1) wind0, the integer multiplying 2 pi in the area law.
    std::optional<int> area_slope_index(int n) const {
        if (!wind0) return std::nullopt;
        return rot + (n - 1) * *wind0;
    }
};

// Total principal-value angle increment of a closed sequence of nonzero
// vectors, divided by 2 pi. Throws RefineGrid if an increment reaches pi.
int turning_number(std::span<const Vec2> vectors);

int winding_number(const DiscreteCurve &curve);
int rotation_number(const DiscreteCurve &curve);
double symplectic_area(const GeometryField &field, const DiscreteCurve &curve);

TopologyInfo topology(const DiscreteCurve &curve, const GeometryField &field, int n);
inline TopologyInfo topology(const DiscreteCurve &curve, const GeometryField &field) {
    return topology(curve, field, field.n);
}

}  // namespace lagflow
