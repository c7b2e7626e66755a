#pragma once

#include <optional>
#include <span>

#include "lagflow/curve.hpp"
#include "lagflow/geometry.hpp"

namespace lagflow {

enum class LagrangianEmbedding { Embedded, DoubleCover, NotEmbedded };

const char *to_string(LagrangianEmbedding e);

struct Predicates {
    bool starshaped = false;
    bool tamed = false;
    bool austere = false;
    bool embedded = false;
    // Absent when the caller skipped the test of the curve against its reflection.
    std::optional<LagrangianEmbedding> lagrangian_embedding;
};

// Orientation tolerance for the segment tests.
inline constexpr double kOrientationTol = 1e-12;

// True iff no two non-adjacent segments of the closed polyline meet.
bool is_simple_polyline(std::span<const Vec2> points);

// True iff some segment of closed polyline a meets some segment of closed polyline b.
bool polylines_intersect(std::span<const Vec2> a, std::span<const Vec2> b);

// Symmetric Hausdorff distance between two closed polylines (vertex-to-segment).
double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b);

// The reflection test costs O(N^2) on double covers; `with_lagrangian = false` skips it.
Predicates predicates(const DiscreteCurve &curve, const GeometryField &field, bool with_lagrangian = true);

}  // namespace lagflow
