#include "lagflow/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace lagflow {

const char *to_string(LagrangianEmbedding e) {
    switch (e) {
        case LagrangianEmbedding::Embedded: return "embedded";
        case LagrangianEmbedding::DoubleCover: return "double_cover";
        case LagrangianEmbedding::NotEmbedded: return "not_embedded";
    }
    return "unknown";
}

namespace {

struct Segment {
    Vec2 a, b;
    double xmin, xmax, ymin, ymax;
    std::size_t index;
    int set;
};

double extent(std::span<const Vec2> pts) {
    double m = 0.0;
    for (const auto &p : pts) m = std::max({m, std::abs(p.x), std::abs(p.y)});
    return std::max(m, 1e-300);
}

// Signed distance of c from the line through a, b; zeroed inside the tolerance.
double side(const Vec2 &a, const Vec2 &b, const Vec2 &c, double tol) {
    const double len = norm(b - a);
    const double d = cross(b - a, c - a) / len;
    return std::abs(d) <= tol ? 0.0 : d;
}

bool on_segment(const Vec2 &a, const Vec2 &b, const Vec2 &c, double tol) {
    return c.x >= std::min(a.x, b.x) - tol && c.x <= std::max(a.x, b.x) + tol &&
           c.y >= std::min(a.y, b.y) - tol && c.y <= std::max(a.y, b.y) + tol;
}

bool segments_meet(const Segment &s, const Segment &t, double tol) {
    const double o1 = side(s.a, s.b, t.a, tol);
    const double o2 = side(s.a, s.b, t.b, tol);
    const double o3 = side(t.a, t.b, s.a, tol);
    const double o4 = side(t.a, t.b, s.b, tol);
    if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
    if (o1 == 0 && on_segment(s.a, s.b, t.a, tol)) return true;
    if (o2 == 0 && on_segment(s.a, s.b, t.b, tol)) return true;
    if (o3 == 0 && on_segment(t.a, t.b, s.a, tol)) return true;
    if (o4 == 0 && on_segment(t.a, t.b, s.b, tol)) return true;
    return false;
}

void append_segments(std::vector<Segment> &out, std::span<const Vec2> pts, int set) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
        const Vec2 &a = pts[j];
        const Vec2 &b = pts[(j + 1) % pts.size()];
        out.push_back({a, b, std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y), j, set});
    }
}

// Sweep over x-sorted bounding boxes; `accept` filters candidate pairs.
template <class Accept>
bool any_intersection(std::vector<Segment> &segs, double tol, Accept accept) {
    std::sort(segs.begin(), segs.end(), [](const Segment &a, const Segment &b) { return a.xmin < b.xmin; });
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (std::size_t j = i + 1; j < segs.size() && segs[j].xmin <= segs[i].xmax + tol; ++j) {
            if (segs[j].ymin > segs[i].ymax + tol || segs[j].ymax < segs[i].ymin - tol) continue;
            if (!accept(segs[i], segs[j])) continue;
            if (segments_meet(segs[i], segs[j], tol)) return true;
        }
    }
    return false;
}

double point_segment_distance(const Vec2 &p, const Vec2 &a, const Vec2 &b) {
    const Vec2 ab = b - a;
    const double len2 = norm2(ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    return norm(p - (a + ab * t));
}

double directed_hausdorff(std::span<const Vec2> a, std::span<const Vec2> b) {
    double worst = 0.0;
    for (const auto &p : a) {
        double best = INFINITY;
        for (std::size_t j = 0; j < b.size() && best > worst; ++j)
            best = std::min(best, point_segment_distance(p, b[j], b[(j + 1) % b.size()]));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

bool is_simple_polyline(std::span<const Vec2> pts) {
    const std::size_t count = pts.size();
    std::vector<Segment> segs;
    segs.reserve(count);
    append_segments(segs, pts, 0);
    const double tol = kOrientationTol * extent(pts);
    return !any_intersection(segs, tol, [count](const Segment &s, const Segment &t) {
        const std::size_t d = s.index > t.index ? s.index - t.index : t.index - s.index;
        return d != 1 && d != count - 1;
    });
}

bool polylines_intersect(std::span<const Vec2> a, std::span<const Vec2> b) {
    std::vector<Segment> segs;
    segs.reserve(a.size() + b.size());
    append_segments(segs, a, 0);
    append_segments(segs, b, 1);
    const double tol = kOrientationTol * std::max(extent(a), extent(b));
    return any_intersection(segs, tol, [](const Segment &s, const Segment &t) { return s.set != t.set; });
}

double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

Predicates predicates(const DiscreteCurve &curve, const GeometryField &field, bool with_lagrangian) {
    Predicates p;
    const double min_nuer = *std::min_element(field.nu_dot_er.begin(), field.nu_dot_er.end());
    const double min_f = *std::min_element(field.f.begin(), field.f.end());
    p.starshaped = !field.near_origin && min_nuer > 0.0;
    p.austere = !field.near_origin && min_nuer > -1.0;
    p.tamed = min_f > 0.0;
    p.embedded = is_simple_polyline(curve.points());
    if (!with_lagrangian) return p;

    if (!p.embedded) {
        p.lagrangian_embedding = LagrangianEmbedding::NotEmbedded;
        return p;
    }
    std::vector<Vec2> mirror(curve.points().begin(), curve.points().end());
    for (auto &q : mirror) q = -q;

    // Distance of a vertex to a neighbouring chord is at most h^2 |k| / 8,
    // with h and k taken locally.
    const auto pts = curve.points();
    const std::size_t count = pts.size();
    double chord_gap = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        const double h = std::max(norm(pts[(j + 1) % count] - pts[j]), norm(pts[j] - pts[(j + count - 1) % count]));
        chord_gap = std::max(chord_gap, h * h * std::abs(field.k[j]));
    }
    const double tol = chord_gap + 1e-12 * extent(pts);
    if (!polylines_intersect(curve.points(), mirror))
        p.lagrangian_embedding = LagrangianEmbedding::Embedded;
    else if (hausdorff_distance(curve.points(), mirror) < tol)
        p.lagrangian_embedding = LagrangianEmbedding::DoubleCover;
    else
        p.lagrangian_embedding = LagrangianEmbedding::NotEmbedded;
    return p;
}

}  // namespace lagflow
