#include "lagflow/curve.hpp"

#include <algorithm>
#include <string>

#include "lagflow/error.hpp"

namespace lagflow {

DiscreteCurve::DiscreteCurve(std::vector<Vec2> points, int n_ambient)
    : points_(std::move(points)), n_(n_ambient) {
    if (n_ < 1) throw Error(ErrorCode::InvalidSpec, "ambient dimension n must be >= 1");
    if (points_.size() < kMinNodes)
        throw Error(ErrorCode::InvalidSpec,
                    "curve needs at least " + std::to_string(kMinNodes) + " nodes, got " +
                        std::to_string(points_.size()));
    const std::size_t count = points_.size();
    for (std::size_t j = 0; j < count; ++j) {
        const Vec2 &a = points_[j];
        if (!std::isfinite(a.x) || !std::isfinite(a.y))
            throw Error(ErrorCode::InvalidSpec, "non-finite node " + std::to_string(j));
        if (norm(points_[(j + 1) % count] - a) < kMinSegment)
            throw Error(ErrorCode::DegenerateSegment, "segment " + std::to_string(j));
        if (n_ >= 2 && a.x == 0.0 && a.y == 0.0)
            throw Error(ErrorCode::OriginContact, "node " + std::to_string(j) + " at the origin");
    }
}

const Vec2 &DiscreteCurve::at_wrapped(long j) const noexcept {
    const long count = static_cast<long>(points_.size());
    long m = j % count;
    if (m < 0) m += count;
    return points_[static_cast<std::size_t>(m)];
}

double DiscreteCurve::min_radius() const {
    double m = norm(points_.front());
    for (const auto &p : points_) m = std::min(m, norm(p));
    return m;
}

double DiscreteCurve::max_radius() const {
    double m = 0.0;
    for (const auto &p : points_) m = std::max(m, norm(p));
    return m;
}

double DiscreteCurve::polyline_length() const {
    double total = 0.0;
    for (std::size_t j = 0; j < size(); ++j) total += norm(points_[(j + 1) % size()] - points_[j]);
    return total;
}

double DiscreteCurve::min_segment() const {
    double m = norm(points_[1] - points_[0]);
    for (std::size_t j = 0; j < size(); ++j) m = std::min(m, norm(points_[(j + 1) % size()] - points_[j]));
    return m;
}

double DiscreteCurve::max_segment() const {
    double m = 0.0;
    for (std::size_t j = 0; j < size(); ++j) m = std::max(m, norm(points_[(j + 1) % size()] - points_[j]));
    return m;
}

DiscreteCurve DiscreteCurve::scaled(double c) const {
    std::vector<Vec2> out(points_);
    for (auto &p : out) p *= c;
    return DiscreteCurve(std::move(out), n_);
}

DiscreteCurve DiscreteCurve::rotated(double angle) const {
    std::vector<Vec2> out(points_);
    for (auto &p : out) p = rotate(p, angle);
    return DiscreteCurve(std::move(out), n_);
}

DiscreteCurve DiscreteCurve::reflected_through_origin() const {
    std::vector<Vec2> out(points_);
    for (auto &p : out) p = -p;
    return DiscreteCurve(std::move(out), n_);
}

}  // namespace lagflow
