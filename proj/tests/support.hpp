#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lagflow/curve.hpp"
#include "lagflow/error.hpp"

namespace testsupport {

using lagflow::DiscreteCurve;
using lagflow::Vec2;

inline constexpr double kPi = std::numbers::pi;

// Runs fn and returns the code of the lagflow::Error it throws.
inline lagflow::ErrorCode code_of(const std::function<void()> &fn) {
    try {
        fn();
    } catch (const lagflow::Error &e) {
        return e.code();
    }
    throw std::runtime_error("expected lagflow::Error");
}

inline DiscreteCurve sample(std::size_t N, int n, const std::function<Vec2(double)> &z) {
    std::vector<Vec2> pts(N);
    for (std::size_t j = 0; j < N; ++j) pts[j] = z(2.0 * kPi * static_cast<double>(j) / static_cast<double>(N));
    return DiscreteCurve(std::move(pts), n);
}

inline DiscreteCurve circle(std::size_t N, int n, double R = 1.0, Vec2 c = {0.0, 0.0}) {
    return sample(N, n, [&](double p) { return Vec2{c.x + R * std::cos(p), c.y + R * std::sin(p)}; });
}

inline DiscreteCurve ellipse(std::size_t N, int n, double a, double b) {
    return sample(N, n, [&](double p) { return Vec2{a * std::cos(p), b * std::sin(p)}; });
}

// r(phi) = R (1 + a cos(l phi)) in polar form.
inline DiscreteCurve polar_wave(std::size_t N, int n, double a, int l, double R = 1.0) {
    return sample(N, n, [&](double p) {
        const double r = R * (1.0 + a * std::cos(l * p));
        return Vec2{r * std::cos(p), r * std::sin(p)};
    });
}

// Bernoulli lemniscate, symmetric under z -> -z, crossing itself at the origin.
inline DiscreteCurve lemniscate(std::size_t N, int n, double R = 1.0) {
    return sample(N, n, [&](double t) {
        const double d = 1.0 + std::sin(t) * std::sin(t);
        return Vec2{R * std::cos(t) / d, R * std::sin(t) * std::cos(t) / d};
    });
}

inline double max_abs(const std::vector<double> &v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace testsupport
