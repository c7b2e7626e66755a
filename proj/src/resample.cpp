#include "lagflow/resample.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "lagflow/error.hpp"

namespace lagflow {

namespace {

// Five-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 5> kGaussX{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                        0.9061798459386640};
constexpr std::array<double, 5> kGaussW{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                        0.4786286704993665, 0.2369268850561891};

// Solves the cyclic tridiagonal system with constant stencil (1, 4, 1).
std::vector<double> solve_cyclic_141(const std::vector<double> &rhs) {
    const std::size_t m = rhs.size();
    // Sherman-Morrison: A = B + u v^T with B tridiagonal.
    const double gamma = -4.0;
    std::vector<double> diag(m, 4.0);
    diag[0] = 4.0 - gamma;
    diag[m - 1] = 4.0 - 1.0 / gamma;

    auto thomas = [&](std::vector<double> d) {
        std::vector<double> c(m), x(m);
        c[0] = 1.0 / diag[0];
        d[0] /= diag[0];
        for (std::size_t i = 1; i < m; ++i) {
            const double denom = diag[i] - c[i - 1];
            c[i] = 1.0 / denom;
            d[i] = (d[i] - d[i - 1]) / denom;
        }
        x[m - 1] = d[m - 1];
        for (std::size_t i = m - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
        return x;
    };

    std::vector<double> u(m, 0.0);
    u[0] = gamma;
    u[m - 1] = 1.0;
    const auto y = thomas(rhs);
    const auto z = thomas(u);
    const double vy = y[0] + y[m - 1] / gamma;
    const double vz = z[0] + z[m - 1] / gamma;
    const double factor = vy / (1.0 + vz);
    std::vector<double> x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = y[i] - factor * z[i];
    return x;
}

std::vector<Vec2> redistribute(const PeriodicSpline &spline, std::span<const double> density, std::size_t count) {
    const std::size_t m = spline.size();
    const double h = spline.step();

    auto rho = [&](std::size_t j, double local) {
        const double b = local / h;
        return (1.0 - b) * density[j] + b * density[(j + 1) % m];
    };
    // \int_0^local rho |S'| over interval j.
    auto weighted = [&](std::size_t j, double local) {
        const double phi0 = static_cast<double>(j) * h;
        double total = 0.0;
        for (std::size_t q = 0; q < kGaussX.size(); ++q) {
            const double t = 0.5 * local * (kGaussX[q] + 1.0);
            total += kGaussW[q] * rho(j, t) * norm(spline.derivative(phi0 + t));
        }
        return 0.5 * local * total;
    };

    std::vector<double> cumulative(m + 1, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const double w = weighted(j, h);
        if (!(w > 0.0)) throw Error(ErrorCode::DegenerateSegment, "zero-length spline interval " + std::to_string(j));
        cumulative[j + 1] = cumulative[j] + w;
    }
    const double total = cumulative[m];

    std::vector<Vec2> out(count);
    out[0] = spline.value(0.0);
    std::size_t j = 0;
    for (std::size_t i = 1; i < count; ++i) {
        const double target = total * static_cast<double>(i) / static_cast<double>(count);
        while (j + 1 < m && cumulative[j + 1] < target) ++j;
        const double goal = target - cumulative[j];
        const double span_w = cumulative[j + 1] - cumulative[j];
        // Safeguarded Newton on the local parameter.
        double lo = 0.0, hi = h;
        double t = h * std::clamp(goal / span_w, 0.0, 1.0);
        for (int it = 0; it < 60; ++it) {
            const double F = weighted(j, t) - goal;
            if (std::abs(F) <= 1e-15 * total) break;
            if (F > 0.0) hi = t; else lo = t;
            const double dF = rho(j, t) * norm(spline.derivative(static_cast<double>(j) * h + t));
            double next = dF > 0.0 ? t - F / dF : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - t) <= 1e-16 * h) { t = next; break; }
            t = next;
        }
        out[i] = spline.value(static_cast<double>(j) * h + t);
    }
    return out;
}

}  // namespace

PeriodicSpline::PeriodicSpline(std::span<const Vec2> nodes)
    : nodes_(nodes.begin(), nodes.end()), second_(nodes.size()),
      h_(2.0 * std::numbers::pi / static_cast<double>(nodes.size())) {
    const std::size_t m = nodes_.size();
    if (m < 4) throw Error(ErrorCode::InvalidSpec, "spline needs at least 4 nodes");
    std::vector<double> rx(m), ry(m);
    const double scale = 6.0 / (h_ * h_);
    for (std::size_t j = 0; j < m; ++j) {
        const Vec2 d2 = nodes_[(j + 1) % m] - 2.0 * nodes_[j] + nodes_[(j + m - 1) % m];
        rx[j] = scale * d2.x;
        ry[j] = scale * d2.y;
    }
    const auto sx = solve_cyclic_141(rx);
    const auto sy = solve_cyclic_141(ry);
    for (std::size_t j = 0; j < m; ++j) second_[j] = {sx[j], sy[j]};
}

std::size_t PeriodicSpline::locate(double phi, double &local) const {
    const double period = 2.0 * std::numbers::pi;
    double p = std::fmod(phi, period);
    if (p < 0.0) p += period;
    auto j = static_cast<std::size_t>(p / h_);
    if (j >= nodes_.size()) j = nodes_.size() - 1;
    local = p - static_cast<double>(j) * h_;
    return j;
}

Vec2 PeriodicSpline::value(double phi) const {
    double t;
    const std::size_t j = locate(phi, t);
    const std::size_t j1 = (j + 1) % nodes_.size();
    const double b = t / h_, a = 1.0 - b;
    return a * nodes_[j] + b * nodes_[j1] +
           ((a * a * a - a) * second_[j] + (b * b * b - b) * second_[j1]) * (h_ * h_ / 6.0);
}

Vec2 PeriodicSpline::derivative(double phi) const {
    double t;
    const std::size_t j = locate(phi, t);
    const std::size_t j1 = (j + 1) % nodes_.size();
    const double b = t / h_, a = 1.0 - b;
    return (nodes_[j1] - nodes_[j]) / h_ - ((3.0 * a * a - 1.0) * second_[j] - (3.0 * b * b - 1.0) * second_[j1]) * (h_ / 6.0);
}

double PeriodicSpline::arclength(double phi_a, double phi_b) const {
    double total = 0.0;
    const double half = 0.5 * (phi_b - phi_a), mid = 0.5 * (phi_a + phi_b);
    for (std::size_t q = 0; q < kGaussX.size(); ++q) total += kGaussW[q] * norm(derivative(mid + half * kGaussX[q]));
    return half * total;
}

double PeriodicSpline::interval_length(std::size_t j) const {
    const double a = static_cast<double>(j) * h_;
    // Evaluate strictly inside the interval so locate() never rolls over.
    return arclength(a, a + h_ * (1.0 - 1e-15));
}

DiscreteCurve resample_density(const DiscreteCurve &curve, std::span<const double> density) {
    if (density.size() != curve.size()) throw Error(ErrorCode::InvalidSpec, "density size mismatch");
    const PeriodicSpline spline(curve.points());
    return DiscreteCurve(redistribute(spline, density, curve.size()), curve.n());
}

DiscreteCurve resample_arclength(const DiscreteCurve &curve) {
    const std::vector<double> ones(curve.size(), 1.0);
    return resample_density(curve, ones);
}

std::vector<Vec2> resample_closed_polyline(std::span<const Vec2> points, std::size_t count) {
    const PeriodicSpline spline(points);
    const std::vector<double> ones(points.size(), 1.0);
    return redistribute(spline, ones, count);
}

std::vector<double> spline_segment_lengths(const DiscreteCurve &curve) {
    const PeriodicSpline spline(curve.points());
    std::vector<double> out(curve.size());
    for (std::size_t j = 0; j < curve.size(); ++j) out[j] = spline.interval_length(j);
    return out;
}

}  // namespace lagflow
