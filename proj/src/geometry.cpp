#include "lagflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lagflow/error.hpp"
#include "lagflow/topology.hpp"

namespace lagflow {

namespace {

// Nodes within this fraction of max r from the origin count as origin contact.
constexpr double kOriginRelTol = 1e-6;

inline std::size_t wrap(long j, long count) {
    long m = j % count;
    return static_cast<std::size_t>(m < 0 ? m + count : m);
}

// Fourth-order centered first and second derivatives of a periodic sequence.
template <class T>
inline T d1_at(std::span<const T> v, long j, double h) {
    const long count = static_cast<long>(v.size());
    const T &m2 = v[wrap(j - 2, count)];
    const T &m1 = v[wrap(j - 1, count)];
    const T &p1 = v[wrap(j + 1, count)];
    const T &p2 = v[wrap(j + 2, count)];
    return (m2 - p2 + 8.0 * (p1 - m1)) * (1.0 / (12.0 * h));
}

template <class T>
inline T d2_at(std::span<const T> v, long j, double h) {
    const long count = static_cast<long>(v.size());
    const T &m2 = v[wrap(j - 2, count)];
    const T &m1 = v[wrap(j - 1, count)];
    const T &c = v[wrap(j, count)];
    const T &p1 = v[wrap(j + 1, count)];
    const T &p2 = v[wrap(j + 2, count)];
    return (16.0 * (p1 + m1) - (p2 + m2) - 30.0 * c) * (1.0 / (12.0 * h * h));
}

}  // namespace

std::vector<double> periodic_d1(std::span<const double> v, double h) {
    std::vector<double> out(v.size());
    for (long j = 0; j < static_cast<long>(v.size()); ++j) out[static_cast<std::size_t>(j)] = d1_at(v, j, h);
    return out;
}

std::vector<double> periodic_d2(std::span<const double> v, double h) {
    std::vector<double> out(v.size());
    for (long j = 0; j < static_cast<long>(v.size()); ++j) out[static_cast<std::size_t>(j)] = d2_at(v, j, h);
    return out;
}

GeometryField geometry(const DiscreteCurve &curve, int n) {
    if (n < 1) throw Error(ErrorCode::InvalidSpec, "n must be >= 1");
    const auto pts = curve.points();
    const std::size_t count = pts.size();
    const double h = curve.dphi();

    GeometryField field;
    field.n = n;
    field.dphi = h;
    field.tangent.resize(count);
    field.nu.resize(count);
    field.e_r.resize(count);
    field.k.resize(count);
    field.r.resize(count);
    field.nu_dot_er.resize(count);
    field.f.resize(count);
    field.g.resize(count);
    field.dmu.resize(count);

    const double max_r = curve.max_radius();
    for (std::size_t j = 0; j < count; ++j) {
        const long jl = static_cast<long>(j);
        const Vec2 zp = d1_at(pts, jl, h);
        const Vec2 zpp = d2_at(pts, jl, h);
        const double speed = norm(zp);
        if (speed < kMinSegment) throw Error(ErrorCode::DegenerateSegment, "|z'| vanishes at node " + std::to_string(j));
        const Vec2 t = zp / speed;
        const Vec2 nu{t.y, -t.x};
        const double k = cross(zp, zpp) / (speed * speed * speed);
        const double r = norm(pts[j]);

        field.tangent[j] = t;
        field.nu[j] = nu;
        field.k[j] = k;
        field.r[j] = r;
        field.g[j] = speed * speed;
        field.dmu[j] = speed * h;

        if (r <= kOriginRelTol * max_r) {
            if (n >= 2) throw Error(ErrorCode::OriginContact, "node " + std::to_string(j) + " touches the origin");
            field.near_origin = true;
        }
        if (r > 0.0) {
            field.e_r[j] = pts[j] / r;
            field.nu_dot_er[j] = std::clamp(dot(nu, field.e_r[j]), -1.0, 1.0);
        } else {
            field.e_r[j] = {};
            field.nu_dot_er[j] = 0.0;
        }
        field.f[j] = (n == 1) ? k : k + (n - 1) * field.nu_dot_er[j] / r;
    }

    const bool starshaped =
        !field.near_origin && *std::min_element(field.nu_dot_er.begin(), field.nu_dot_er.end()) > 0.0;
    if (starshaped) {
        const int omega0 = winding_number(curve);
        if (omega0 != 0) {
            std::vector<double> beta(count);
            for (std::size_t j = 0; j < count; ++j) {
                const double radial = dot(field.tangent[j], field.e_r[j]);
                beta[j] = std::atan(radial / field.nu_dot_er[j]) / omega0;
            }
            field.beta = std::move(beta);
            field.beta_winding = omega0;
        }
    }
    return field;
}

double flow_velocity(std::span<const Vec2> pts, int n, std::span<Vec2> velocity) {
    const std::size_t count = pts.size();
    const double h = 2.0 * std::numbers::pi / static_cast<double>(count);
    const double c1 = 1.0 / (12.0 * h), c2 = 1.0 / (12.0 * h * h);
    // Two ghost nodes on each side avoid wrapping indices in the hot loop.
    thread_local std::vector<Vec2> pad;
    pad.resize(count + 4);
    pad[0] = pts[count - 2];
    pad[1] = pts[count - 1];
    std::copy(pts.begin(), pts.end(), pad.begin() + 2);
    pad[count + 2] = pts[0];
    pad[count + 3] = pts[1];
    double max_f = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        const Vec2 *z = pad.data() + j + 2;
        const Vec2 zp = (z[-2] - z[2] + 8.0 * (z[1] - z[-1])) * c1;
        const Vec2 zpp = (16.0 * (z[1] + z[-1]) - (z[2] + z[-2]) - 30.0 * z[0]) * c2;
        const double speed = std::sqrt(norm2(zp));
        if (!(speed >= kMinSegment)) throw Error(ErrorCode::DegenerateSegment, "|z'| vanishes at node " + std::to_string(j));
        const double inv = 1.0 / speed;
        const Vec2 nu{zp.y * inv, -zp.x * inv};
        double f = cross(zp, zpp) * (inv * inv * inv);
        if (n >= 2) {
            const double r2 = norm2(z[0]);
            if (!(r2 > 0.0)) throw Error(ErrorCode::OriginContact, "node " + std::to_string(j) + " reached the origin");
            f += (n - 1) * dot(nu, z[0]) / r2;
        }
        if (!std::isfinite(f)) throw Error(ErrorCode::BlowUp, "non-finite speed at node " + std::to_string(j));
        max_f = std::max(max_f, std::abs(f));
        velocity[j] = nu * (-f);
    }
    return max_f;
}

std::vector<double> arclength_derivative(const GeometryField &field, std::span<const double> v) {
    std::vector<double> out = periodic_d1(v, field.dphi);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] /= std::sqrt(field.g[j]);
    return out;
}

std::vector<double> arclength_laplacian(const GeometryField &field, std::span<const double> v) {
    const auto first = arclength_derivative(field, v);
    return arclength_derivative(field, first);
}

double integrate(const GeometryField &field, std::span<const double> v) {
    double total = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) total += v[j] * field.dmu[j];
    return total;
}

}  // namespace lagflow
