#include "lagflow/identities.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lagflow/error.hpp"

namespace lagflow {

namespace {

double max_abs(const std::vector<double> &v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Least-squares fit of y = c0 + c1 x + c2 x^2; returns c0. Falls back to
// fewer terms when there are not enough points.
double fit_intercept(const std::vector<double> &x, const std::vector<double> &y) {
    const std::size_t terms = std::min<std::size_t>(3, x.size());
    if (terms == 0) return 0.0;
    if (terms == 1) return y[0];
    std::array<std::array<double, 4>, 3> a{};
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::array<double, 3> row{1.0, x[i], x[i] * x[i]};
        for (std::size_t r = 0; r < terms; ++r) {
            for (std::size_t c = 0; c < terms; ++c) a[r][c] += row[r] * row[c];
            a[r][3] += row[r] * y[i];
        }
    }
    // Gaussian elimination with partial pivoting on the normal equations.
    for (std::size_t c = 0; c < terms; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < terms; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        for (std::size_t r = c + 1; r < terms; ++r) {
            const double m = a[r][c] / a[c][c];
            for (std::size_t k = c; k < 4; ++k) a[r][k] -= m * a[c][k];
        }
    }
    std::array<double, 3> sol{};
    for (std::size_t r = terms; r-- > 0;) {
        double s = a[r][3];
        for (std::size_t k = r + 1; k < terms; ++k) s -= a[r][k] * sol[k];
        sol[r] = s / a[r][r];
    }
    return sol[0];
}

}  // namespace

NearOriginRatio near_origin_ratio(const DiscreteCurve &curve, const GeometryField &field, int window) {
    const long count = static_cast<long>(curve.size());
    window = std::clamp(window, 3, static_cast<int>(count / 2 - 1));
    const auto it = std::min_element(field.r.begin(), field.r.end());
    const long center = it - field.r.begin();
    const double floor_r = 1e-6 * *std::max_element(field.r.begin(), field.r.end());

    auto idx = [count](long j) { return static_cast<std::size_t>(((j % count) + count) % count); };
    auto ratio_at = [&](long j) { return field.nu_dot_er[idx(j)] / field.r[idx(j)]; };
    auto valid = [&](long j) { return field.r[idx(j)] > floor_r; };

    NearOriginRatio out;
    out.center = static_cast<std::size_t>(center);
    std::vector<double> s2, avg;
    if (valid(center)) {
        s2.push_back(0.0);
        avg.push_back(ratio_at(center));
    }
    double s_plus = 0.0, s_minus = 0.0;
    for (long m = -window; m <= window; ++m) {
        if (valid(center + m)) {
            out.offsets.push_back(m);
            out.ratio.push_back(ratio_at(center + m));
        }
    }
    for (long m = 1; m <= window; ++m) {
        // Arclength from the center node, trapezoidal in dmu.
        s_plus += 0.5 * (field.dmu[idx(center + m - 1)] + field.dmu[idx(center + m)]);
        s_minus += 0.5 * (field.dmu[idx(center - m + 1)] + field.dmu[idx(center - m)]);
        if (!valid(center + m) || !valid(center - m)) continue;
        const double s = 0.5 * (s_plus + s_minus);
        s2.push_back(s * s);
        avg.push_back(0.5 * (ratio_at(center + m) + ratio_at(center - m)));
    }
    out.limit = fit_intercept(s2, avg);
    return out;
}

double polar_identity_residual(const GeometryField &field) {
    if (!field.beta || !field.beta_winding)
        throw Error(ErrorCode::NotStarshaped, "beta is only defined on starshaped curves");
    const double omega0 = *field.beta_winding;
    const auto grad_beta = arclength_derivative(field, *field.beta);
    double worst = 0.0;
    for (std::size_t j = 0; j < field.size(); ++j) {
        // Speed of the polar parametrization, from <z,nu>/|z|^2 = omega0/sqrt(g).
        const double sqrt_g = omega0 * field.r[j] / field.nu_dot_er[j];
        const double beta_prime = sqrt_g * grad_beta[j];
        worst = std::max(worst, std::abs(field.f[j] * sqrt_g - omega0 * (field.n - beta_prime)));
    }
    return worst;
}

IdentityResiduals identity_residuals(const DiscreteCurve &, const GeometryField &field) {
    const auto grad_r = arclength_derivative(field, field.r);
    const auto lap_r = arclength_laplacian(field, field.r);
    const auto grad_nuer = arclength_derivative(field, field.nu_dot_er);

    std::vector<double> a(field.size()), b(field.size()), c(field.size());
    for (std::size_t j = 0; j < field.size(); ++j) {
        const double ne = field.nu_dot_er[j], r = field.r[j], k = field.k[j];
        a[j] = 1.0 - grad_r[j] * grad_r[j] - ne * ne;
        b[j] = lap_r[j] - ne * (ne / r - k);
        c[j] = grad_nuer[j] - (k - ne / r) * grad_r[j];
    }
    IdentityResiduals out{max_abs(a), max_abs(b), max_abs(c), std::nullopt};
    if (field.beta) out.res_polar = polar_identity_residual(field);
    return out;
}

}  // namespace lagflow
