#include "lagflow/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lagflow/geometry.hpp"

namespace lagflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void scan(const std::vector<bool> &flags, const TrajectoryRecord &rec, const char *name,
          std::vector<PreservationViolation> &out) {
    if (flags.empty() || !flags.front()) return;
    PreservationViolation v{name, 0, 0.0, 0};
    for (std::size_t i = 1; i < flags.size(); ++i) {
        if (flags[i]) continue;
        if (v.count == 0) {
            v.first_index = i;
            v.first_t = rec.times[i];
        }
        ++v.count;
    }
    if (v.count) out.push_back(v);
}

double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

}  // namespace

InvariantReport invariant_monitor(const TrajectoryRecord &rec, const TopologyInfo &initial,
                                  std::optional<double> T_est) {
    InvariantReport out;
    if (rec.size() == 0) return out;
    const auto index = initial.area_slope_index(rec.n);
    const double a0 = rec.area.front();

    if (index) {
        double worst = 0.0;
        for (std::size_t i = 0; i < rec.size(); ++i)
            worst = std::max(worst, std::abs(rec.area[i] - a0 + kTwoPi * *index * rec.times[i]));
        out.area_law_residual = worst;
    }

    if (initial.eps_monotone) {
        const double eps0 = *initial.eps_monotone;
        double worst = 0.0;
        for (std::size_t i = 0; i < rec.size(); ++i) {
            const double t = rec.times[i];
            if (eps0 > 0.0 && t >= 0.9 / eps0) continue;
            const double predicted = eps0 / (1.0 - eps0 * t);
            worst = std::max(worst, std::abs(rec.eps_t[i] - predicted) / std::abs(predicted));
        }
        out.eps_law_residual = worst;
    }

    if (index && T_est && *index != 0) {
        const double target = kTwoPi * *index;
        double worst = 0.0;
        for (std::size_t i = 0; i < rec.size(); ++i) {
            const double t = rec.times[i];
            if (t > 0.9 * *T_est) continue;
            // 2 A~ with A~ = A / (2 (T - t)) the area of the rescaled curve.
            worst = std::max(worst, std::abs(target - rec.area[i] / (*T_est - t)) / std::abs(target));
        }
        out.hamiltonian_residual = worst;
    }

    scan(rec.tamed, rec, "tamed", out.preservation_violations);
    scan(rec.starshaped, rec, "starshaped", out.preservation_violations);
    scan(rec.austere, rec, "austere", out.preservation_violations);
    scan(rec.embedded, rec, "embedded", out.preservation_violations);
    return out;
}

EvolutionResiduals evolution_residuals(const FlowState &state, const FlowConfig &config) {
    const int n = config.n;
    const auto g0 = geometry(state.curve, n);
    double max_f = 0.0;
    for (double f : g0.f) max_f = std::max(max_f, std::abs(f));
    const double dt = stable_time_step(config.cfl, state.curve.min_segment(), max_f);

    const FlowState mid = step_fixed(state, n, dt);
    const FlowState last = step_fixed(mid, n, dt);
    const auto gm = geometry(state.curve, n);
    const auto gc = geometry(mid.curve, n);
    const auto gp = geometry(last.curve, n);
    const std::size_t count = gc.size();
    const double inv = 1.0 / (2.0 * dt);

    const auto grad_f = arclength_derivative(gc, gc.f);
    const auto lap_f = arclength_laplacian(gc, gc.f);
    const auto grad_r = arclength_derivative(gc, gc.r);
    const auto lap_r = arclength_laplacian(gc, gc.r);
    const auto grad_ne = arclength_derivative(gc, gc.nu_dot_er);
    const auto lap_ne = arclength_laplacian(gc, gc.nu_dot_er);

    std::vector<double> lhs_dmu(count), rhs_dmu(count), lhs_k(count), rhs_k(count), lhs_f(count), rhs_f(count),
        lhs_r(count), rhs_r(count), lhs_ne(count), rhs_ne(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double k = gc.k[j], f = gc.f[j], r = gc.r[j], ne = gc.nu_dot_er[j];
        lhs_dmu[j] = (gp.dmu[j] - gm.dmu[j]) * inv / gc.dmu[j];
        rhs_dmu[j] = -k * f;
        lhs_k[j] = (gp.k[j] - gm.k[j]) * inv;
        rhs_k[j] = lap_f[j] + f * k * k;
        lhs_f[j] = (gp.f[j] - gm.f[j]) * inv;
        rhs_f[j] = lap_f[j] + (n - 1) / r * grad_f[j] * grad_r[j] +
                   f * (k * k + (n - 1) / (r * r) * (2.0 * ne * ne - 1.0));
        lhs_r[j] = (gp.r[j] - gm.r[j]) * inv;
        rhs_r[j] = lap_r[j] + (n - 1) / r * grad_r[j] * grad_r[j] - ne * ne / r - (n - 1) / r;
        lhs_ne[j] = (gp.nu_dot_er[j] - gm.nu_dot_er[j]) * inv;
        const double bend = k - ne / r;
        rhs_ne[j] = lap_ne[j] + (n - 1) / r * grad_ne[j] * grad_r[j] - 2.0 * n * ne / (r * r) * (1.0 - ne * ne) +
                    bend * bend * ne;
    }

    EvolutionResiduals out;
    out.dt = dt;
    out.res_dmu = max_abs_diff(lhs_dmu, rhs_dmu);
    out.res_k = max_abs_diff(lhs_k, rhs_k);
    out.res_f = max_abs_diff(lhs_f, rhs_f);
    out.res_r = max_abs_diff(lhs_r, rhs_r);
    out.res_nuer = max_abs_diff(lhs_ne, rhs_ne);
    const double dA = (symplectic_area(gp, last.curve) - symplectic_area(gm, state.curve)) * inv;
    out.res_dA = std::abs(dA + integrate(gc, gc.f));
    return out;
}

}  // namespace lagflow
