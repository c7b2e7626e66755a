#include "lagflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lagflow/error.hpp"
#include "lagflow/geometry.hpp"
#include "lagflow/io.hpp"
#include "lagflow/predicates.hpp"
#include "lagflow/resample.hpp"

namespace lagflow {

namespace {

constexpr double kMinStep = 1e-15;

void require(bool ok, const char *what) {
    if (!ok) throw Error(ErrorCode::InvalidSpec, what);
}

double min_segment(std::span<const Vec2> pts) {
    double h = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pts.size(); ++j) h = std::min(h, norm(pts[(j + 1) % pts.size()] - pts[j]));
    return h;
}

// z + c v, elementwise.
void axpy(std::span<const Vec2> z, double c, std::span<const Vec2> v, std::vector<Vec2> &out) {
    for (std::size_t j = 0; j < z.size(); ++j) out[j] = z[j] + v[j] * c;
}

struct Rk4Result {
    std::vector<Vec2> points;
    double dt;
};

// One classical RK4 step. When `dt` is unset it is chosen from the CFL rule
// using the first stage. A first-stage speed above `max_speed` aborts the step.
Rk4Result rk4(std::span<const Vec2> z, int n, std::optional<double> dt, double cfl,
              std::optional<double> dt_cap, double max_speed) {
    const std::size_t count = z.size();
    std::vector<Vec2> k1(count), k2(count), k3(count), k4(count), tmp(count);
    const double max_f = flow_velocity(z, n, k1);
    if (max_f > max_speed) {
        std::ostringstream msg;
        msg << "max|f| = " << max_f << " exceeds " << max_speed;
        throw Error(ErrorCode::BlowUp, msg.str());
    }
    double h = dt ? *dt : 0.0;
    if (!dt) {
        h = stable_time_step(cfl, min_segment(z), max_f);
        if (dt_cap) h = std::min(h, *dt_cap);
        if (!(h >= kMinStep)) {
            std::ostringstream msg;
            msg << "time step " << h << " below " << kMinStep;
            throw Error(ErrorCode::StepUnderflow, msg.str());
        }
    }
    axpy(z, 0.5 * h, k1, tmp);
    flow_velocity(tmp, n, k2);
    axpy(z, 0.5 * h, k2, tmp);
    flow_velocity(tmp, n, k3);
    axpy(z, h, k3, tmp);
    flow_velocity(tmp, n, k4);
    for (std::size_t j = 0; j < count; ++j) tmp[j] = z[j] + (k1[j] + (k2[j] + k3[j]) * 2.0 + k4[j]) * (h / 6.0);
    return {std::move(tmp), h};
}

// Chord lengths equal to 1e-10 relative: arclength resampling would be a no-op.
bool equispaced(const DiscreteCurve &curve) {
    const auto pts = curve.points();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        const double d = norm2(pts[j + 1] - pts[j]);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    const double d = norm2(pts.front() - pts.back());
    lo = std::min(lo, d);
    hi = std::max(hi, d);
    return hi <= lo * (1.0 + 2e-10);
}

DiscreteCurve adaptive_resample(const DiscreteCurve &curve, int n) {
    const auto field = geometry(curve, n);
    const std::size_t count = curve.size();
    double length = 0.0;
    for (double w : field.dmu) length += w;
    const double base = 2.0 * std::numbers::pi / length;
    std::vector<double> rho(count);
    for (std::size_t j = 0; j < count; ++j) {
        rho[j] = base + std::abs(field.k[j]);
        if (n >= 2) rho[j] += 1.0 / field.r[j];
    }
    // A few passes of the [1 2 1]/4 filter keep the node spacing graded.
    std::vector<double> next(count);
    for (int pass = 0; pass < 4; ++pass) {
        for (std::size_t j = 0; j < count; ++j)
            next[j] = 0.25 * rho[(j + count - 1) % count] + 0.5 * rho[j] + 0.25 * rho[(j + 1) % count];
        rho.swap(next);
    }
    return resample_density(curve, rho);
}

void record_sample(TrajectoryRecord &rec, const FlowState &state, std::optional<int> slope_index) {
    const auto &curve = state.curve;
    const auto field = geometry(curve, rec.n);
    const auto pred = predicates(curve, field, false);
    const double area = symplectic_area(field, curve);

    double max_f = 0.0, max_k = 0.0, proxy = 0.0;
    for (std::size_t j = 0; j < field.size(); ++j) {
        max_f = std::max(max_f, std::abs(field.f[j]));
        max_k = std::max(max_k, std::abs(field.k[j]));
        // |A|^2 = k^2 + 3(n-1) q^2, so this lies within a factor 3 of it.
        double a2 = field.k[j] * field.k[j];
        if (rec.n >= 2) {
            const double q = field.nu_dot_er[j] / field.r[j];
            a2 += (rec.n - 1) * q * q;
        }
        proxy = std::max(proxy, a2);
    }
    const auto [rmin, rmax] = std::minmax_element(field.r.begin(), field.r.end());

    rec.steps.push_back(state.steps);
    rec.times.push_back(state.t);
    rec.area.push_back(area);
    rec.eps_t.push_back(slope_index && area != 0.0 ? 2.0 * std::numbers::pi * *slope_index / area
                                                   : std::numeric_limits<double>::quiet_NaN());
    rec.min_r.push_back(*rmin);
    rec.max_r.push_back(*rmax);
    rec.max_abs_f.push_back(max_f);
    rec.max_abs_k.push_back(max_k);
    rec.harnack_ratio.push_back(*rmin > 0.0 ? *rmax / *rmin : std::numeric_limits<double>::infinity());
    rec.a_proxy_sq.push_back(proxy);
    rec.starshaped.push_back(pred.starshaped);
    rec.tamed.push_back(pred.tamed);
    rec.austere.push_back(pred.austere);
    rec.embedded.push_back(pred.embedded);
}

}  // namespace

const char *to_string(ResampleMode m) {
    return m == ResampleMode::Adaptive ? "adaptive" : "arclength";
}

const char *to_string(StopReason r) {
    switch (r) {
    case StopReason::MinRadius: return "min_r";
    case StopReason::MaxSpeed: return "max_f";
    case StopReason::Horizon: return "t_max";
    case StopReason::StepUnderflow: return "step_underflow";
    case StopReason::OriginContact: return "origin_contact";
    case StopReason::Resolution: return "resolution";
    case StopReason::StepBudget: return "step_budget";
    }
    return "unknown";
}

void FlowConfig::validate() const {
    require(n >= 1, "n must be >= 1");
    require(cfl > 0.0 && cfl <= 0.5, "cfl must lie in (0, 0.5]");
    require(resample_every >= 1, "resample_every must be positive");
    require(!stop_min_r || *stop_min_r > 0.0, "stop_min_r must be positive");
    require(stop_max_f > 0.0, "stop_max_f must be positive");
    require(!t_max || *t_max > 0.0, "t_max must be positive");
    require(resolution_floor >= 0.0 && resolution_floor < 1.0, "resolution_floor must lie in [0, 1)");
    require(record_every >= 1, "record_every must be positive");
    require(snapshot_every >= 0, "snapshot_every must be non-negative");
    require(max_steps >= 1, "max_steps must be positive");
}

double stable_time_step(double cfl, double h_min, double max_f) {
    return cfl * h_min * h_min / (1.0 + max_f * h_min);
}

FlowState step(const FlowState &state, const FlowConfig &config, std::optional<double> dt_cap) {
    auto [pts, dt] = rk4(state.curve.points(), config.n, std::nullopt, config.cfl, dt_cap, config.stop_max_f);
    DiscreteCurve next(std::move(pts), config.n);
    const long steps = state.steps + 1;
    if (steps % config.resample_every == 0 && !(config.resample == ResampleMode::Arclength && equispaced(next))) {
        next = config.resample == ResampleMode::Adaptive ? adaptive_resample(next, config.n)
                                                         : resample_arclength(next);
    }
    return FlowState{std::move(next), state.t + dt, dt, steps};
}

FlowState step_fixed(const FlowState &state, int n, double dt) {
    auto [pts, h] = rk4(state.curve.points(), n, dt, 0.0, std::nullopt, std::numeric_limits<double>::infinity());
    return FlowState{DiscreteCurve(std::move(pts), n), state.t + h, h, state.steps + 1};
}

RunResult run(const DiscreteCurve &initial, const FlowConfig &config) {
    config.validate();
    const DiscreteCurve start = initial.n() == config.n ? initial : initial.with_n(config.n);

    TrajectoryRecord rec;
    rec.n = config.n;
    {
        const auto field = geometry(start, config.n);
        rec.initial = topology(start, field, config.n);
    }
    const auto slope_index = rec.initial.area_slope_index(config.n);
    const double stop_r = config.stop_min_r.value_or(1e-3 * start.max_radius());

    FlowState state{start, 0.0, 0.0, 0};
    auto take_sample = [&](const FlowState &s) {
        record_sample(rec, s, slope_index);
        const std::size_t index = rec.size() - 1;
        if (index == 0 || (config.snapshot_every > 0 && index % static_cast<std::size_t>(config.snapshot_every) == 0)) {
            rec.snapshot_index.push_back(index);
            rec.snapshots.push_back(s.curve);
        }
    };
    take_sample(state);

    auto finish = [&](StopReason reason, std::string detail) {
        rec.stop = reason;
        rec.stop_detail = std::move(detail);
        if (rec.steps.back() != state.steps) take_sample(state);
        if (rec.snapshot_index.empty() || rec.snapshot_index.back() != rec.size() - 1) {
            rec.snapshot_index.push_back(rec.size() - 1);
            rec.snapshots.push_back(state.curve);
        }
        return RunResult{std::move(rec), std::move(state)};
    };

    while (true) {
        if (config.n >= 2 && state.curve.min_radius() < stop_r) {
            std::ostringstream msg;
            msg << "min r = " << state.curve.min_radius() << " below " << stop_r;
            return finish(StopReason::MinRadius, msg.str());
        }
        if (state.curve.min_segment() < config.resolution_floor * state.curve.max_radius()) {
            std::ostringstream msg;
            msg << "shortest segment " << state.curve.min_segment() << " below " << config.resolution_floor
                << " * max r";
            return finish(StopReason::Resolution, msg.str());
        }
        if (config.t_max && state.t >= *config.t_max * (1.0 - 1e-14))
            return finish(StopReason::Horizon, "reached t_max");
        if (state.steps >= config.max_steps) return finish(StopReason::StepBudget, "step budget exhausted");

        std::optional<double> cap;
        if (config.t_max) cap = *config.t_max - state.t;
        try {
            state = step(state, config, cap);
        } catch (const Error &e) {
            switch (e.code()) {
            case ErrorCode::BlowUp: return finish(StopReason::MaxSpeed, e.what());
            case ErrorCode::StepUnderflow: return finish(StopReason::StepUnderflow, e.what());
            case ErrorCode::OriginContact: return finish(StopReason::OriginContact, e.what());
            case ErrorCode::DegenerateSegment: return finish(StopReason::StepUnderflow, e.what());
            default: throw;
            }
        }
        if (state.steps % config.record_every == 0) take_sample(state);
    }
}

std::string trajectory_to_csv(const TrajectoryRecord &rec) {
    std::string out = "t,area,eps_t,min_r,max_r,max_abs_f,max_abs_k,harnack,starshaped,tamed,austere,embedded\n";
    for (std::size_t i = 0; i < rec.size(); ++i) {
        out += format_double(rec.times[i]);
        for (double v : {rec.area[i], rec.eps_t[i], rec.min_r[i], rec.max_r[i], rec.max_abs_f[i], rec.max_abs_k[i],
                         rec.harnack_ratio[i]}) {
            out += ',';
            out += format_double(v);
        }
        for (bool b : {rec.starshaped[i], rec.tamed[i], rec.austere[i], rec.embedded[i]}) out += b ? ",1" : ",0";
        out += '\n';
    }
    return out;
}

}  // namespace lagflow
