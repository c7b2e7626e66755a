#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "lagflow/error.hpp"
#include "lagflow/flow.hpp"
#include "lagflow/geometry.hpp"
#include "lagflow/monitor.hpp"
#include "lagflow/predicates.hpp"
#include "lagflow/singularity.hpp"
#include "lagflow/topology.hpp"
#include "support.hpp"

using namespace lagflow;
using namespace testsupport;

namespace {

double max_radius_error(const DiscreteCurve &c, Vec2 center, double R) {
    double e = 0.0;
    for (Vec2 p : c.points()) e = std::max(e, std::abs(norm(p - center) - R));
    return e;
}

Vec2 rotated(Vec2 p, double a) {
    return {std::cos(a) * p.x - std::sin(a) * p.y, std::sin(a) * p.x + std::cos(a) * p.y};
}

// A record with the given times and a_proxy_sq, everything else benign.
TrajectoryRecord synthetic(const std::vector<double> &t, const std::vector<double> &a2) {
    TrajectoryRecord r;
    r.n = 2;
    for (std::size_t i = 0; i < t.size(); ++i) {
        r.steps.push_back(static_cast<long>(i));
        r.times.push_back(t[i]);
        r.area.push_back(1.0);
        r.eps_t.push_back(1.0);
        r.min_r.push_back(1.0);
        r.max_r.push_back(1.0);
        r.max_abs_f.push_back(std::sqrt(a2[i]));
        r.max_abs_k.push_back(std::sqrt(a2[i]));
        r.harnack_ratio.push_back(1.0);
        r.a_proxy_sq.push_back(a2[i]);
        r.starshaped.push_back(true);
        r.tamed.push_back(true);
        r.austere.push_back(true);
        r.embedded.push_back(true);
    }
    return r;
}

}  // namespace

TEST_CASE("config validation") {
    FlowConfig ok;
    CHECK_NOTHROW(ok.validate());
    auto bad = [](auto mutate) {
        FlowConfig c;
        mutate(c);
        return code_of([&] { c.validate(); });
    };
    CHECK(bad([](FlowConfig &c) { c.n = 0; }) == ErrorCode::InvalidSpec);
    CHECK(bad([](FlowConfig &c) { c.cfl = 0.0; }) == ErrorCode::InvalidSpec);
    CHECK(bad([](FlowConfig &c) { c.cfl = 0.51; }) == ErrorCode::InvalidSpec);
    CHECK(bad([](FlowConfig &c) { c.resample_every = 0; }) == ErrorCode::InvalidSpec);
    CHECK(bad([](FlowConfig &c) { c.record_every = 0; }) == ErrorCode::InvalidSpec);
    CHECK(bad([](FlowConfig &c) { c.stop_min_r = -1.0; }) == ErrorCode::InvalidSpec);
    CHECK(bad([](FlowConfig &c) { c.t_max = 0.0; }) == ErrorCode::InvalidSpec);
    CHECK(bad([](FlowConfig &c) { c.stop_max_f = 0.0; }) == ErrorCode::InvalidSpec);
}

TEST_CASE("one step of the unit circle matches the exact radius") {
    SUBCASE("n = 2 about the origin") {
        FlowConfig cfg;
        cfg.n = 2;
        const FlowState s1 = step(FlowState{circle(256, 2), 0.0, 0.0, 0}, cfg);
        CHECK(s1.dt_last > 0.0);
        CHECK(s1.t == s1.dt_last);
        CHECK(s1.steps == 1);
        CHECK(max_radius_error(s1.curve, {0.0, 0.0}, std::sqrt(1.0 - 4.0 * s1.dt_last)) < 1e-8);
    }
    SUBCASE("n = 1 at (3, 0) is curve shortening") {
        FlowConfig cfg;
        cfg.n = 1;
        const FlowState s1 = step(FlowState{circle(256, 1, 1.0, {3.0, 0.0}), 0.0, 0.0, 0}, cfg);
        CHECK(max_radius_error(s1.curve, {3.0, 0.0}, std::sqrt(1.0 - 2.0 * s1.dt_last)) < 1e-8);
    }
    SUBCASE("n = 3 with a fixed step") {
        const double dt = 1e-5;
        const FlowState s1 = step_fixed(FlowState{circle(256, 3), 0.0, 0.0, 0}, 3, dt);
        CHECK(max_radius_error(s1.curve, {0.0, 0.0}, std::sqrt(1.0 - 6.0 * dt)) < 1e-8);
    }
}

TEST_CASE("rotation commutes with a step") {
    const DiscreteCurve c = polar_wave(256, 2, 0.05, 3);
    const double angle = 0.7;
    std::vector<Vec2> rot;
    for (Vec2 p : c.points()) rot.push_back(rotated(p, angle));
    FlowConfig cfg;
    cfg.n = 2;
    cfg.resample_every = 1;  // exercise the resampler as well
    const FlowState a = step(FlowState{c, 0.0, 0.0, 0}, cfg);
    const FlowState b = step(FlowState{DiscreteCurve(rot, 2), 0.0, 0.0, 0}, cfg);
    CHECK(a.dt_last == doctest::Approx(b.dt_last).epsilon(1e-12));
    double err = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j)
        err = std::max(err, norm(rotated(a.curve.points()[j], angle) - b.curve.points()[j]));
    CHECK(err < 1e-12);
}

TEST_CASE("step errors") {
    FlowConfig cfg;
    cfg.n = 2;
    SUBCASE("origin contact for n >= 2") {
        std::vector<Vec2> pts(circle(64, 2, 0.5, {0.5, 0.0}).points().begin(),
                              circle(64, 2, 0.5, {0.5, 0.0}).points().end());
        pts[32] = {0.0, 0.0};
        CHECK(code_of([&] { step(FlowState{DiscreteCurve(pts, 2), 0.0, 0.0, 0}, cfg); }) ==
              ErrorCode::OriginContact);
    }
    SUBCASE("speed above the blow-up threshold") {
        cfg.stop_max_f = 1.5;  // the unit circle has f = 2
        CHECK(code_of([&] { step(FlowState{circle(64, 2), 0.0, 0.0, 0}, cfg); }) == ErrorCode::BlowUp);
    }
    SUBCASE("time step underflow on a tiny segment") {
        const DiscreteCurve base = circle(64, 2);
        std::vector<Vec2> pts(base.points().begin(), base.points().end());
        pts[1] = pts[0] + (pts[1] - pts[0]) * 1e-9;
        CHECK(code_of([&] { step(FlowState{DiscreteCurve(pts, 2), 0.0, 0.0, 0}, cfg); }) ==
              ErrorCode::StepUnderflow);
    }
}

TEST_CASE("stable time step") {
    CHECK(stable_time_step(0.2, 0.1, 0.0) == doctest::Approx(0.002));
    CHECK(stable_time_step(0.2, 0.1, 10.0) == doctest::Approx(0.001));
}

TEST_CASE("unit circle, n = 2, collapses at t = 1/4") {
    FlowConfig cfg;
    cfg.n = 2;
    const DiscreteCurve c0 = circle(256, 2);
    const RunResult res = run(c0, cfg);
    const TrajectoryRecord &r = res.record;
    CHECK(r.stop == StopReason::MinRadius);
    CHECK(std::abs(res.final_state.t - 0.25) < 5e-3);
    CHECK(r.min_r.back() <= 1e-3 * 1.0 + 1e-15);
    CHECK(r.times.back() == res.final_state.t);
    REQUIRE(r.size() > 20);
    CHECK(r.area.size() == r.size());
    CHECK(r.embedded.size() == r.size());
    CHECK(r.snapshots.size() == 2);
    CHECK(r.snapshot_index.front() == 0);
    CHECK(r.snapshot_index.back() == r.size() - 1);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r.times[i] > r.times[i - 1]);
    // A(t) = pi (1 - 4t); eps_t = 4 / (1 - 4t).
    for (std::size_t i = 0; i < r.size(); i += 10) {
        CHECK(r.area[i] == doctest::Approx(kPi * (1.0 - 4.0 * r.times[i])).epsilon(1e-6));
        if (r.times[i] < 0.2) CHECK(r.eps_t[i] == doctest::Approx(4.0 / (1.0 - 4.0 * r.times[i])).epsilon(1e-6));
    }

    SUBCASE("singularity report") {
        const SingularityReport rep = estimate_singularity(r);
        CHECK(rep.cls == SingularityClass::C1);
        CHECK(rep.type1);
        CHECK(rep.curvature_blowup);
        CHECK(rep.reaches_origin);
        CHECK(std::abs(rep.T_est - 0.25) < 5e-3);
        CHECK(rep.T_est >= r.times.back());
        // k^2 + (ne/r)^2 = 2/R^2 and R^2 = 4 (T - t): A^2 (T - t) = 1/2.
        CHECK(rep.fit_c == doctest::Approx(0.5).epsilon(1e-2));
        double lo = 1e300, hi = 0.0;
        for (double m : rep.m_tail) lo = std::min(lo, m), hi = std::max(hi, m);
        CHECK(hi <= 1.2 * lo);
        CHECK(rep.rescaled_sup.size() == r.size());
        const std::string js = report_to_json(rep);
        CHECK(js.find("\"class\": \"C1\"") != std::string::npos);
        CHECK(js.find("\"type1\": true") != std::string::npos);
    }
    SUBCASE("invariant monitor") {
        const InvariantReport m = invariant_monitor(r, r.initial, 0.25);
        REQUIRE(m.area_law_residual);
        CHECK(*m.area_law_residual < 1e-3);
        REQUIRE(m.eps_law_residual);
        CHECK(*m.eps_law_residual < 1e-2);
        REQUIRE(m.hamiltonian_residual);
        CHECK(*m.hamiltonian_residual < 1e-3);
        CHECK(m.preservation_violations.empty());
    }
    SUBCASE("trajectory csv") {
        const std::string csv = trajectory_to_csv(r);
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        CHECK(line == "t,area,eps_t,min_r,max_r,max_abs_f,max_abs_k,harnack,starshaped,tamed,austere,embedded");
        std::size_t rows = 0;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == r.size());
    }
}

TEST_CASE("parabolic scaling of the lifetime") {
    FlowConfig cfg;
    cfg.n = 2;
    const double t1 = run(circle(128, 2, 1.0), cfg).final_state.t;
    const double t2 = run(circle(128, 2, 2.0), cfg).final_state.t;
    CHECK(t2 == doctest::Approx(4.0 * t1).epsilon(1e-5));
}

TEST_CASE("circle away from the origin, n = 1") {
    FlowConfig cfg;
    cfg.n = 1;
    const RunResult res = run(circle(128, 1, 1.0, {3.0, 0.0}), cfg);
    CHECK(std::abs(res.final_state.t - 0.5) < 5e-3);
    CHECK(res.record.min_r.back() > 2.9);
    const SingularityReport rep = estimate_singularity(res.record);
    CHECK(rep.cls == SingularityClass::C2);
    CHECK(rep.type1);
    CHECK_FALSE(rep.reaches_origin);
}

TEST_CASE("lemniscate, n = 1, keeps zero area") {
    FlowConfig cfg;
    cfg.n = 1;
    // Half-step shift keeps nodes off the crossing.
    const DiscreteCurve c = sample(256, 1, [](double p) {
        const double t = p + kPi / 256.0, d = 1.0 + std::sin(t) * std::sin(t);
        return Vec2{std::cos(t) / d, std::sin(t) * std::cos(t) / d};
    });
    const RunResult res = run(c, cfg);
    CHECK(max_abs(res.record.area) < 1e-3);
    for (double e : res.record.eps_t) CHECK(std::isnan(e));
}

TEST_CASE("stop reasons") {
    FlowConfig cfg;
    cfg.n = 2;
    SUBCASE("horizon lands exactly on t_max") {
        cfg.t_max = 0.01;
        const RunResult res = run(circle(64, 2), cfg);
        CHECK(res.record.stop == StopReason::Horizon);
        CHECK(res.final_state.t == 0.01);
    }
    SUBCASE("step budget") {
        cfg.max_steps = 10;
        const RunResult res = run(circle(64, 2), cfg);
        CHECK(res.record.stop == StopReason::StepBudget);
        CHECK(res.final_state.steps == 10);
    }
    SUBCASE("max speed") {
        cfg.stop_max_f = 20.0;
        const RunResult res = run(circle(64, 2), cfg);
        CHECK(res.record.stop == StopReason::MaxSpeed);
        // The recorded final state is the one that tripped the threshold.
        CHECK(res.record.max_abs_f.back() > 20.0);
        CHECK(res.record.max_abs_f.back() < 21.0);
    }
    CHECK(std::string(to_string(StopReason::MinRadius)) == "min_r");
    CHECK(std::string(to_string(StopReason::Resolution)) == "resolution");
}

TEST_CASE("estimate_singularity errors and verdicts") {
    SUBCASE("too few samples") {
        CHECK(code_of([] { estimate_singularity(synthetic({0, 1, 2}, {1, 100, 1000})); }) ==
              ErrorCode::InsufficientBlowup);
    }
    SUBCASE("no growth") {
        std::vector<double> t, a;
        for (int i = 0; i < 40; ++i) t.push_back(i), a.push_back(1.0);
        CHECK(code_of([&] { estimate_singularity(synthetic(t, a)); }) == ErrorCode::InsufficientBlowup);
    }
    SUBCASE("exact type-1 law") {
        std::vector<double> t, a;
        for (int i = 0; i < 100; ++i) {
            t.push_back(1.0 - std::pow(0.9, i));
            a.push_back(3.0 / (1.0 - t.back()));
        }
        const SingularityReport rep = estimate_singularity(synthetic(t, a));
        CHECK(rep.T_est == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(rep.fit_c == doctest::Approx(3.0).epsilon(1e-6));
        CHECK(rep.type1);
        CHECK(rep.cls == SingularityClass::C2);
    }
    SUBCASE("faster than type-1") {
        std::vector<double> t, a;
        for (int i = 0; i < 100; ++i) {
            t.push_back(1.0 - std::pow(0.85, i));
            a.push_back(1.0 / std::pow(1.0 - t.back(), 2.0));
        }
        const SingularityReport rep = estimate_singularity(synthetic(t, a));
        CHECK_FALSE(rep.type1);
        CHECK(rep.tail_growth > 5.0);
    }
    SUBCASE("non-finite values are null in JSON") {
        SingularityReport rep;
        rep.T_est = std::numeric_limits<double>::quiet_NaN();
        rep.m_tail = {1.0, std::numeric_limits<double>::infinity()};
        const std::string js = report_to_json(rep);
        CHECK(js.find("\"T_est\": null") != std::string::npos);
        CHECK(js.find("null]") != std::string::npos);
    }
}

TEST_CASE("Huisken rescaling") {
    SUBCASE("exact circle solution maps to radius sqrt(n)") {
        for (int n : {1, 2, 3}) {
            const double T = 0.3, t = 0.2;
            const double R = std::sqrt(2.0 * n * (T - t));
            const RescaledCurve rc = rescale_huisken(FlowState{circle(128, n, R), t, 0.0, 0}, T);
            CHECK(max_radius_error(rc.curve, {0.0, 0.0}, std::sqrt(n)) < 1e-6);
            CHECK(rc.s == doctest::Approx(-0.5 * std::log(T - t)));
            // Rescaled area is pi n.
            const TopologyInfo tp = topology(rc.curve, geometry(rc.curve));
            CHECK(tp.area == doctest::Approx(kPi * n).epsilon(1e-6));
        }
    }
    SUBCASE("unit factor when 2 (T - t) = 1") {
        const DiscreteCurve c = polar_wave(64, 2, 0.1, 3);
        const RescaledCurve rc = rescale_huisken(FlowState{c, 1.0, 0.0, 0}, 1.5);
        for (std::size_t j = 0; j < c.size(); ++j) {
            CHECK(rc.curve.points()[j].x == c.points()[j].x);
            CHECK(rc.curve.points()[j].y == c.points()[j].y);
        }
        CHECK(rc.s == doctest::Approx(0.5 * std::log(2.0)));
    }
    SUBCASE("horizon not in the future") {
        const FlowState s{circle(64, 2), 0.5, 0.0, 0};
        CHECK(code_of([&] { rescale_huisken(s, 0.5); }) == ErrorCode::BadHorizon);
        CHECK(code_of([&] { rescale_huisken(s, 0.1); }) == ErrorCode::BadHorizon);
    }
}

TEST_CASE("invariant monitor on synthetic records") {
    TrajectoryRecord r = synthetic({0.0, 0.1, 0.2, 0.3}, {1, 1, 1, 1});
    r.initial = topology(circle(64, 2), geometry(circle(64, 2)));
    r.tamed = {true, true, false, false};
    r.embedded = {false, true, false, false};  // not true at t = 0: never reported
    const InvariantReport m = invariant_monitor(r, r.initial);
    REQUIRE(m.preservation_violations.size() == 1);
    CHECK(m.preservation_violations[0].property == "tamed");
    CHECK(m.preservation_violations[0].first_index == 2);
    CHECK(m.preservation_violations[0].first_t == 0.2);
    CHECK(m.preservation_violations[0].count == 2);
    CHECK_FALSE(m.hamiltonian_residual);
}

TEST_CASE("evolution residuals") {
    FlowConfig cfg;
    cfg.n = 2;
    SUBCASE("circle") {
        const EvolutionResiduals e = evolution_residuals(FlowState{circle(512, 2), 0.0, 0.0, 0}, cfg);
        CHECK(e.res_k < 1e-4);
        CHECK(e.res_dA < 1e-6);
        CHECK(e.dt > 0.0);
    }
    SUBCASE("order under refinement") {
        for (int n : {2, 3}) {
            cfg.n = n;
            const auto e1 = evolution_residuals(FlowState{polar_wave(256, n, 0.1, 3), 0.0, 0.0, 0}, cfg);
            const auto e2 = evolution_residuals(FlowState{polar_wave(512, n, 0.1, 3), 0.0, 0.0, 0}, cfg);
            CHECK(e2.res_dmu <= 0.25 * e1.res_dmu);
            CHECK(e2.res_k <= 0.25 * e1.res_k);
            CHECK(e2.res_f <= 0.25 * e1.res_f);
            CHECK(e2.res_r <= 0.25 * e1.res_r);
            CHECK(e2.res_nuer <= 0.25 * e1.res_nuer);
            // dA/dt is constant along the flow and the quadrature is spectral,
            // so this one sits at rounding level on both grids.
            CHECK(std::max(e1.res_dA, e2.res_dA) < 1e-9);
        }
    }
}

TEST_CASE("curvature proxy is norm-equivalent to |A|^2") {
    // |A|^2 from the components h_000 and h_0ij = (u v' - v u') sigma_ij in an
    // orthonormal frame; full symmetry of h counts h_0ii three times.
    const double a = 1.7, b = 0.6;
    const std::size_t N = 512;
    for (int n : {2, 3, 5}) {
        const DiscreteCurve z = ellipse(N, n, a, b);
        const GeometryField g = geometry(z);
        for (std::size_t j = 0; j < N; ++j) {
            const double p = z.param(j);
            const double u = a * std::cos(p), v = b * std::sin(p);
            const double du = -a * std::sin(p), dv = b * std::cos(p), ddu = -u, ddv = -v;
            const double g00 = du * du + dv * dv, r2 = u * u + v * v;
            const double h000 = du * ddv - dv * ddu, h0 = u * dv - v * du;
            const double k2 = h000 * h000 / (g00 * g00 * g00), q2 = h0 * h0 / (g00 * r2 * r2);
            const double full = k2 + 3.0 * (n - 1) * q2;
            const double proxy = g.k[j] * g.k[j] + (n - 1) * std::pow(g.nu_dot_er[j] / g.r[j], 2);
            CHECK(std::abs(k2 - g.k[j] * g.k[j]) < 1e-6 * k2);
            CHECK(proxy <= full * (1.0 + 1e-6));
            CHECK(full <= 3.0 * proxy * (1.0 + 1e-6));
        }
    }
}
