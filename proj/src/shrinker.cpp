#include "lagflow/shrinker.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "lagflow/error.hpp"
#include "lagflow/io.hpp"

namespace lagflow {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 4>;  // x, y, theta, psi

constexpr int kMaxBisection = 200;

struct ProfileSystem {
    int n;
    double eps;
    void operator()(const State &u, State &du, double) const {
        const Vec2 z{u[0], u[1]};
        const Vec2 t{std::cos(u[2]), std::sin(u[2])};
        const Vec2 nu{t.y, -t.x};
        du[0] = t.x;
        du[1] = t.y;
        du[2] = shrinker_curvature(z, nu, n, eps);
        du[3] = cross(z, t) / norm2(z);
    }
};

using Stepper = odeint::dense_output_runge_kutta<
    odeint::controlled_runge_kutta<odeint::runge_kutta_dopri5<State>>>;

Stepper make_stepper(double tol) { return odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State>()); }

Vec2 position(const State &u) { return {u[0], u[1]}; }
Vec2 normal(const State &u) { return {std::sin(u[2]), -std::cos(u[2])}; }

double radial_slope(const State &u) {
    const Vec2 z = position(u);
    return dot(Vec2{std::cos(u[2]), std::sin(u[2])}, z) / norm(z);
}

// Smallest s in [a, b] where g changes sign, by bisection on the dense output.
template <class G>
double bisect_event(const Stepper &stepper, double a, double b, G g) {
    State u;
    stepper.calc_state(a, u);
    const bool neg_a = g(u) < 0.0;
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
        const double m = 0.5 * (a + b);
        stepper.calc_state(m, u);
        if ((g(u) < 0.0) == neg_a)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

State start_state(const ShrinkerSpec &spec) { return {spec.r_start, 0.0, 0.5 * std::numbers::pi, 0.0}; }

// Marches the profile until psi reaches psi_end; calls on_step(stepper, s0, s1)
// for every accepted step. Returns the arclength of the end point, or nullopt
// when the step budget runs out.
template <class OnStep>
std::optional<double> march(const ShrinkerSpec &spec, double psi_end, double tol, OnStep on_step) {
    const ProfileSystem sys{spec.n, spec.eps};
    Stepper stepper = make_stepper(tol);
    stepper.initialize(start_state(spec), 0.0, 1e-3 * spec.r_start);
    const double r_floor = 1e-9 * spec.r_start;
    for (int steps = 0; steps < spec.arc_steps; ++steps) {
        stepper.do_step(sys);
        const State &u = stepper.current_state();
        if (!(norm(position(u)) > r_floor)) {
            std::ostringstream msg;
            msg << "profile reached |z| = " << norm(position(u)) << " at s = " << stepper.current_time();
            throw Error(ErrorCode::OriginContact, msg.str());
        }
        const double s0 = stepper.previous_time(), s1 = stepper.current_time();
        if (u[3] >= psi_end) {
            const double s_end = bisect_event(stepper, s0, s1, [psi_end](const State &v) { return v[3] - psi_end; });
            on_step(stepper, s0, s_end);
            return s_end;
        }
        on_step(stepper, s0, s1);
    }
    return std::nullopt;
}

}  // namespace

void ShrinkerSpec::validate() const {
    if (n < 1) throw Error(ErrorCode::InvalidSpec, "n must be >= 1");
    if (!(eps != 0.0 && std::isfinite(eps))) throw Error(ErrorCode::InvalidSpec, "eps must be finite and nonzero");
    if (!(r_start > 0.0 && std::isfinite(r_start))) throw Error(ErrorCode::InvalidSpec, "r_start must be positive");
    if (arc_steps < 1) throw Error(ErrorCode::InvalidSpec, "arc_steps must be positive");
    if (lobes < 1) throw Error(ErrorCode::InvalidSpec, "lobes must be positive");
}

double shrinker_curvature(Vec2 z, Vec2 nu, int n, double eps) {
    const double r2 = norm2(z);
    if (!(r2 > 0.0)) throw Error(ErrorCode::OriginContact, "shrinker curvature is undefined at the origin");
    return (1.0 - 2.0 * (n - 1) / (eps * r2)) * 0.5 * eps * dot(z, nu);
}

double shrinker_first_integral(Vec2 z, Vec2 nu, int n, double eps) {
    const double r2 = norm2(z);
    const double f = 0.5 * eps * dot(z, nu);
    if (f == 0.0) return 0.0;
    // In log form: for eps < 0 the Gaussian factor overflows long before p does.
    return std::copysign(std::exp(std::log(std::abs(f)) - 0.25 * eps * r2 + 0.5 * (n - 1) * std::log(r2)), f);
}

ProfileResult integrate_profile(const ShrinkerSpec &spec, const ProfileOptions &options) {
    spec.validate();
    ProfileResult out;
    auto sample_of = [&](double s, const State &u) {
        const Vec2 z = position(u), nu = normal(u);
        return ProfileSample{s, z, u[2], u[3], shrinker_curvature(z, nu, spec.n, spec.eps),
                             shrinker_first_integral(z, nu, spec.n, spec.eps)};
    };
    auto k_of = [&](const State &u) { return shrinker_curvature(position(u), normal(u), spec.n, spec.eps); };

    out.samples.push_back(sample_of(0.0, start_state(spec)));
    const double p0 = out.samples.front().p;
    State last = start_state(spec);
    const auto end = march(spec, options.psi_end, options.tolerance, [&](const Stepper &st, double s0, double s1) {
        State u0, u1;
        st.calc_state(s0, u0);
        st.calc_state(s1, u1);
        if ((k_of(u0) < 0.0) != (k_of(u1) < 0.0)) {
            const double sk = bisect_event(st, s0, s1, k_of);
            State uk;
            st.calc_state(sk, uk);
            out.k_sign_change_radii.push_back(norm(position(uk)));
        }
        out.samples.push_back(sample_of(s1, u1));
        out.p_drift = std::max(out.p_drift, std::abs(out.samples.back().p - p0) / std::abs(p0));
        last = u1;
    });
    if (!end && !options.allow_open) {
        std::ostringstream msg;
        msg << "profile did not reach polar angle " << options.psi_end << " within " << spec.arc_steps << " steps";
        throw Error(ErrorCode::NoReturn, msg.str());
    }
    out.returned = end.has_value();
    out.end_radial_slope = radial_slope(last);
    return out;
}

double closure_defect(const ShrinkerSpec &spec) {
    ProfileOptions opt;
    opt.psi_end = std::numbers::pi * spec.target_rot_wind.second / spec.lobes;
    return integrate_profile(spec, opt).end_radial_slope;
}

ShrinkerResult shoot_closed(int n, double eps, std::pair<int, int> target, int lobes,
                            std::pair<double, double> bracket, std::size_t nodes) {
    ShrinkerSpec spec;
    spec.n = n;
    spec.eps = eps;
    spec.target_rot_wind = target;
    spec.lobes = lobes;
    spec.r_start = bracket.first;
    spec.validate();
    if (target.first != target.second || target.second < 1)
        throw Error(ErrorCode::InvalidSpec, "closed starshaped profiles need rot == wind >= 1");
    if (!(bracket.first > 0.0 && bracket.first < bracket.second))
        throw Error(ErrorCode::InvalidSpec, "bracket must satisfy 0 < lo < hi");
    if (nodes < kMinNodes) throw Error(ErrorCode::InvalidSpec, "too few nodes");

    auto defect_at = [&](double r) {
        ShrinkerSpec s = spec;
        s.r_start = r;
        try {
            return closure_defect(s);
        } catch (const Error &e) {
            if (e.code() == ErrorCode::NoReturn || e.code() == ErrorCode::OriginContact)
                throw Error(ErrorCode::NoRoot, std::string("bracket end point fails: ") + e.what());
            throw;
        }
    };
    double lo = bracket.first, hi = bracket.second;
    double d_lo = defect_at(lo);
    const double d_hi = defect_at(hi);
    if ((d_lo < 0.0) == (d_hi < 0.0) && d_lo != 0.0 && d_hi != 0.0) {
        std::ostringstream msg;
        msg << "closure defect has the same sign at both ends (" << d_lo << ", " << d_hi << ")";
        throw Error(ErrorCode::NoRoot, msg.str());
    }
    int it = 0;
    double mid = d_lo == 0.0 ? lo : (d_hi == 0.0 ? hi : 0.5 * (lo + hi));
    if (d_lo != 0.0 && d_hi != 0.0) {
        for (; it < kMaxBisection && hi - lo > 4e-16 * hi; ++it) {
            mid = 0.5 * (lo + hi);
            const double d = defect_at(mid);
            if (d == 0.0) break;
            if ((d < 0.0) == (d_lo < 0.0)) {
                lo = mid;
                d_lo = d;
            } else {
                hi = mid;
            }
        }
        mid = 0.5 * (lo + hi);
    }
    spec.r_start = mid;

    // Whole curve: polar angle 0 .. 2 pi wind.
    const double psi_full = 2.0 * std::numbers::pi * target.second;
    State end_state{};
    const auto length = march(spec, psi_full, 1e-12, [&](const Stepper &st, double, double s1) {
        st.calc_state(s1, end_state);
    });
    if (!length) throw Error(ErrorCode::NotClosed, "profile does not complete the target winding");
    const double gap = norm(position(end_state) - position(start_state(spec)));
    if (gap > 1e-6) {
        std::ostringstream msg;
        msg << "closure gap " << gap << " after " << it << " bisection steps";
        throw Error(ErrorCode::NotClosed, msg.str());
    }

    std::vector<Vec2> pts(nodes);
    std::size_t next = 0;
    const double L = *length;
    march(spec, psi_full, 1e-12, [&](const Stepper &st, double, double s1) {
        State u;
        while (next < nodes && L * static_cast<double>(next) / static_cast<double>(nodes) <= s1) {
            st.calc_state(L * static_cast<double>(next) / static_cast<double>(nodes), u);
            pts[next++] = position(u);
        }
    });
    if (next != nodes) throw Error(ErrorCode::NotClosed, "sampling pass ended early");

    ShrinkerResult res{spec, DiscreteCurve(pts, n), 0.0, gap, 0.0, 0.0, it};
    const State u0 = start_state(spec);
    res.p_value = shrinker_first_integral(position(u0), normal(u0), n, eps);
    res.r_min = res.curve.min_radius();
    res.r_max = res.curve.max_radius();
    return res;
}

std::string shrinker_catalogue_csv(const std::vector<ShrinkerResult> &rows) {
    std::string out = "n,eps,rot,wind,r_min,r_max,p_value\n";
    for (const auto &r : rows) {
        out += std::to_string(r.spec.n) + ',' + format_double(r.spec.eps) + ',' +
               std::to_string(r.spec.target_rot_wind.first) + ',' + std::to_string(r.spec.target_rot_wind.second) +
               ',' + format_double(r.r_min) + ',' + format_double(r.r_max) + ',' + format_double(r.p_value) + '\n';
    }
    return out;
}

}  // namespace lagflow
