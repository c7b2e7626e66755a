#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lagflow/curve.hpp"
#include "lagflow/vec2.hpp"

namespace lagflow {

/// Candidate self-similar profile: f = (eps/2) <z, nu>, started at (r_start, 0)
/// with tangent angle pi/2.
struct ShrinkerSpec {
    int n = 2;
    double eps = 4.0;
    double r_start = 1.0;
    // Budget of accepted integrator steps.
    int arc_steps = 200000;
    // Closed starshaped curves have rot == wind.
    std::pair<int, int> target_rot_wind{1, 1};
    // Radial oscillations (maxima of r) per closed curve.
    int lobes = 1;

    // Throws InvalidSpec.
    void validate() const;
};

/// k = (1 - 2 (n-1)/(eps |z|^2)) (eps/2) <z, nu>. Throws OriginContact at z = 0.
double shrinker_curvature(Vec2 z, Vec2 nu, int n, double eps);
inline double shrinker_curvature(Vec2 z, Vec2 nu, const ShrinkerSpec &spec) {
    return shrinker_curvature(z, nu, spec.n, spec.eps);
}

// p = f e^{-eps |z|^2 / 4} |z|^{n-1}; constant along every solution.
double shrinker_first_integral(Vec2 z, Vec2 nu, int n, double eps);

struct ProfileSample {
    double s = 0.0;      // arclength
    Vec2 z;
    double theta = 0.0;  // tangent angle
    double psi = 0.0;    // unwrapped polar angle
    double k = 0.0;
    double p = 0.0;
};

struct ProfileOptions {
    // Stop when the polar angle reaches this value (pi: back on the axis).
    double psi_end = 3.14159265358979323846;
    // Return the open arc instead of throwing NoReturn when the budget runs out.
    bool allow_open = false;
    double tolerance = 1e-12;
};

struct ProfileResult {
    std::vector<ProfileSample> samples;  // one per accepted step, plus the end point
    bool returned = false;               // psi_end was reached
    double p_drift = 0.0;                // max |p(s) - p(0)| / |p(0)|
    // <T, e_r> at the end point; zero when the arc ends at a radial extremum.
    double end_radial_slope = 0.0;
    // |z| where k changes sign, located by bisection on the dense output.
    std::vector<double> k_sign_change_radii;
};

/// Integrates x' = cos theta, y' = sin theta, theta' = k with adaptive
/// Dormand-Prince 5(4). Throws OriginContact, NoReturn.
ProfileResult integrate_profile(const ShrinkerSpec &spec, const ProfileOptions &options = {});

// <T, e_r> where the polar angle reaches pi * wind / lobes; zero for a closing profile.
double closure_defect(const ShrinkerSpec &spec);

struct ShrinkerResult {
    ShrinkerSpec spec;
    DiscreteCurve curve;
    double p_value = 0.0;
    double closure_error = 0.0;  // |z(L) - z(0)| after one full turn
    double r_min = 0.0;
    double r_max = 0.0;
    int iterations = 0;
};

/// Bisection on r_start in `bracket` for a closing profile, then integration of
/// the whole curve and sampling at `nodes` equal-arclength points.
/// Throws NoRoot, NotClosed, InvalidSpec.
ShrinkerResult shoot_closed(int n, double eps, std::pair<int, int> target_rot_wind, int lobes,
                            std::pair<double, double> bracket, std::size_t nodes = 512);

// CSV `n,eps,rot,wind,r_min,r_max,p_value`.
std::string shrinker_catalogue_csv(const std::vector<ShrinkerResult> &rows);

}  // namespace lagflow
