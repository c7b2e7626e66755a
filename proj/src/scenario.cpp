#include "lagflow/scenario.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lagflow/error.hpp"
#include "lagflow/geometry.hpp"
#include "lagflow/predicates.hpp"
#include "lagflow/resample.hpp"

namespace lagflow {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string &what) {
    if (!ok) throw Error(ErrorCode::InvalidSpec, what);
}

template <class Z>
DiscreteCurve sample(const ScenarioSpec &spec, double shift, Z z) {
    std::vector<Vec2> pts(spec.N);
    for (std::size_t j = 0; j < spec.N; ++j)
        pts[j] = z(2.0 * kPi * (static_cast<double>(j) + shift) / static_cast<double>(spec.N));
    return DiscreteCurve(std::move(pts), spec.n);
}

// Smooth union of two disks and a neck, as the zero set of a soft minimum of
// their (approximate) signed distance functions.
struct DumbbellField {
    double R, d, w, sigma;
    static constexpr int q = 4;  // neck profile exponent: ((x/d)^8 + (y/w)^2)^(1/2)

    std::array<double, 3> parts(Vec2 z, std::array<Vec2, 3> *grads) const {
        const Vec2 c0{d, 0.0}, c1{-d, 0.0};
        const double r0 = norm(z - c0), r1 = norm(z - c1);
        const double u = z.x / d, v = z.y / w;
        const double u2q = std::pow(u * u, q);
        const double s = std::sqrt(u2q + v * v);
        if (grads) {
            (*grads)[0] = r0 > 0.0 ? (z - c0) * (1.0 / r0) : Vec2{0.0, 0.0};
            (*grads)[1] = r1 > 0.0 ? (z - c1) * (1.0 / r1) : Vec2{0.0, 0.0};
            const double du = u == 0.0 ? 0.0 : q * u2q / u / d;  // d(u^{2q})/dx / 2
            (*grads)[2] = s > 0.0 ? Vec2{w * du / s, w * (v / w) / s} : Vec2{0.0, 0.0};
        }
        return {r0 - R, r1 - R, w * (s - 1.0)};
    }

    double value(Vec2 z, Vec2 *grad = nullptr) const {
        std::array<Vec2, 3> g{};
        const auto f = parts(z, grad ? &g : nullptr);
        const double m = std::min({f[0], f[1], f[2]});
        std::array<double, 3> e{};
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) sum += e[i] = std::exp(-(f[i] - m) / sigma);
        if (grad) {
            *grad = {0.0, 0.0};
            for (int i = 0; i < 3; ++i) *grad = *grad + g[i] * (e[i] / sum);
        }
        return m - sigma * std::log(sum);
    }

    // Newton projection onto the zero set along the gradient.
    Vec2 project(Vec2 z) const {
        for (int it = 0; it < 50; ++it) {
            Vec2 g;
            const double f = value(z, &g);
            z = z - g * (f / norm2(g));
            if (std::abs(f) < 1e-15) break;
        }
        return z;
    }
};

DiscreteCurve dumbbell(const ScenarioSpec &spec) {
    const DumbbellField field{spec.R, spec.separation, spec.neck_width, 0.25 * spec.neck_width};
    // Top of the neck on the positive y axis.
    double lo = 0.0, hi = 2.0 * (spec.separation + spec.R);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (field.value({0.0, mid}) < 0.0 ? lo : hi) = mid;
    }
    const Vec2 start{0.0, 0.5 * (lo + hi)};

    // March counterclockwise with tangent J grad F until the start is passed again.
    const double h = 1e-3 * spec.neck_width;
    std::vector<Vec2> pts{start};
    Vec2 z = start;
    double travelled = 0.0;
    const double budget = 4.0 * kPi * (spec.separation + spec.R) + 8.0 * spec.separation;
    while (true) {
        Vec2 g;
        field.value(z, &g);
        const Vec2 t = rotate_quarter(g * (1.0 / norm(g)));
        const Vec2 next = field.project(z + t * h);
        travelled += norm(next - z);
        if (travelled > budget) throw Error(ErrorCode::InvalidSpec, "dumbbell contour did not close");
        if (travelled > spec.neck_width && z.x > 0.0 && next.x <= 0.0 && next.y > 0.0) break;
        pts.push_back(next);
        z = next;
    }
    return DiscreteCurve(resample_closed_polyline(pts, spec.N), spec.n);
}

}  // namespace

const char *to_string(ScenarioKind k) {
    switch (k) {
    case ScenarioKind::Circle: return "circle";
    case ScenarioKind::OffsetCircle: return "offset_circle";
    case ScenarioKind::PerturbedSymmetric: return "perturbed_symmetric";
    case ScenarioKind::FigureEight: return "figure_eight";
    case ScenarioKind::Dumbbell: return "dumbbell";
    case ScenarioKind::Chekanov: return "chekanov";
    }
    return "circle";
}

ScenarioKind scenario_from_string(const std::string &name) {
    for (auto k : {ScenarioKind::Circle, ScenarioKind::OffsetCircle, ScenarioKind::PerturbedSymmetric,
                   ScenarioKind::FigureEight, ScenarioKind::Dumbbell, ScenarioKind::Chekanov})
        if (name == to_string(k)) return k;
    throw Error(ErrorCode::InvalidSpec, "unknown scenario '" + name + "'");
}

void ScenarioSpec::validate() const {
    require(n >= 1, "n must be >= 1");
    require(N >= kMinNodes, "N must be at least 16");
    require(R > 0.0 && std::isfinite(R), "R must be positive");
    switch (kind) {
    case ScenarioKind::PerturbedSymmetric:
        require(a >= 0.0 && a < 1.0, "perturbed_symmetric needs 0 <= a < 1");
        require(l >= 1, "perturbed_symmetric needs l >= 1");
        require(omega0 >= 1, "perturbed_symmetric needs omega0 >= 1");
        break;
    case ScenarioKind::Dumbbell:
        require(neck_width > 0.0, "dumbbell needs neck width > 0");
        require(neck_width < R, "dumbbell neck must be narrower than the lobes");
        require(separation > R, "dumbbell lobes must not contain the origin");
        break;
    case ScenarioKind::Chekanov:
        require(kappa > 0.0 && std::isfinite(kappa), "chekanov needs kappa > 0");
        break;
    default:
        break;
    }
}

ScenarioSpec scenario_defaults(ScenarioKind kind) {
    ScenarioSpec spec;
    spec.kind = kind;
    if (kind == ScenarioKind::OffsetCircle) spec.center = {3.0, 0.0};
    return spec;
}

DiscreteCurve generate(const ScenarioSpec &spec) {
    spec.validate();
    switch (spec.kind) {
    case ScenarioKind::Circle:
    case ScenarioKind::OffsetCircle:
        return sample(spec, 0.0, [&](double p) {
            return Vec2{spec.center.x + spec.R * std::cos(p), spec.center.y + spec.R * std::sin(p)};
        });
    case ScenarioKind::PerturbedSymmetric:
        return sample(spec, 0.0, [&](double p) {
            const double r = spec.R * (1.0 + spec.a * std::cos(spec.l * p));
            return Vec2{r * std::cos(spec.omega0 * p), r * std::sin(spec.omega0 * p)};
        });
    case ScenarioKind::FigureEight:
        // Half-step shift keeps nodes off the crossing at the origin.
        return sample(spec, 0.5, [&](double t) {
            const double s = std::sin(t), c = std::cos(t), den = 1.0 + s * s;
            return Vec2{spec.R * c / den, spec.R * s * c / den};
        });
    case ScenarioKind::Dumbbell:
        return dumbbell(spec);
    case ScenarioKind::Chekanov:
        return sample(spec, 0.0, [&](double p) {
            const double c = std::cos(p), s = std::sin(p), k = spec.kappa;
            return Vec2{c * std::cos(k * c) + k * s * std::sin(k * c), c * std::sin(k * c) + k * s * std::cos(k * c)};
        });
    }
    throw Error(ErrorCode::InvalidSpec, "unknown scenario");
}

DiscreteCurve random_fourier_seed(std::uint64_t seed, std::size_t N, int n) {
    require(N >= kMinNodes, "too few nodes");
    require(n >= 1, "n must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-0.08, 0.08), phase(0.0, 2.0 * kPi);
    std::array<double, 5> c{}, s{};
    for (int m = 0; m < 5; ++m) c[m] = amp(rng), s[m] = amp(rng);
    const double turn = phase(rng);
    for (double scale = 1.0;; scale *= 0.5) {
        std::vector<Vec2> pts(N);
        for (std::size_t j = 0; j < N; ++j) {
            const double phi = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(N);
            double r = 1.0;
            for (int m = 0; m < 5; ++m) r += scale * (c[m] * std::cos((m + 2) * phi) + s[m] * std::sin((m + 2) * phi));
            pts[j] = {r * std::cos(phi + turn), r * std::sin(phi + turn)};
        }
        DiscreteCurve z(std::move(pts), n);
        const Predicates p = predicates(z, geometry(z), false);
        if ((p.starshaped && p.tamed && p.embedded) || scale < 1e-6) return z;
    }
}

}  // namespace lagflow
