#include "lagflow/validation.hpp"

#include <cmath>

#include "lagflow/geometry.hpp"
#include "lagflow/identities.hpp"
#include "lagflow/monitor.hpp"
#include "lagflow/scenario.hpp"

namespace lagflow {

double ResidualCheck::order() const { return std::log2(coarse / fine); }

bool ResidualCheck::ok() const {
    if (!order_check) return coarse < bound && fine < bound;
    return fine < bound || order() >= 2.0;
}

std::vector<std::pair<std::string, DiscreteCurve>> suite_curves(std::uint64_t seed, std::size_t N, int n) {
    ScenarioSpec circle;
    circle.n = n;
    circle.N = N;
    ScenarioSpec wave = scenario_defaults(ScenarioKind::PerturbedSymmetric);
    wave.n = n;
    wave.N = N;
    wave.a = 0.02;
    return {{"circle", generate(circle)}, {"perturbed", generate(wave)}, {"random", random_fourier_seed(seed, N, n)}};
}

std::vector<ResidualCheck> identity_suite(std::uint64_t seed, std::size_t N, int n) {
    std::vector<ResidualCheck> out;
    const auto coarse = suite_curves(seed, N, n), fine = suite_curves(seed, 2 * N, n);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        const auto a = identity_residuals(coarse[i].second, geometry(coarse[i].second));
        const auto b = identity_residuals(fine[i].second, geometry(fine[i].second));
        const std::string name = coarse[i].first + " ";
        out.push_back({name + "|grad r|", a.res_10a, b.res_10a, 1e-10});
        out.push_back({name + "Laplace r", a.res_10b, b.res_10b, 1e-10});
        out.push_back({name + "grad <nu,e_r>", a.res_10c, b.res_10c, 1e-10});
        if (a.res_polar && b.res_polar) out.push_back({name + "polar", *a.res_polar, *b.res_polar, 1e-10});
    }
    return out;
}

std::vector<ResidualCheck> evolution_suite(std::uint64_t seed, std::size_t N, int n) {
    std::vector<ResidualCheck> out;
    FlowConfig cfg;
    cfg.n = n;
    const auto coarse = suite_curves(seed, N, n), fine = suite_curves(seed, 2 * N, n);
    // Central time differences over dt ~ h^2 lose about 1e-7 to rounding,
    // so below 1e-6 the order is not measurable.
    const double floor = 1e-6;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        const auto a = evolution_residuals(FlowState{coarse[i].second, 0.0, 0.0, 0}, cfg);
        const auto b = evolution_residuals(FlowState{fine[i].second, 0.0, 0.0, 0}, cfg);
        const std::string name = coarse[i].first + " ";
        out.push_back({name + "dmu", a.res_dmu, b.res_dmu, floor});
        out.push_back({name + "k", a.res_k, b.res_k, floor});
        out.push_back({name + "f", a.res_f, b.res_f, floor});
        out.push_back({name + "r", a.res_r, b.res_r, floor});
        out.push_back({name + "<nu,e_r>", a.res_nuer, b.res_nuer, floor});
        out.push_back({name + "dA/dt", a.res_dA, b.res_dA, 1e-6, false});
    }
    return out;
}

std::vector<PreservationCheck> preservation_suite(std::uint64_t seed, int count, std::size_t N, int n) {
    std::vector<PreservationCheck> out;
    for (int i = 0; i < count; ++i) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
        FlowConfig cfg;
        cfg.n = n;
        cfg.record_every = 20;
        const RunResult r = run(random_fourier_seed(s, N, n), cfg);
        PreservationCheck c{s, r.record.stop, r.final_state.t, {}};
        for (const auto &v : invariant_monitor(r.record, r.record.initial).preservation_violations)
            c.lost.push_back(v.property);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace lagflow
