// lagflow: simulate, sweep and validate equivariant Lagrangian mean curvature
// flow of profile curves, and shoot closed self-shrinkers.

#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lagflow/config.hpp"
#include "lagflow/error.hpp"
#include "lagflow/experiment.hpp"
#include "lagflow/io.hpp"
#include "lagflow/shrinker.hpp"
#include "lagflow/validation.hpp"

using namespace lagflow;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flags shared by simulate and sweep. Every value flag takes a comma list;
// simulate accepts a single entry only.
struct GridFlags {
    std::string config;
    std::vector<std::string> scenario;
    std::vector<int> n, l, omega0;
    std::vector<std::size_t> N;
    std::vector<double> R, a, cfl, neck_width, separation, kappa;
    std::optional<double> t_max, stop_min_r, stop_max_f;
    std::optional<std::string> resample;
    std::optional<int> record_every, snapshot_every;
    bool dump_config = false;
};

template <class T>
void list_option(CLI::App *app, const std::string &name, std::vector<T> &v, const std::string &help) {
    app->add_option(name, v, help)->delimiter(',');
}

void add_grid_flags(CLI::App *app, GridFlags &g) {
    app->add_option("--config", g.config, "JSON config file; flags override it")->check(CLI::ExistingFile);
    list_option(app, "--scenario", g.scenario,
                "circle, offset_circle, perturbed_symmetric, figure_eight, dumbbell, chekanov");
    list_option(app, "--n", g.n, "ambient dimension C^n");
    list_option(app, "--N", g.N, "number of nodes");
    list_option(app, "--R", g.R, "radius");
    list_option(app, "--a", g.a, "perturbation amplitude");
    list_option(app, "--l", g.l, "symmetry order");
    list_option(app, "--omega0", g.omega0, "winding about the origin");
    list_option(app, "--neck-width", g.neck_width, "dumbbell neck half-width");
    list_option(app, "--separation", g.separation, "dumbbell lobe centers at (+-d, 0)");
    list_option(app, "--kappa", g.kappa, "Chekanov curve parameter");
    list_option(app, "--cfl", g.cfl, "time step factor");
    app->add_option("--t-max", g.t_max, "stop at this time");
    app->add_option("--stop-min-r", g.stop_min_r, "stop once min r falls below this");
    app->add_option("--stop-max-f", g.stop_max_f, "stop once max |f| exceeds this");
    app->add_option("--resample", g.resample, "arclength or adaptive");
    app->add_option("--record-every", g.record_every, "steps between trajectory samples");
    app->add_option("--snapshot-every", g.snapshot_every, "records between snapshot curves (0: first and last)");
    app->add_flag("--dump-config", g.dump_config, "print the effective config as JSON and exit");
}

using Setter = std::function<void(ScenarioSpec &, FlowConfig &)>;

template <class T, class F>
void axis(std::vector<std::vector<Setter>> &axes, const std::vector<T> &values, F set) {
    if (values.empty()) return;
    std::vector<Setter> row;
    for (const T &v : values) row.push_back([v, set](ScenarioSpec &s, FlowConfig &f) { set(s, f, v); });
    axes.push_back(std::move(row));
}

std::vector<SweepJob> build_jobs(const GridFlags &g) {
    ScenarioSpec base;
    FlowConfig flow;
    if (!g.config.empty()) apply_config_json(read_file(g.config), base, flow);
    if (g.t_max) flow.t_max = *g.t_max;
    if (g.stop_min_r) flow.stop_min_r = *g.stop_min_r;
    if (g.stop_max_f) flow.stop_max_f = *g.stop_max_f;
    if (g.resample) flow.resample = resample_from_string(*g.resample);
    if (g.record_every) flow.record_every = *g.record_every;
    if (g.snapshot_every) flow.snapshot_every = *g.snapshot_every;

    std::vector<std::vector<Setter>> axes;
    axis(axes, g.scenario, [](ScenarioSpec &s, FlowConfig &, const std::string &k) {
        const ScenarioKind kind = scenario_from_string(k);
        if (kind == s.kind) return;
        ScenarioSpec d = scenario_defaults(kind);
        d.n = s.n;
        d.N = s.N;
        s = d;
    });
    axis(axes, g.n, [](ScenarioSpec &s, FlowConfig &, int v) { s.n = v; });
    axis(axes, g.N, [](ScenarioSpec &s, FlowConfig &, std::size_t v) { s.N = v; });
    axis(axes, g.R, [](ScenarioSpec &s, FlowConfig &, double v) { s.R = v; });
    axis(axes, g.a, [](ScenarioSpec &s, FlowConfig &, double v) { s.a = v; });
    axis(axes, g.l, [](ScenarioSpec &s, FlowConfig &, int v) { s.l = v; });
    axis(axes, g.omega0, [](ScenarioSpec &s, FlowConfig &, int v) { s.omega0 = v; });
    axis(axes, g.neck_width, [](ScenarioSpec &s, FlowConfig &, double v) { s.neck_width = v; });
    axis(axes, g.separation, [](ScenarioSpec &s, FlowConfig &, double v) { s.separation = v; });
    axis(axes, g.kappa, [](ScenarioSpec &s, FlowConfig &, double v) { s.kappa = v; });
    axis(axes, g.cfl, [](ScenarioSpec &, FlowConfig &f, double v) { f.cfl = v; });

    // Cartesian product, first axis slowest.
    std::vector<SweepJob> jobs;
    std::vector<std::size_t> idx(axes.size(), 0);
    for (;;) {
        SweepJob job{base, flow};
        for (std::size_t k = 0; k < axes.size(); ++k) axes[k][idx[k]](job.scenario, job.config);
        job.config.n = job.scenario.n;
        jobs.push_back(job);
        std::size_t k = axes.size();
        while (k > 0 && ++idx[k - 1] == axes[k - 1].size()) idx[--k] = 0;
        if (k == 0) break;
    }
    return jobs;
}

int simulate(const GridFlags &g, const std::string &out) {
    const auto jobs = build_jobs(g);
    if (jobs.size() != 1) throw UsageError("simulate takes one value per flag; use sweep for lists");
    const SweepJob &job = jobs.front();
    if (g.dump_config) {
        std::cout << config_to_json(job.scenario, job.config);
        return kExitOk;
    }
    const ExperimentResult r = experiment(job.scenario, job.config, out);
    std::cout << experiment_report_json(job.scenario, r);
    for (const auto &v : r.violations) std::cerr << "violation: " << v << "\n";
    return r.exit_code();
}

int run_sweep(const GridFlags &g, const std::string &out) {
    const auto jobs = build_jobs(g);
    if (g.dump_config) {
        for (const auto &j : jobs) std::cout << config_to_json(j.scenario, j.config);
        return kExitOk;
    }
    const std::string csv = sweep(jobs, worker_count(jobs.size()), out);
    std::cout << csv;
    if (csv.find(",failed:") != std::string::npos) return kExitNumeric;
    // A row with a non-empty violations column.
    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line))
        if (!line.empty() && line.back() != ',') return kExitViolation;
    return kExitOk;
}

struct ShrinkerFlags {
    int n = 2, rot = 1, lobes = 3;
    double eps = 4.0, lo = 0.8, hi = 1.2;
    std::size_t N = 512;
};

int run_shrinker(const ShrinkerFlags &s, const std::string &out) {
    const ShrinkerResult r = shoot_closed(s.n, s.eps, {s.rot, s.rot}, s.lobes, {s.lo, s.hi}, s.N);
    const std::string csv = shrinker_catalogue_csv({r});
    std::cout << csv;
    if (!out.empty()) {
        write_file_atomic(std::filesystem::path(out) / "shrinker.json", curve_to_json(r.curve, s.eps));
        write_file_atomic(std::filesystem::path(out) / "catalogue.csv", csv);
        write_file_atomic(std::filesystem::path(out) / "curves.svg", svg_curves({r.curve}));
    }
    return kExitOk;
}

// Validation output: one line per check; false when any fails.

bool print_checks(const std::vector<ResidualCheck> &checks) {
    bool ok = true;
    for (const auto &c : checks) {
        if (c.order_check)
            std::printf("%-4s %-28s %.3e -> %.3e  order %5.2f\n", c.ok() ? "ok" : "FAIL", c.name.c_str(), c.coarse,
                        c.fine, c.order());
        else
            std::printf("%-4s %-28s %.3e, %.3e  bound %.0e\n", c.ok() ? "ok" : "FAIL", c.name.c_str(), c.coarse,
                        c.fine, c.bound);
        ok &= c.ok();
    }
    return ok;
}

bool print_preservation(const std::vector<PreservationCheck> &checks, int n) {
    bool ok = true;
    for (const auto &c : checks) {
        std::string lost;
        for (const auto &p : c.lost) lost += " " + p;
        std::printf("%-4s seed %-6llu stop %-8s t %.6f%s%s\n", c.ok(n) ? "ok" : "FAIL",
                    static_cast<unsigned long long>(c.seed), to_string(c.stop), c.t_stop,
                    lost.empty() ? "" : "  lost:", lost.c_str());
        ok &= c.ok(n);
    }
    return ok;
}

int exit_for(ErrorCode c) {
    return (c == ErrorCode::InvalidSpec || c == ErrorCode::EmptyGrid) ? kExitUsage : kExitNumeric;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Equivariant Lagrangian mean curvature flow of profile curves"};
    app.require_subcommand(1);

    GridFlags sim_flags, sweep_flags;
    std::string sim_out, sweep_out, shrink_out, plot_dir;
    auto *sim = app.add_subcommand("simulate", "run one scenario through the flow");
    add_grid_flags(sim, sim_flags);
    sim->add_option("--out", sim_out, "output directory");

    auto *swp = app.add_subcommand("sweep", "run the cartesian product of comma-separated flag lists");
    add_grid_flags(swp, sweep_flags);
    swp->add_option("--out", sweep_out, "output directory (row_i per job, summary.csv)");

    ShrinkerFlags sh;
    auto *shr = app.add_subcommand("shrinker", "shoot a closed self-shrinker");
    shr->add_option("--n", sh.n, "ambient dimension")->capture_default_str();
    shr->add_option("--eps", sh.eps, "monotonicity constant")->capture_default_str();
    shr->add_option("--rot", sh.rot, "rotation number = winding number")->capture_default_str();
    shr->add_option("--lobes", sh.lobes, "maxima of r per closed curve")->capture_default_str();
    shr->add_option("--lo", sh.lo, "bracket for the starting radius")->capture_default_str();
    shr->add_option("--hi", sh.hi, "bracket for the starting radius")->capture_default_str();
    shr->add_option("--N", sh.N, "nodes of the sampled curve")->capture_default_str();
    shr->add_option("--out", shrink_out, "output directory");

    std::string suite = "all";
    std::uint64_t seed = 1;
    int count = 20, vn = 2;
    std::size_t vN = 256;
    auto *val = app.add_subcommand("validate", "identity, evolution and preservation suites");
    val->add_option("--suite", suite, "identities, evolution, preservation or all")
        ->check(CLI::IsMember({"identities", "evolution", "preservation", "all"}))
        ->capture_default_str();
    val->add_option("--seed", seed, "first seed of the random curves")->capture_default_str();
    val->add_option("--count", count, "random seeds in the preservation suite")->capture_default_str();
    val->add_option("--n", vn, "ambient dimension")->capture_default_str();
    val->add_option("--N", vN, "coarse grid; the fine grid doubles it")->capture_default_str();

    auto *plt = app.add_subcommand("plot", "rewrite the SVG plots of an output directory");
    plt->add_option("--out,dir", plot_dir, "experiment output directory")->required()->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed()) return simulate(sim_flags, sim_out);
        if (swp->parsed()) return run_sweep(sweep_flags, sweep_out);
        if (shr->parsed()) return run_shrinker(sh, shrink_out);
        if (plt->parsed()) {
            replot(plot_dir);
            return kExitOk;
        }
        bool ok = true;
        if (suite == "identities" || suite == "all") ok &= print_checks(identity_suite(seed, vN, vn));
        if (suite == "evolution" || suite == "all") ok &= print_checks(evolution_suite(seed, vN, vn));
        if (suite == "preservation" || suite == "all")
            ok &= print_preservation(preservation_suite(seed, count, vN, vn), vn);
        return ok ? kExitOk : kExitViolation;
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_for(e.code());
    }
}
