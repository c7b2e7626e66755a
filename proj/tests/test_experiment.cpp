#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lagflow/config.hpp"
#include "lagflow/experiment.hpp"
#include "lagflow/geometry.hpp"
#include "lagflow/io.hpp"
#include "lagflow/predicates.hpp"
#include "support.hpp"

using namespace lagflow;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name) {
    const fs::path p = fs::temp_directory_path() / ("lagflow_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// Well-formed enough for a browser: one root element, balanced and no
// non-finite numbers leaking into attributes.
void check_svg(const std::string &s) {
    CHECK(s.rfind("<?xml", 0) == 0);
    CHECK(s.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
    CHECK(s.size() >= 7);
    CHECK(s.substr(s.size() - 7) == "</svg>\n");
    CHECK(s.find("nan") == std::string::npos);
    CHECK(s.find("inf") == std::string::npos);
    std::size_t open = 0, close = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i] == '<') (s[i + 1] == '/' ? close : open) += 1;
    const auto self_closing = [&] {
        std::size_t c = 0;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) c += s[i] == '/' && s[i + 1] == '>';
        return c;
    }();
    // <?xml ... ?> opens nothing.
    CHECK(open - 1 == close + self_closing);
}

ScenarioSpec small_circle(double R = 1.0) {
    ScenarioSpec s;
    s.N = 128;
    s.R = R;
    return s;
}

struct EnvGuard {
    explicit EnvGuard(const char *v) {
        if (v)
            setenv("LAGFLOW_THREADS", v, 1);
        else
            unsetenv("LAGFLOW_THREADS");
    }
    ~EnvGuard() { unsetenv("LAGFLOW_THREADS"); }
};

}  // namespace

TEST_CASE("svg with no snapshots has axes only") {
    const std::string s = svg_curves({});
    check_svg(s);
    CHECK(s.find("<polygon") == std::string::npos);
    CHECK(s.find("<rect") != std::string::npos);
    check_svg(svg_invariants({}));
}

TEST_CASE("svg tolerates flat and non-finite series") {
    InvariantSeries s;
    s.t = {0.0, 0.1, 0.2};
    s.area = {1.0, 1.0, 1.0};
    s.m = {0.5, NAN, INFINITY};
    s.area0 = 1.0;
    s.slope_index = 0;
    check_svg(svg_invariants(s));
}

TEST_CASE("circle experiment") {
    const fs::path dir = scratch_dir("circle");
    FlowConfig cfg;
    cfg.snapshot_every = 100;
    const ExperimentResult r = experiment(small_circle(), cfg, dir);
    CHECK(r.exit_code() == kExitOk);
    CHECK(r.violations.empty());
    REQUIRE(r.report);
    CHECK(r.report->type1);
    CHECK(std::abs(r.report->T_est - 0.25) < 5e-3);
    REQUIRE(r.rescaled_circle_distance);
    CHECK(*r.rescaled_circle_distance < 1e-2);

    for (const char *f : {"trajectory.csv", "report.json", "curves.svg", "invariants.svg", "snap_0.json"})
        CHECK(fs::exists(dir / f));
    for (const auto &e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");

    // Area panel: data against A_0 - 2 pi (rot + wind0) t = pi - 4 pi t.
    const InvariantSeries s = invariant_series(r.run.record, r.report);
    REQUIRE(s.slope_index == 2);
    double gap = 0.0;
    for (std::size_t i = 0; i < s.t.size(); ++i)
        gap = std::max(gap, std::abs(s.area[i] - (kPi - 4.0 * kPi * s.t[i])));
    CHECK(gap < 1e-3);
    check_svg(read_file(dir / "curves.svg"));
    check_svg(read_file(dir / "invariants.svg"));

    const auto j = nlohmann::json::parse(read_file(dir / "report.json"));
    CHECK(j["type1"] == true);
    CHECK(j["class"] == "C1");
    CHECK(j["stop"]["reason"] == "min_r");
    CHECK(j["initial"]["wind0"] == 1);
    CHECK(j["violations"].empty());
    CHECK(j["config"]["scenario"]["kind"] == "circle");
    CHECK(j["snapshots"].size() == r.run.record.snapshots.size());

    SUBCASE("replot reproduces the plots") {
        const std::string curves = read_file(dir / "curves.svg"), inv = read_file(dir / "invariants.svg");
        fs::remove(dir / "curves.svg");
        fs::remove(dir / "invariants.svg");
        replot(dir);
        CHECK(read_file(dir / "curves.svg") == curves);
        CHECK(read_file(dir / "invariants.svg") == inv);
    }
    SUBCASE("replot of a missing directory") {
        CHECK(code_of([&] { replot(dir / "nope"); }) == ErrorCode::IoError);
    }
    fs::remove_all(dir);
}

TEST_CASE("experiment without a singularity report") {
    // Stopped long before anything happens.
    FlowConfig cfg;
    cfg.t_max = 1e-3;
    const ExperimentResult r = experiment(small_circle(), cfg);
    CHECK_FALSE(r.report);
    CHECK(r.report_error.find("InsufficientBlowup") != std::string::npos);
    CHECK_FALSE(r.rescaled_circle_distance);
    CHECK(r.exit_code() == kExitOk);
    const auto j = nlohmann::json::parse(experiment_report_json(small_circle(), r));
    CHECK(j["T_est"].is_null());
    CHECK(j["type1"].is_null());
    CHECK(j["stop"]["reason"] == "t_max");
}

TEST_CASE("experiment propagates invalid specs") {
    ScenarioSpec s = small_circle();
    s.R = -1.0;
    CHECK(code_of([&] { experiment(s, FlowConfig{}); }) == ErrorCode::InvalidSpec);
    FlowConfig cfg;
    cfg.cfl = 0.0;
    CHECK(code_of([&] { experiment(small_circle(), cfg); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("scenario params") {
    CHECK(scenario_params(small_circle(2.0)) == "N=128;R=2;cx=0;cy=0");
    ScenarioSpec p = scenario_defaults(ScenarioKind::PerturbedSymmetric);
    CHECK(scenario_params(p) == "N=512;R=1;a=0.10000000000000001;l=9;omega0=1");
    CHECK(scenario_params(scenario_defaults(ScenarioKind::FigureEight)) == "N=512;R=1");
}

TEST_CASE("sweep") {
    CHECK(code_of([] { sweep({}, 1); }) == ErrorCode::EmptyGrid);

    std::vector<SweepJob> jobs;
    for (double R : {0.5, 1.0, 2.0}) jobs.push_back({small_circle(R), FlowConfig{}});
    ScenarioSpec bad = small_circle();
    bad.N = 4;
    jobs.insert(jobs.begin() + 1, SweepJob{bad, FlowConfig{}});

    const std::string one = sweep(jobs, 1), many = sweep(jobs, 3);
    CHECK(one == many);
    std::istringstream in(one);
    std::string line;
    std::getline(in, line);
    CHECK(line == "scenario,params,n,T_est,class,type1,area_law_residual,eps_law_residual,violations");
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1] == "circle,N=4;R=1;cx=0;cy=0,2,,error,,,,failed:InvalidSpec");
    // T_est within 2% of R^2/4.
    const double R[] = {0.5, 1.0, 2.0};
    const std::size_t ok_rows[] = {0, 2, 3};
    for (int k = 0; k < 3; ++k) {
        std::vector<std::string> cells;
        std::stringstream ss(rows[ok_rows[k]]);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        REQUIRE(cells.size() >= 8);
        CHECK(cells[4] == "C1");
        CHECK(cells[5] == "true");
        CHECK(std::abs(std::stod(cells[3]) - R[k] * R[k] / 4) < 0.02 * R[k] * R[k] / 4);
    }

    SUBCASE("rows write their own directories") {
        const fs::path dir = scratch_dir("sweep");
        const std::string csv = sweep({jobs[0], jobs[2]}, 2, dir);
        CHECK(fs::exists(dir / "row_0" / "report.json"));
        CHECK(fs::exists(dir / "row_1" / "trajectory.csv"));
        CHECK(read_file(dir / "summary.csv") == csv);
        // Same config, byte-identical trajectory.
        const fs::path again = scratch_dir("sweep_again");
        sweep({jobs[0]}, 1, again);
        CHECK(read_file(again / "row_0" / "trajectory.csv") == read_file(dir / "row_0" / "trajectory.csv"));
        fs::remove_all(dir);
        fs::remove_all(again);
    }
}

TEST_CASE("worker count") {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    {
        EnvGuard g("3");
        CHECK(worker_count(10) == 3);
        CHECK(worker_count(2) == 2);
    }
    {
        EnvGuard g("0");
        CHECK(worker_count(1000) == std::min(hw, 1000u));
    }
    {
        EnvGuard g("many");
        CHECK(worker_count(1000) == std::min(hw, 1000u));
    }
    {
        EnvGuard g(nullptr);
        CHECK(worker_count(1) == 1);
        CHECK(worker_count(0) == 1);
    }
}

TEST_CASE("config json") {
    ScenarioSpec s = scenario_defaults(ScenarioKind::Dumbbell);
    s.N = 300;
    s.neck_width = 0.15;
    FlowConfig f;
    f.cfl = 0.1;
    f.t_max = 0.5;
    f.resample = ResampleMode::Adaptive;

    ScenarioSpec s2;
    FlowConfig f2;
    apply_config_json(config_to_json(s, f), s2, f2);
    CHECK(config_to_json(s2, f2) == config_to_json(s, f));
    CHECK(s2.kind == ScenarioKind::Dumbbell);
    CHECK(f2.t_max == 0.5);
    CHECK_FALSE(f2.stop_min_r);

    SUBCASE("partial documents keep other fields") {
        ScenarioSpec a;
        FlowConfig b;
        apply_config_json(R"({"flow": {"cfl": 0.05}})", a, b);
        CHECK(b.cfl == 0.05);
        CHECK(a.kind == ScenarioKind::Circle);
        CHECK(b.record_every == FlowConfig{}.record_every);
    }
    SUBCASE("kind resets the scenario but keeps n and N") {
        ScenarioSpec a;
        a.n = 3;
        a.N = 200;
        a.R = 7.0;
        FlowConfig b;
        apply_config_json(R"({"scenario": {"kind": "offset_circle"}})", a, b);
        CHECK(a.center.x == 3.0);
        CHECK(a.R == 1.0);
        CHECK(a.n == 3);
        CHECK(a.N == 200);
        CHECK(b.n == 3);
    }
    SUBCASE("malformed") {
        ScenarioSpec a;
        FlowConfig b;
        CHECK(code_of([&] { apply_config_json("{", a, b); }) == ErrorCode::InvalidSpec);
        CHECK(code_of([&] { apply_config_json("[]", a, b); }) == ErrorCode::InvalidSpec);
        CHECK(code_of([&] { apply_config_json(R"({"solver": {}})", a, b); }) == ErrorCode::InvalidSpec);
        CHECK(code_of([&] { apply_config_json(R"({"scenario": {"R": "big"}})", a, b); }) == ErrorCode::InvalidSpec);
        CHECK(code_of([&] { apply_config_json(R"({"scenario": {"center": [1]}})", a, b); }) == ErrorCode::InvalidSpec);
        CHECK(code_of([&] { apply_config_json(R"({"flow": {"resample": "cubic"}})", a, b); }) == ErrorCode::InvalidSpec);
    }
}

TEST_CASE("random Fourier seeds") {
    for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
        for (int n : {2, 3}) {
            const DiscreteCurve z = random_fourier_seed(seed, 256, n);
            const Predicates p = predicates(z, geometry(z), false);
            CHECK(p.starshaped);
            CHECK(p.tamed);
            CHECK(p.embedded);
            CHECK(z.max_radius() / z.min_radius() > 1.01);
        }
    }
    const DiscreteCurve a = random_fourier_seed(5, 128, 2), b = random_fourier_seed(5, 128, 2),
                        c = random_fourier_seed(6, 128, 2);
    bool differ = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(a[j].x == b[j].x);
        CHECK(a[j].y == b[j].y);
        differ |= a[j].x != c[j].x;
    }
    CHECK(differ);
    CHECK(code_of([] { random_fourier_seed(1, 8, 2); }) == ErrorCode::InvalidSpec);
}
