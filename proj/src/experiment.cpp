#include "lagflow/experiment.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "lagflow/config.hpp"
#include "lagflow/error.hpp"
#include "lagflow/io.hpp"
#include "lagflow/predicates.hpp"

namespace lagflow {

namespace {

using nlohmann::ordered_json;

ordered_json number_or_null(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

ordered_json array_of(const std::vector<double> &v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(number_or_null(x));
    return a;
}

std::string describe(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

}  // namespace

ExperimentResult experiment(const ScenarioSpec &scenario, const FlowConfig &config, const std::filesystem::path &out) {
    FlowConfig cfg = config;
    cfg.n = scenario.n;
    ExperimentResult res{run(generate(scenario), cfg), cfg, {}, {}, {}, {}, {}};
    const TrajectoryRecord &rec = res.run.record;

    try {
        res.report = estimate_singularity(rec);
    } catch (const Error &e) {
        if (e.code() != ErrorCode::InsufficientBlowup) throw;
        res.report_error = e.what();
    }
    res.invariants = invariant_monitor(rec, rec.initial, res.report ? std::optional(res.report->T_est) : std::nullopt);

    if (res.report && res.report->T_est > res.run.final_state.t) {
        const RescaledCurve rc = rescale_huisken(res.run.final_state, res.report->T_est);
        const double R = std::sqrt(static_cast<double>(scenario.n));
        std::vector<Vec2> ring(4 * rc.curve.size());
        for (std::size_t j = 0; j < ring.size(); ++j) {
            const double p = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(ring.size());
            ring[j] = {R * std::cos(p), R * std::sin(p)};
        }
        res.rescaled_circle_distance = hausdorff_distance(rc.curve.points(), ring);
    }

    const InvariantReport &inv = res.invariants;
    const double a0 = std::abs(rec.initial.area);
    if (inv.area_law_residual && *inv.area_law_residual > kAreaLawTol * a0)
        res.violations.push_back("area law residual " + describe(*inv.area_law_residual) + " exceeds " +
                                 describe(kAreaLawTol) + " |A0|");
    if (inv.eps_law_residual && *inv.eps_law_residual > kEpsLawTol)
        res.violations.push_back("monotonicity constant residual " + describe(*inv.eps_law_residual) +
                                 " exceeds " + describe(kEpsLawTol));
    for (const auto &v : inv.preservation_violations)
        res.violations.push_back(v.property + " lost at t = " + describe(v.first_t));

    if (!out.empty()) {
        write_file_atomic(out / "trajectory.csv", trajectory_to_csv(rec));
        for (std::size_t i = 0; i < rec.snapshots.size(); ++i)
            write_file_atomic(out / ("snap_" + std::to_string(i) + ".json"), curve_to_json(rec.snapshots[i]));
        write_file_atomic(out / "report.json", experiment_report_json(scenario, res));
        std::vector<double> times;
        for (std::size_t i : rec.snapshot_index) times.push_back(rec.times[i]);
        emit_svg(rec.snapshots, times, invariant_series(rec, res.report), out);
    }
    return res;
}

std::string experiment_report_json(const ScenarioSpec &scenario, const ExperimentResult &res) {
    const TrajectoryRecord &rec = res.run.record;
    ordered_json j;
    if (res.report) {
        const SingularityReport &r = *res.report;
        j["T_est"] = number_or_null(r.T_est);
        j["fit_c"] = number_or_null(r.fit_c);
        j["class"] = to_string(r.cls);
        j["type1"] = r.type1;
        j["m_tail"] = array_of(r.m_tail);
        j["tail_growth"] = number_or_null(r.tail_growth);
        j["rescaled_sup"] = array_of(r.rescaled_sup);
    } else {
        j["T_est"] = nullptr;
        j["fit_c"] = nullptr;
        j["class"] = nullptr;
        j["type1"] = nullptr;
        j["m_tail"] = ordered_json::array();
        j["report_error"] = res.report_error;
    }
    j["rescaled_circle_distance"] = number_or_null(res.rescaled_circle_distance);
    j["config"] = ordered_json::parse(config_to_json(scenario, res.config));
    j["stop"] = {{"reason", to_string(rec.stop)},
                 {"detail", rec.stop_detail},
                 {"t", res.run.final_state.t},
                 {"steps", res.run.final_state.steps}};
    ordered_json init;
    init["n"] = rec.n;
    init["area"] = rec.initial.area;
    init["rot"] = rec.initial.rot;
    init["wind0"] = rec.initial.wind0 ? ordered_json(*rec.initial.wind0) : ordered_json(nullptr);
    init["eps"] = number_or_null(rec.initial.eps_monotone);
    j["initial"] = init;
    if (rec.initial.eps_monotone) j["eps0_t_stop"] = *rec.initial.eps_monotone * res.run.final_state.t;

    ordered_json inv;
    inv["area_law_residual"] = number_or_null(res.invariants.area_law_residual);
    inv["eps_law_residual"] = number_or_null(res.invariants.eps_law_residual);
    inv["hamiltonian_residual"] = number_or_null(res.invariants.hamiltonian_residual);
    ordered_json pv = ordered_json::array();
    for (const auto &v : res.invariants.preservation_violations)
        pv.push_back({{"property", v.property}, {"first_index", v.first_index}, {"first_t", v.first_t}, {"count", v.count}});
    inv["preservation_violations"] = pv;
    j["invariants"] = inv;
    j["violations"] = res.violations;

    ordered_json snaps = ordered_json::array();
    for (std::size_t i = 0; i < rec.snapshots.size(); ++i)
        snaps.push_back({{"file", "snap_" + std::to_string(i) + ".json"}, {"t", rec.times[rec.snapshot_index[i]]}});
    j["snapshots"] = snaps;
    return j.dump(2) + "\n";
}

InvariantSeries invariant_series(const TrajectoryRecord &record, const std::optional<SingularityReport> &report) {
    InvariantSeries s;
    s.t = record.times;
    s.area = record.area;
    if (report) s.m = report->rescaled_sup;
    s.area0 = record.area.empty() ? 0.0 : record.area.front();
    s.slope_index = record.initial.area_slope_index(record.n);
    return s;
}

void replot(const std::filesystem::path &dir) {
    InvariantSeries s;
    {
        std::istringstream in(read_file(dir / "trajectory.csv"));
        std::string line;
        std::getline(in, line);
        if (line.rfind("t,area,", 0) != 0) throw Error(ErrorCode::IoError, "unexpected trajectory header");
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 + 1);
            try {
                s.t.push_back(std::stod(line.substr(0, c1)));
                s.area.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
            } catch (const std::exception &) {
                throw Error(ErrorCode::IoError, "malformed trajectory row: " + line);
            }
        }
    }
    if (!s.area.empty()) s.area0 = s.area.front();

    std::vector<DiscreteCurve> snaps;
    std::vector<double> times;
    try {
        const auto j = nlohmann::json::parse(read_file(dir / "report.json"));
        if (j.contains("rescaled_sup"))
            for (const auto &v : j["rescaled_sup"]) s.m.push_back(v.is_number() ? v.get<double>() : NAN);
        const auto &init = j.at("initial");
        if (!init.at("wind0").is_null())
            s.slope_index = init.at("rot").get<int>() + (init.at("n").get<int>() - 1) * init.at("wind0").get<int>();
        for (const auto &snap : j.at("snapshots")) {
            snaps.push_back(curve_from_json(read_file(dir / snap.at("file").get<std::string>())));
            times.push_back(snap.at("t").get<double>());
        }
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::IoError, std::string("report.json: ") + e.what());
    }
    emit_svg(snaps, times, s, dir);
}

}  // namespace lagflow
