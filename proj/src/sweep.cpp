#include <atomic>
#include <cstdlib>
#include <thread>

#include "lagflow/error.hpp"
#include "lagflow/experiment.hpp"
#include "lagflow/io.hpp"

namespace lagflow {

namespace {

std::string cell(std::optional<double> v) { return v ? format_double(*v) : std::string(); }

// Violation texts may hold commas; the CSV cell joins them with '|'.
std::string joined(const std::vector<std::string> &v) {
    std::string s;
    for (const auto &x : v) {
        if (!s.empty()) s += '|';
        for (char c : x) s += (c == ',' || c == '\n') ? ' ' : c;
    }
    return s;
}

std::string row_of(const SweepJob &job, const std::filesystem::path &dir) {
    const std::string head =
        std::string(to_string(job.scenario.kind)) + ',' + scenario_params(job.scenario) + ',' + std::to_string(job.scenario.n) + ',';
    try {
        const ExperimentResult r = experiment(job.scenario, job.config, dir);
        std::string s = head;
        if (r.report)
            s += format_double(r.report->T_est) + ',' + to_string(r.report->cls) + ',' + (r.report->type1 ? "true" : "false");
        else
            s += ",none,";
        return s + ',' + cell(r.invariants.area_law_residual) + ',' + cell(r.invariants.eps_law_residual) + ',' +
               joined(r.violations) + '\n';
    } catch (const Error &e) {
        return head + ",error,,,," + "failed:" + std::string(to_string(e.code())) + '\n';
    }
}

}  // namespace

std::string scenario_params(const ScenarioSpec &s) {
    auto kv = [](const char *k, double v) { return std::string(k) + '=' + format_double(v); };
    std::string p = "N=" + std::to_string(s.N) + ";" + kv("R", s.R);
    switch (s.kind) {
        case ScenarioKind::Circle:
        case ScenarioKind::OffsetCircle:
            p += ";" + kv("cx", s.center.x) + ";" + kv("cy", s.center.y);
            break;
        case ScenarioKind::PerturbedSymmetric:
            p += ";" + kv("a", s.a) + ";l=" + std::to_string(s.l) + ";omega0=" + std::to_string(s.omega0);
            break;
        case ScenarioKind::FigureEight:
            break;
        case ScenarioKind::Dumbbell:
            p += ";" + kv("w", s.neck_width) + ";" + kv("d", s.separation);
            break;
        case ScenarioKind::Chekanov:
            p += ";" + kv("kappa", s.kappa);
            break;
    }
    return p;
}

unsigned worker_count(std::size_t jobs) {
    unsigned w = std::thread::hardware_concurrency();
    if (const char *env = std::getenv("LAGFLOW_THREADS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) w = static_cast<unsigned>(v);
    }
    if (w == 0) w = 1;
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(jobs, 1)));
}

std::string sweep(const std::vector<SweepJob> &jobs, unsigned threads, const std::filesystem::path &out) {
    if (jobs.empty()) throw Error(ErrorCode::EmptyGrid, "sweep needs at least one job");
    std::vector<std::string> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < jobs.size();)
            rows[i] = row_of(jobs[i], out.empty() ? out : out / ("row_" + std::to_string(i)));
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
        worker();
    }
    std::string csv = "scenario,params,n,T_est,class,type1,area_law_residual,eps_law_residual,violations\n";
    for (const auto &r : rows) csv += r;
    if (!out.empty()) write_file_atomic(out / "summary.csv", csv);
    return csv;
}

}  // namespace lagflow
