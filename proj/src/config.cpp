#include "lagflow/config.hpp"

#include <json.hpp>

#include "lagflow/error.hpp"

namespace lagflow {

namespace {

using nlohmann::ordered_json;

template <class T>
void take(const ordered_json &j, const char *key, T &dst) {
    if (j.contains(key)) dst = j.at(key).get<T>();
}

template <class T>
void take(const ordered_json &j, const char *key, std::optional<T> &dst) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null())
        dst.reset();
    else
        dst = j.at(key).get<T>();
}

ordered_json opt(const std::optional<double> &v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

ResampleMode resample_from_string(const std::string &name) {
    for (ResampleMode m : {ResampleMode::Arclength, ResampleMode::Adaptive})
        if (name == to_string(m)) return m;
    throw Error(ErrorCode::InvalidSpec, "unknown resample mode '" + name + "'");
}

std::string config_to_json(const ScenarioSpec &s, const FlowConfig &f) {
    ordered_json j;
    auto &sc = j["scenario"];
    sc["kind"] = to_string(s.kind);
    sc["n"] = s.n;
    sc["N"] = s.N;
    sc["R"] = s.R;
    sc["center"] = {s.center.x, s.center.y};
    sc["a"] = s.a;
    sc["l"] = s.l;
    sc["omega0"] = s.omega0;
    sc["neck_width"] = s.neck_width;
    sc["separation"] = s.separation;
    sc["kappa"] = s.kappa;
    auto &fl = j["flow"];
    fl["cfl"] = f.cfl;
    fl["resample_every"] = f.resample_every;
    fl["resample"] = to_string(f.resample);
    fl["stop_min_r"] = opt(f.stop_min_r);
    fl["stop_max_f"] = f.stop_max_f;
    fl["t_max"] = opt(f.t_max);
    fl["resolution_floor"] = f.resolution_floor;
    fl["record_every"] = f.record_every;
    fl["snapshot_every"] = f.snapshot_every;
    fl["max_steps"] = f.max_steps;
    return j.dump(2) + "\n";
}

void apply_config_json(std::string_view text, ScenarioSpec &s, FlowConfig &f) {
    try {
        const ordered_json j = ordered_json::parse(text);
        if (!j.is_object()) throw Error(ErrorCode::InvalidSpec, "config must be a JSON object");
        for (const auto &[key, _] : j.items())
            if (key != "scenario" && key != "flow") throw Error(ErrorCode::InvalidSpec, "unknown config section '" + key + "'");
        if (j.contains("scenario")) {
            const auto &sc = j.at("scenario");
            if (sc.contains("kind")) {
                ScenarioSpec d = scenario_defaults(scenario_from_string(sc.at("kind").get<std::string>()));
                d.n = s.n;
                d.N = s.N;
                s = d;
            }
            take(sc, "n", s.n);
            take(sc, "N", s.N);
            take(sc, "R", s.R);
            if (sc.contains("center")) {
                const auto &c = sc.at("center");
                if (!c.is_array() || c.size() != 2) throw Error(ErrorCode::InvalidSpec, "center must be [x, y]");
                s.center = {c[0].get<double>(), c[1].get<double>()};
            }
            take(sc, "a", s.a);
            take(sc, "l", s.l);
            take(sc, "omega0", s.omega0);
            take(sc, "neck_width", s.neck_width);
            take(sc, "separation", s.separation);
            take(sc, "kappa", s.kappa);
        }
        if (j.contains("flow")) {
            const auto &fl = j.at("flow");
            take(fl, "cfl", f.cfl);
            take(fl, "resample_every", f.resample_every);
            if (fl.contains("resample")) f.resample = resample_from_string(fl.at("resample").get<std::string>());
            take(fl, "stop_min_r", f.stop_min_r);
            take(fl, "stop_max_f", f.stop_max_f);
            take(fl, "t_max", f.t_max);
            take(fl, "resolution_floor", f.resolution_floor);
            take(fl, "record_every", f.record_every);
            take(fl, "snapshot_every", f.snapshot_every);
            take(fl, "max_steps", f.max_steps);
        }
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::InvalidSpec, std::string("config: ") + e.what());
    }
    f.n = s.n;
}

}  // namespace lagflow
