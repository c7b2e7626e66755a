#include "lagflow/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lagflow/error.hpp"
#include "lagflow/io.hpp"

namespace lagflow {

namespace {

constexpr std::size_t kMinSamples = 20;
constexpr std::size_t kMinTail = 5;

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<long>(mid)));
    return m;
}

std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

}  // namespace

const char *to_string(SingularityClass c) {
    switch (c) {
    case SingularityClass::C1: return "C1";
    case SingularityClass::C2: return "C2";
    case SingularityClass::C3: return "C3";
    case SingularityClass::None: return "none";
    }
    return "none";
}

SingularityReport estimate_singularity(const TrajectoryRecord &rec, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw Error(ErrorCode::InvalidSpec, "tail_fraction must lie in (0, 1]");
    const std::size_t count = rec.size();
    if (count < kMinSamples) {
        throw Error(ErrorCode::InsufficientBlowup,
                    "need at least 20 samples, have " + std::to_string(count));
    }
    const double f0 = rec.max_abs_f.front();
    const double f_peak = *std::max_element(rec.max_abs_f.begin(), rec.max_abs_f.end());
    if (!(f_peak > kBlowupFactor * f0)) {
        std::ostringstream msg;
        msg << "max|f| grew from " << f0 << " to only " << f_peak;
        throw Error(ErrorCode::InsufficientBlowup, msg.str());
    }

    const std::size_t tail = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(count))), kMinTail, count);
    const std::size_t first = count - tail;

    // 1/A^2 = (T - t)/c is linear in t for an exact c/(T - t) blow-up. Times
    // are taken relative to the last sample to avoid cancellation.
    const double t_last = rec.times.back();
    double mean_t = 0.0, mean_y = 0.0;
    for (std::size_t i = first; i < count; ++i) {
        mean_t += rec.times[i] - t_last;
        mean_y += 1.0 / rec.a_proxy_sq[i];
    }
    const double m = static_cast<double>(tail);
    mean_t /= m;
    mean_y /= m;
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = first; i < count; ++i) {
        const double dt = rec.times[i] - t_last - mean_t;
        stt += dt * dt;
        sty += dt * (1.0 / rec.a_proxy_sq[i] - mean_y);
    }
    const double slope = stt > 0.0 ? sty / stt : 0.0;
    if (!(slope < 0.0))
        throw Error(ErrorCode::InsufficientBlowup, "1/|A|^2 does not decrease on the tail");

    SingularityReport rep;
    rep.fit_c = -1.0 / slope;
    rep.T_est = t_last + mean_t - mean_y / slope;
    if (rep.T_est <= t_last) {
        // 1/A^2 is convex on the tail, so the line crosses zero too early. Use
        // the secant through the last two samples instead, and failing that one
        // sample interval past the end.
        const double y1 = 1.0 / rec.a_proxy_sq[count - 2], y2 = 1.0 / rec.a_proxy_sq[count - 1];
        const double dt = t_last - rec.times[count - 2];
        rep.T_est = y2 < y1 ? t_last + y2 * dt / (y1 - y2) : t_last + dt;
    }

    rep.rescaled_sup.resize(count);
    for (std::size_t i = 0; i < count; ++i) rep.rescaled_sup[i] = rec.a_proxy_sq[i] * (rep.T_est - rec.times[i]);
    rep.m_tail.assign(rep.rescaled_sup.begin() + static_cast<long>(first), rep.rescaled_sup.end());
    rep.tail_growth = rep.m_tail.back() / rep.m_tail.front();
    rep.type1 = *std::max_element(rep.m_tail.begin(), rep.m_tail.end()) <= 2.0 * median(rep.m_tail);

    rep.curvature_blowup = rec.max_abs_k.back() >= kBlowupFactor * rec.max_abs_k.front();
    rep.reaches_origin = rec.min_r.back() <= kOriginFraction * rec.max_r.front();
    if (rep.curvature_blowup && rep.reaches_origin)
        rep.cls = SingularityClass::C1;
    else if (rep.curvature_blowup)
        rep.cls = SingularityClass::C2;
    else if (rep.reaches_origin)
        rep.cls = SingularityClass::C3;
    else
        rep.cls = SingularityClass::None;
    return rep;
}

std::string report_to_json(const SingularityReport &rep) {
    std::string out = "{\n";
    out += "  \"T_est\": " + json_number(rep.T_est) + ",\n";
    out += "  \"fit_c\": " + json_number(rep.fit_c) + ",\n";
    out += std::string("  \"class\": \"") + to_string(rep.cls) + "\",\n";
    out += std::string("  \"type1\": ") + (rep.type1 ? "true" : "false") + ",\n";
    out += "  \"tail_growth\": " + json_number(rep.tail_growth) + ",\n";
    out += "  \"m_tail\": [";
    for (std::size_t i = 0; i < rep.m_tail.size(); ++i) {
        if (i) out += ", ";
        out += json_number(rep.m_tail[i]);
    }
    out += "]\n}\n";
    return out;
}

RescaledCurve rescale_huisken(const FlowState &state, double T_est) {
    if (!(T_est > state.t)) {
        std::ostringstream msg;
        msg << "T_est = " << T_est << " is not after t = " << state.t;
        throw Error(ErrorCode::BadHorizon, msg.str());
    }
    const double gap = T_est - state.t;
    return {state.curve.scaled(1.0 / std::sqrt(2.0 * gap)), -0.5 * std::log(gap)};
}

}  // namespace lagflow
