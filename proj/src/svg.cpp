#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "lagflow/error.hpp"
#include "lagflow/experiment.hpp"
#include "lagflow/io.hpp"

namespace lagflow {

namespace {

constexpr double kWidth = 640.0;
constexpr double kPad = 40.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

struct Box {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

    // Ranges flat to within rounding get +-5% (or +-0.5 at zero) so the
    // panel shows a line rather than amplified noise.
    static void widen(double &lo, double &hi) {
        const double mag = std::max(std::abs(lo), std::abs(hi));
        if (hi - lo <= 1e-6 * mag || !(hi > lo)) {
            const double c = 0.5 * (lo + hi), d = mag > 0.0 ? 0.05 * mag : 0.5;
            lo = c - d, hi = c + d;
        }
    }
    void widen() {
        widen(x0, x1);
        widen(y0, y1);
    }
};

// Maps data coordinates into a panel at (left, top) of size w x h, y up.
struct Panel {
    Box box;
    double left, top, w, h;

    double px(double x) const { return left + (x - box.x0) / (box.x1 - box.x0) * w; }
    double py(double y) const { return top + h - (y - box.y0) / (box.y1 - box.y0) * h; }

    std::string frame(const std::string &xlabel, const std::string &ylabel) const {
        std::string s = "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(w) + "\" height=\"" +
                        num(h) + "\" fill=\"none\" stroke=\"#444\"/>\n";
        s += "<text x=\"" + num(left + w / 2) + "\" y=\"" + num(top + h + 28) +
             "\" text-anchor=\"middle\" font-size=\"12\">" + xlabel + "</text>\n";
        s += "<text x=\"" + num(left - 28) + "\" y=\"" + num(top + h / 2) + "\" text-anchor=\"middle\" font-size=\"12\"" +
             " transform=\"rotate(-90 " + num(left - 28) + " " + num(top + h / 2) + ")\">" + ylabel + "</text>\n";
        auto tick = [&](double x, double y, const char *anchor, double v) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3g", v);
            return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor +
                   "\" font-size=\"10\">" + buf + "</text>\n";
        };
        s += tick(left, top + h + 14, "start", box.x0) + tick(left + w, top + h + 14, "end", box.x1);
        s += tick(left - 4, top + h, "end", box.y0) + tick(left - 4, top + 10, "end", box.y1);
        return s;
    }

    std::string polyline(const std::vector<double> &x, const std::vector<double> &y, const std::string &style) const {
        std::string s = "<polyline fill=\"none\" " + style + " points=\"";
        for (std::size_t i = 0; i < x.size(); ++i)
            if (std::isfinite(x[i]) && std::isfinite(y[i])) s += num(px(x[i])) + "," + num(py(y[i])) + " ";
        return s + "\"/>\n";
    }
};

std::string header(double h) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           num(kWidth) + "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(h) +
           "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

Box bounds(const std::vector<double> &x, const std::vector<double> &y) {
    Box b{INFINITY, -INFINITY, INFINITY, -INFINITY};
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        b.x0 = std::min(b.x0, x[i]), b.x1 = std::max(b.x1, x[i]);
        b.y0 = std::min(b.y0, y[i]), b.y1 = std::max(b.y1, y[i]);
    }
    if (!std::isfinite(b.x0)) b = Box{};
    b.widen();
    return b;
}

}  // namespace

std::string svg_curves(const std::vector<DiscreteCurve> &snapshots, const std::vector<double> &times) {
    double ext = 0.0;
    for (const auto &c : snapshots)
        for (Vec2 p : c.points()) ext = std::max({ext, std::abs(p.x), std::abs(p.y)});
    if (!(ext > 0.0)) ext = 1.0;
    ext *= 1.05;
    const Panel P{{-ext, ext, -ext, ext}, kPad, kPad, kWidth - 2 * kPad, kWidth - 2 * kPad};

    std::string s = header(kWidth);
    s += P.frame("x", "y");
    s += "<line x1=\"" + num(P.px(-ext)) + "\" y1=\"" + num(P.py(0)) + "\" x2=\"" + num(P.px(ext)) + "\" y2=\"" +
         num(P.py(0)) + "\" stroke=\"#ccc\"/>\n";
    s += "<line x1=\"" + num(P.px(0)) + "\" y1=\"" + num(P.py(-ext)) + "\" x2=\"" + num(P.px(0)) + "\" y2=\"" +
         num(P.py(ext)) + "\" stroke=\"#ccc\"/>\n";
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        double u = snapshots.size() > 1 ? static_cast<double>(i) / static_cast<double>(snapshots.size() - 1) : 0.0;
        if (times.size() == snapshots.size() && times.back() > times.front())
            u = (times[i] - times.front()) / (times.back() - times.front());
        char color[16];
        std::snprintf(color, sizeof color, "#%02x%02x%02x", static_cast<int>(std::lround(255 * u)), 0,
                      static_cast<int>(std::lround(255 * (1 - u))));
        std::string pts;
        for (Vec2 p : snapshots[i].points()) pts += num(P.px(p.x)) + "," + num(P.py(p.y)) + " ";
        s += "<polygon fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1\" points=\"" + pts + "\"/>\n";
    }
    s += "<circle cx=\"" + num(P.px(0)) + "\" cy=\"" + num(P.py(0)) + "\" r=\"3\" fill=\"black\"/>\n";
    return s + "</svg>\n";
}

std::string svg_invariants(const InvariantSeries &series) {
    const double ph = 240.0;
    std::string s = header(2 * ph + 3 * kPad);

    std::vector<double> predicted;
    if (series.slope_index)
        for (double t : series.t) predicted.push_back(series.area0 - 2.0 * std::numbers::pi * *series.slope_index * t);
    std::vector<double> tt = series.t, aa = series.area;
    tt.insert(tt.end(), series.t.begin(), series.t.begin() + static_cast<long>(predicted.size()));
    aa.insert(aa.end(), predicted.begin(), predicted.end());
    const Panel A{bounds(tt, aa), kPad + 10, kPad, kWidth - 2 * kPad - 10, ph};
    s += A.frame("t", "area");
    s += A.polyline(series.t, series.area, "stroke=\"#1f4e9a\" stroke-width=\"2\"");
    if (!predicted.empty()) s += A.polyline(series.t, predicted, "stroke=\"#d62728\" stroke-dasharray=\"6 4\"");

    std::vector<double> mt(series.t.begin(), series.t.begin() + static_cast<long>(std::min(series.t.size(), series.m.size())));
    const Panel M{bounds(mt, series.m), kPad + 10, 2 * kPad + ph, kWidth - 2 * kPad - 10, ph};
    s += M.frame("t", "m(t)");
    if (!series.m.empty()) s += M.polyline(mt, series.m, "stroke=\"#2ca02c\" stroke-width=\"2\"");
    return s + "</svg>\n";
}

void emit_svg(const std::vector<DiscreteCurve> &snapshots, const std::vector<double> &times,
              const InvariantSeries &series, const std::filesystem::path &dir) {
    write_file_atomic(dir / "curves.svg", svg_curves(snapshots, times));
    write_file_atomic(dir / "invariants.svg", svg_invariants(series));
}

}  // namespace lagflow
