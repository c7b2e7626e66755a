#include "lagflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lagflow/error.hpp"

namespace lagflow {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::IoError, "rename to " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string curve_to_csv(const DiscreteCurve &curve) {
    std::string out = "phi,x,y\n";
    for (std::size_t j = 0; j < curve.size(); ++j) {
        out += format_double(curve.param(j));
        out += ',';
        out += format_double(curve[j].x);
        out += ',';
        out += format_double(curve[j].y);
        out += '\n';
    }
    return out;
}

std::string curve_to_json(const DiscreteCurve &curve, std::optional<double> eps) {
    std::string out = "{ \"n\": " + std::to_string(curve.n());
    if (eps) out += ", \"eps\": " + format_double(*eps);
    out += ", \"points\": [";
    for (std::size_t j = 0; j < curve.size(); ++j) {
        if (j) out += ", ";
        out += '[' + format_double(curve[j].x) + ", " + format_double(curve[j].y) + ']';
    }
    out += "] }\n";
    return out;
}

DiscreteCurve curve_from_csv(std::string_view text, int n_ambient) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind("phi,x,y", 0) != 0)
        throw Error(ErrorCode::IoError, "curve CSV must start with header phi,x,y");
    std::vector<Vec2> pts;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw Error(ErrorCode::IoError, "malformed CSV row: " + line);
        try {
            pts.push_back({std::stod(line.substr(c1 + 1, c2 - c1 - 1)), std::stod(line.substr(c2 + 1))});
        } catch (const std::exception &) {
            throw Error(ErrorCode::IoError, "malformed number in CSV row: " + line);
        }
    }
    return DiscreteCurve(std::move(pts), n_ambient);
}

DiscreteCurve curve_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::IoError, std::string("curve JSON: ") + e.what());
    }
    if (!doc.contains("n") || !doc.contains("points"))
        throw Error(ErrorCode::IoError, "curve JSON needs fields n and points");
    std::vector<Vec2> pts;
    for (const auto &p : doc.at("points")) {
        if (!p.is_array() || p.size() != 2) throw Error(ErrorCode::IoError, "points must be [x, y] pairs");
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return DiscreteCurve(std::move(pts), doc.at("n").get<int>());
}

void write_curve(const std::filesystem::path &path, const DiscreteCurve &curve, std::optional<double> eps) {
    if (path.extension() == ".csv")
        write_file_atomic(path, curve_to_csv(curve));
    else
        write_file_atomic(path, curve_to_json(curve, eps));
}

DiscreteCurve read_curve(const std::filesystem::path &path, int n_ambient) {
    const std::string text = read_file(path);
    if (path.extension() == ".csv") return curve_from_csv(text, n_ambient);
    return curve_from_json(text);
}

}  // namespace lagflow
