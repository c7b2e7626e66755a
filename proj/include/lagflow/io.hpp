#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lagflow/curve.hpp"

namespace lagflow {

// "%.17g": enough digits to round-trip every double.
std::string format_double(double v);

// Write via a temporary file in the same directory, then rename.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);
std::string read_file(const std::filesystem::path &path);

// CSV with header `phi,x,y`.
std::string curve_to_csv(const DiscreteCurve &curve);
// JSON `{ "n": int, "points": [[x,y],...] }`, plus "eps" when given.
std::string curve_to_json(const DiscreteCurve &curve, std::optional<double> eps = std::nullopt);

DiscreteCurve curve_from_csv(std::string_view text, int n_ambient);
DiscreteCurve curve_from_json(std::string_view text);

void write_curve(const std::filesystem::path &path, const DiscreteCurve &curve,
                 std::optional<double> eps = std::nullopt);
// Dispatches on extension (.csv or .json). CSV files carry no n; `n_ambient` is used.
DiscreteCurve read_curve(const std::filesystem::path &path, int n_ambient = 1);

}  // namespace lagflow
