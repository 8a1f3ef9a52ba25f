#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace beamcontact::io {

using Json = nlohmann::ordered_json;

/// 17 significant digits; parses back to the same double.
std::string format_real(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

/// Comma separated, header row, LF line endings. Columns must share a length.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const Json& doc);

struct Series {
    std::string label;
    std::vector<double> y;
    std::string color;
};

/// Minimal SVG 1.1 line plot: axes, one polyline per series, legend.
void write_svg(const std::filesystem::path& path, const std::string& title,
               std::span<const double> x, const std::vector<Series>& series);

}  // namespace beamcontact::io
