#include "beamcontact/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace beamcontact::io {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    return out;
}

}  // namespace

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    if (table.header.size() != table.columns.size()) {
        throw std::invalid_argument("write_csv: header and column counts differ");
    }
    const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
    for (const auto& c : table.columns) {
        if (c.size() != rows) {
            throw std::invalid_argument("write_csv: ragged columns");
        }
    }
    auto out = open_for_write(path);
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        out << (j ? "," : "") << table.header[j];
    }
    out << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < table.columns.size(); ++j) {
            out << (j ? "," : "") << format_real(table.columns[j][i]);
        }
        out << '\n';
    }
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read '" + path.string() + "'");
    }
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) {
        return table;
    }
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) {
        table.header.push_back(cell);
    }
    table.columns.resize(table.header.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream rs(line);
        std::size_t j = 0;
        for (std::string cell; std::getline(rs, cell, ','); ++j) {
            if (j >= table.columns.size()) {
                throw std::runtime_error("read_csv: row wider than header");
            }
            table.columns[j].push_back(cell.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                    : std::strtod(cell.c_str(), nullptr));
        }
    }
    return table;
}

void write_json(const std::filesystem::path& path, const Json& doc) {
    auto out = open_for_write(path);
    out << doc.dump(2) << '\n';
}

void write_svg(const std::filesystem::path& path, const std::string& title,
               std::span<const double> x, const std::vector<Series>& series) {
    constexpr double kWidth = 640.0, kHeight = 400.0, kMargin = 50.0;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (double v : x) {
        xmin = std::min(xmin, v);
        xmax = std::max(xmax, v);
    }
    for (const auto& s : series) {
        for (double v : s.y) {
            if (!std::isfinite(v)) continue;
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    auto px = [&](double v) { return kMargin + (v - xmin) / (xmax - xmin) * (kWidth - 2 * kMargin); };
    auto py = [&](double v) {
        return kHeight - kMargin - (v - ymin) / (ymax - ymin) * (kHeight - 2 * kMargin);
    };

    auto out = open_for_write(path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" "
                       "height=\"{}\" viewBox=\"0 0 {} {}\">\n",
                       kWidth, kHeight, kWidth, kHeight)
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << fmt::format("<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\" "
                       "text-anchor=\"middle\">{}</text>\n",
                       kWidth / 2, title);
    // axes
    out << fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n",
                       kMargin, kHeight - kMargin, kWidth - kMargin)
        << fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n",
                       kMargin, kMargin, kHeight - kMargin);
    auto label = [&](double xx, double yy, const std::string& text, const char* anchor) {
        out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" "
                           "font-size=\"11\" text-anchor=\"{}\">{}</text>\n",
                           xx, yy, anchor, text);
    };
    label(kMargin, kHeight - kMargin + 16, fmt::format("{:.4g}", xmin), "middle");
    label(kWidth - kMargin, kHeight - kMargin + 16, fmt::format("{:.4g}", xmax), "middle");
    label(kMargin - 6, kHeight - kMargin, fmt::format("{:.4g}", ymin), "end");
    label(kMargin - 6, kMargin + 4, fmt::format("{:.4g}", ymax), "end");
    label(kWidth / 2, kHeight - 12, "x", "middle");

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < std::min(x.size(), s.y.size()); ++i) {
            out << fmt::format("{}{:.2f},{:.2f}", i ? " " : "", px(x[i]), py(s.y[i]));
        }
        out << "\"/>\n";
        const double ly = kMargin + 14.0 * static_cast<double>(k);
        out << fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
                           "stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                           kWidth - kMargin - 90, ly, kWidth - kMargin - 70, ly, s.color);
        label(kWidth - kMargin - 66, ly + 4, s.label, "start");
    }
    out << "</svg>\n";
}

}  // namespace beamcontact::io
