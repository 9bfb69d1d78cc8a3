#include "sparserec/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "sparserec/error.hpp"

namespace sparserec {

namespace fs = std::filesystem;

PlotKind parse_plot_kind(std::string_view name) {
    if (name == "success") return PlotKind::SuccessCurve;
    if (name == "error") return PlotKind::ErrorCurve;
    if (name == "ratio") return PlotKind::RatioCurve;
    fail(ErrorKind::InvalidArgument, "unknown plot kind '" + std::string(name) + "' (expected success, error or ratio)");
}

namespace {

struct Series {
    std::string label;
    bool dashed = false;
    std::vector<std::pair<double, double>> points;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_cell(const std::string& cell, const fs::path& path, std::size_t row, const char* column) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size())
        fail(ErrorKind::Parse, path.string() + ": row " + std::to_string(row) + ": invalid " + column + " value '" +
                                   cell + "'");
    return v;
}

std::string fmt(double v, int precision = 4) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

std::vector<Series> load_series(const fs::path& path, PlotKind kind) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Parse, path.string() + ": missing header row");
    const auto header = split(line);
    auto column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) fail(ErrorKind::Parse, path.string() + ": header lacks column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const char* metric = kind == PlotKind::SuccessCurve ? "success_mean"
                         : kind == PlotKind::ErrorCurve ? "rel_error_mean"
                                                        : "threshold_ratio_mean";
    const std::size_t col_s = column("s");
    const std::size_t col_alg = column("algorithm");
    const std::size_t col_eta = column("eta");
    const std::size_t col_y = column(metric);

    std::map<std::pair<std::string, double>, Series> by_key;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            fail(ErrorKind::Parse, path.string() + ": row " + std::to_string(row) + ": expected " +
                                       std::to_string(header.size()) + " fields, found " + std::to_string(cells.size()));
        const double s = parse_cell(cells[col_s], path, row, "s");
        const double y = parse_cell(cells[col_y], path, row, metric);
        const std::string& alg = cells[col_alg];
        if (alg.empty()) fail(ErrorKind::Parse, path.string() + ": row " + std::to_string(row) + ": empty algorithm");
        const bool baseline = cells[col_eta] == "none";
        const double eta = baseline ? -1.0 : parse_cell(cells[col_eta], path, row, "eta");

        auto& series = by_key[{alg, eta}];
        if (series.label.empty()) {
            series.dashed = baseline;
            series.label = baseline ? alg : alg + " \xCE\xB7 = " + fmt(eta);
        }
        series.points.emplace_back(s, y);
    }
    if (by_key.empty()) fail(ErrorKind::Parse, path.string() + ": no data rows");

    std::vector<Series> out;
    for (auto& [key, series] : by_key) {
        std::sort(series.points.begin(), series.points.end());
        out.push_back(std::move(series));
    }
    return out;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string render_plot(const fs::path& summary_csv, PlotKind kind) {
    const auto series = load_series(summary_csv, kind);

    double xmin = INFINITY, xmax = -INFINITY, ymax = 0.0;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            if (std::isfinite(y)) ymax = std::max(ymax, y);
        }
    }
    if (xmax == xmin) {
        xmin -= 1.0;
        xmax += 1.0;
    }
    const double ylo = 0.0;
    const double yhi = kind == PlotKind::SuccessCurve ? 1.0 : (ymax > 0.0 ? ymax * 1.05 : 1.0);

    constexpr double width = 720, height = 440, left = 70, right = 190, top = 30, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return top + (1.0 - (std::clamp(y, ylo, yhi) - ylo) / (yhi - ylo)) * plot_h; };

    const char* ylabel = kind == PlotKind::SuccessCurve ? "success fraction"
                         : kind == PlotKind::ErrorCurve ? "mean relative error"
                                                        : "mean distance ratio";

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<g stroke=\"black\" stroke-width=\"1\">\n"
        << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
        << top + plot_h << "\"/>\n"
        << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h << "\"/>\n"
        << "</g>\n";

    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ylo + (yhi - ylo) * i / 5.0;
        svg << "<line x1=\"" << px(xv) << "\" y1=\"" << top + plot_h << "\" x2=\"" << px(xv) << "\" y2=\""
            << top + plot_h + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px(xv) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << fmt(xv)
            << "</text>\n";
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << left << "\" y2=\"" << py(yv)
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv, 3)
            << "</text>\n";
    }
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">sparsity s</text>\n";
    svg << "<text x=\"18\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << top + plot_h / 2 << ")\">" << ylabel << "</text>\n";

    std::size_t color = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* stroke = s.dashed ? "black" : kPalette[color++ % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\"";
        if (s.dashed) svg << " stroke-dasharray=\"6,4\"";
        svg << " points=\"";
        for (std::size_t k = 0; k < s.points.size(); ++k) {
            if (k) svg << ' ';
            svg << fmt(px(s.points[k].first), 6) << ',' << fmt(py(s.points[k].second), 6);
        }
        svg << "\"/>\n";

        const double ly = top + 10 + 20.0 * static_cast<double>(i);
        const double lx = left + plot_w + 15;
        svg << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 30 << "\" y2=\"" << ly << "\" stroke=\""
            << stroke << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
        svg << "<text x=\"" << lx + 38 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_plot(const fs::path& summary_csv, PlotKind kind, const fs::path& out) {
    const std::string doc = render_plot(summary_csv, kind);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::ofstream file(out);
    if (!file) fail(ErrorKind::Io, "cannot open '" + out.string() + "' for writing");
    file << doc;
    if (!file) fail(ErrorKind::Io, "failed writing '" + out.string() + "'");
}

}  // namespace sparserec
