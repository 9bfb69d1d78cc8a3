#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace sparserec {

enum class PlotKind { SuccessCurve, ErrorCurve, RatioCurve };

PlotKind parse_plot_kind(std::string_view name);

/// Renders a summary.csv (grouped by s, algorithm, eta) as an SVG line chart:
/// sparsity on x, one dashed baseline series (iht / hard) and one solid
/// series per η. Nothing is written if the CSV is malformed or has no rows.
void emit_plot(const std::filesystem::path& summary_csv, PlotKind kind, const std::filesystem::path& out);

/// The SVG document as a string; same validation as emit_plot.
std::string render_plot(const std::filesystem::path& summary_csv, PlotKind kind);

}  // namespace sparserec
