#pragma once

#include <string>

#include "superconv/study.hpp"

namespace superconv {

// Log-log SVG chart of the six error columns against delta, with fitted-slope
// annotations and dashed theory guide lines. Degenerate (all-zero or
// floor-level) columns are skipped with a note in the chart.
std::string render_plot_svg(const StudyResult& result);

void emit_plot(const StudyResult& result, const std::string& path);

} // namespace superconv
