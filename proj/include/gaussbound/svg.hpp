#pragma once

#include <string>

namespace gaussbound {

// Render a sweep report CSV (as produced by write_csv) into a line chart, one
// series per family plus the true-error reference. Infinite values leave gaps.
// Output is deterministic for identical input. Throws std::invalid_argument
// on malformed CSV.
std::string render_chart_svg(const std::string& csv_text);

}  // namespace gaussbound
