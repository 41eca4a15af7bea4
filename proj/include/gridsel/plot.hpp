#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gridsel {

struct CurveTable {
    std::vector<std::string> columns;          // header names after the step column
    std::vector<double> steps;
    std::vector<std::vector<double>> series;   // one per column, aligned with steps
};

class PlotError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses `step,<name>,<name>...` CSV. Throws PlotError when there is no header or no data.
CurveTable parse_curve_csv(const std::string& content);

/// Self-contained SVG line chart, one polyline per column with a legend.
/// Output depends only on the table.
std::string render_svg(const CurveTable& table, const std::string& title);

}  // namespace gridsel
