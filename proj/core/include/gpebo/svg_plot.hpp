#pragma once

#include "gpebo/csv_io.hpp"

#include <string>
#include <vector>

namespace gpebo {

struct PlotSeries {
    std::string label;
    std::vector<double> y;
};

// One self-contained line chart; series share the x axis. Traces longer than
// ~2000 points are decimated (last point always kept).
std::string render_line_svg(const std::string& title, const std::string& y_label,
                            const std::vector<double>& x, const std::vector<PlotSeries>& series);

// Standard figure set from a run CSV: one overlay of every thetahat column,
// one chart per err_th column, one per err_x column. Returns written paths.
std::vector<std::string> write_run_plots(const std::string& dir, const std::string& stem,
                                         const CsvTable& table);

} // namespace gpebo
