#pragma once

#include <string>
#include <vector>

namespace qsync {

struct LineSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Static SVG line plot: auto-scaled axes, ticks, legend. No display server.
void write_line_plot_svg(const std::string& path, const std::string& title,
                         const std::string& xlabel, const std::string& ylabel,
                         const std::vector<LineSeries>& series);

// Static SVG heatmap over a rectangular grid; values row-major with the y
// grid outermost. NaN cells are drawn gray. Includes a color scale.
void write_heatmap_svg(const std::string& path, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel,
                       const std::vector<double>& x_values,
                       const std::vector<double>& y_values,
                       const std::vector<double>& values,
                       const std::string& value_label);

}  // namespace qsync
