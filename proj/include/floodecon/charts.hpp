#pragma once

#include <string>
#include <vector>

#include "floodecon/engine.hpp"

namespace floodecon {

// One plotted line.
struct ChartSeries {
    std::string label;
    std::vector<double> values;  // x is the 1-based index (simulation step)
    std::string color;           // css color
};

// Minimal self-contained SVG line chart: axes, ticks, legend, one polyline
// per series. Throws "empty series" when there is nothing to plot.
void write_line_chart_svg(const std::string& path, const std::string& title, const std::string& y_label,
                          const std::vector<ChartSeries>& series);

// The nine standard panels (production and money by sector, labor, price,
// wage, unemployment, household wealth, bottleneck shares per scenario),
// overlaying baseline and hazard runs when both are given. Either series
// list may be null; with a single scenario the other scenario's
// bottleneck panel is skipped. Returns the paths written.
std::vector<std::string> emit_charts(const std::vector<MetricsFrame>* baseline,
                                     const std::vector<MetricsFrame>* hazard, const std::string& out_dir);

}  // namespace floodecon
