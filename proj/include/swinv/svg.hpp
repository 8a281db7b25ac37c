#pragma once

#include <string>
#include <utility>
#include <vector>

namespace swinv {

using PlotSeries = std::vector<std::pair<double, double>>;

struct PlotLabels {
  std::string title;
  std::string x_label = "s";
  std::string y_label;
};

/// Standalone SVG 1.1 line plot: axes, five ticks per axis, one polyline. Auto-scales to the
/// data with 5% margins. Output is a pure function of the input.
/// Throws std::invalid_argument for fewer than two points or non-finite values.
std::string emit_svg_plot(const PlotSeries& series, const PlotLabels& labels);

}  // namespace swinv
