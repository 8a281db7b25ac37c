#include "swinv/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace swinv {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;
constexpr int kTicks = 5;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(const char* pattern, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

struct Range {
  double lo;
  double hi;
};

Range padded(double lo, double hi) {
  if (hi == lo) {
    const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
    return {lo - pad, hi + pad};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

std::string emit_svg_plot(const PlotSeries& series, const PlotLabels& labels) {
  if (series.size() < 2) throw std::invalid_argument("plot needs at least two points");
  for (const auto& [x, y] : series) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw std::invalid_argument("plot series contains a non-finite value");
    }
  }
  const auto [xmin_it, xmax_it] = std::minmax_element(
      series.begin(), series.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  const auto [ymin_it, ymax_it] = std::minmax_element(
      series.begin(), series.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  const Range xr = padded(xmin_it->first, xmax_it->first);
  const Range yr = padded(ymin_it->second, ymax_it->second);

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt("%g", kWidth) +
         "\" height=\"" + fmt("%g", kHeight) + "\" viewBox=\"0 0 " + fmt("%g", kWidth) + " " +
         fmt("%g", kHeight) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!labels.title.empty()) {
    out += "<text x=\"" + fmt("%.2f", kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" " +
           "font-family=\"sans-serif\" font-size=\"15\">" + escape(labels.title) + "</text>\n";
  }
  out += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  out += "<rect x=\"" + fmt("%.2f", kLeft) + "\" y=\"" + fmt("%.2f", kTop) + "\" width=\"" +
         fmt("%.2f", pw) + "\" height=\"" + fmt("%.2f", ph) + "\"/>\n";
  for (int i = 0; i < kTicks; ++i) {
    const double fx = kLeft + pw * i / (kTicks - 1);
    const double fy = kTop + ph * i / (kTicks - 1);
    out += "<line x1=\"" + fmt("%.2f", fx) + "\" y1=\"" + fmt("%.2f", kTop + ph) + "\" x2=\"" +
           fmt("%.2f", fx) + "\" y2=\"" + fmt("%.2f", kTop + ph + 5) + "\"/>\n";
    out += "<line x1=\"" + fmt("%.2f", kLeft - 5) + "\" y1=\"" + fmt("%.2f", fy) + "\" x2=\"" +
           fmt("%.2f", kLeft) + "\" y2=\"" + fmt("%.2f", fy) + "\"/>\n";
  }
  out += "</g>\n";
  out += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i < kTicks; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / (kTicks - 1);
    const double yv = yr.hi - (yr.hi - yr.lo) * i / (kTicks - 1);
    out += "<text x=\"" + fmt("%.2f", px(xv)) + "\" y=\"" + fmt("%.2f", kTop + ph + 18) +
           "\" text-anchor=\"middle\">" + fmt("%.4g", xv) + "</text>\n";
    out += "<text x=\"" + fmt("%.2f", kLeft - 8) + "\" y=\"" + fmt("%.2f", py(yv) + 4) +
           "\" text-anchor=\"end\">" + fmt("%.4g", yv) + "</text>\n";
  }
  out += "<text x=\"" + fmt("%.2f", kLeft + pw / 2) + "\" y=\"" + fmt("%.2f", kHeight - 12) +
         "\" text-anchor=\"middle\">" + escape(labels.x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + fmt("%.2f", kTop + ph / 2) + "\" text-anchor=\"middle\" " +
         "transform=\"rotate(-90 16 " + fmt("%.2f", kTop + ph / 2) + ")\">" +
         escape(labels.y_label) + "</text>\n";
  out += "</g>\n";
  out += "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i) out += ' ';
    out += fmt("%.2f", px(series[i].first)) + "," + fmt("%.2f", py(series[i].second));
  }
  out += "\"/>\n</svg>\n";
  return out;
}

}  // namespace swinv
