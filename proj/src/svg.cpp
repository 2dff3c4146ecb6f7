#include "scorewin/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "scorewin/errors.hpp"

namespace scorewin::svg {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 520.0;
constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 56.0;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_curve(const analysis::BinnedCurve& curve,
                         const std::string& title, const std::string& x_label,
                         const std::string& y_label) {
  std::vector<std::pair<double, double>> points;
  for (const analysis::Bin& bin : curve.bins) {
    if (bin.count > 0 && !std::isnan(bin.aggregate)) {
      points.emplace_back(0.5 * (bin.x_low + bin.x_high), bin.aggregate);
    }
  }

  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  if (!curve.bins.empty()) {
    x_min = curve.bins.front().x_low;
    x_max = curve.bins.back().x_high;
  }
  if (!points.empty()) {
    y_min = y_max = points.front().second;
    for (const auto& [x, y] : points) {
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (y_min == y_max) {
    y_min -= 1.0;
    y_max += 1.0;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto sx = [&](double x) {
    return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w;
  };
  const auto sy = [&](double y) {
    return kMarginTop + (y_max - y) / (y_max - y_min) * plot_h;
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
         "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) +
         " " + num(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" + escape(title) +
         "</text>\n";

  // Axes box and ticks.
  out += "<rect x=\"" + num(kMarginLeft) + "\" y=\"" + num(kMarginTop) +
         "\" width=\"" + num(plot_w) + "\" height=\"" + num(plot_h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    const double fx = x_min + (x_max - x_min) * t / ticks;
    const double fy = y_min + (y_max - y_min) * t / ticks;
    out += "<line x1=\"" + num(sx(fx)) + "\" y1=\"" + num(kMarginTop + plot_h) +
           "\" x2=\"" + num(sx(fx)) + "\" y2=\"" +
           num(kMarginTop + plot_h + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(sx(fx)) + "\" y=\"" +
           num(kMarginTop + plot_h + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + num(fx) + "</text>\n";
    out += "<line x1=\"" + num(kMarginLeft - 5) + "\" y1=\"" + num(sy(fy)) +
           "\" x2=\"" + num(kMarginLeft) + "\" y2=\"" + num(sy(fy)) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(kMarginLeft - 8) + "\" y=\"" + num(sy(fy) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" + num(fy) + "</text>\n";
  }
  if (y_min < 0.0 && y_max > 0.0) {
    out += "<line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(sy(0.0)) +
           "\" x2=\"" + num(kMarginLeft + plot_w) + "\" y2=\"" + num(sy(0.0)) +
           "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
  }
  out += "<text x=\"" + num(kMarginLeft + plot_w / 2) + "\" y=\"" +
         num(kHeight - 12) + "\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"13\">" + escape(x_label) +
         "</text>\n";
  out += "<text x=\"18\" y=\"" + num(kMarginTop + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 " +
         num(kMarginTop + plot_h / 2) + ")\">" + escape(y_label) + "</text>\n";

  if (points.size() > 1) {
    out += "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (i) out += " ";
      out += num(sx(points[i].first)) + "," + num(sy(points[i].second));
    }
    out += "\"/>\n";
  }
  for (const auto& [x, y] : points) {
    out += "<circle cx=\"" + num(sx(x)) + "\" cy=\"" + num(sy(y)) +
           "\" r=\"2.5\" fill=\"#c0392b\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

void save_curve(const analysis::BinnedCurve& curve, const std::string& title,
                const std::string& x_label, const std::string& y_label,
                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << render_curve(curve, title, x_label, y_label);
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace scorewin::svg
