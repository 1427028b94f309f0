#include "aerolog/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "aerolog/errors.hpp"
#include "aerolog/time_util.hpp"

namespace aerolog::svg {
namespace {

constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 56;

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c; break;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string value_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Rounds a raw tick spacing up to a 1/2/5 multiple.
double nice_step(double span, int target_ticks) {
  if (span <= 0.0) return 1.0;
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= mult * mag) return mult * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string render_line_chart(
    const std::vector<storage::AggregatePoint>& points,
    storage::AggregateFn fn, const ChartSpec& spec) {
  if (points.empty()) {
    throw ParseError("no data points to plot");
  }

  const double plot_w = spec.width - kMarginLeft - kMarginRight;
  const double plot_h = spec.height - kMarginTop - kMarginBottom;

  double t_min = 0, t_max = 0, v_min = 0, v_max = 0;
  bool first = true;
  for (const auto& p : points) {
    const double t =
        0.5 * (static_cast<double>(p.window_start) + static_cast<double>(p.window_end));
    const double v = storage::select_statistic(p, fn);
    if (first) {
      t_min = t_max = t;
      v_min = v_max = v;
      first = false;
    } else {
      t_min = std::min(t_min, t);
      t_max = std::max(t_max, t);
      v_min = std::min(v_min, v);
      v_max = std::max(v_max, v);
    }
  }
  if (t_max == t_min) t_max = t_min + 1;
  if (v_max == v_min) {
    v_min -= 1;
    v_max += 1;
  } else {
    const double pad = 0.05 * (v_max - v_min);
    v_min -= pad;
    v_max += pad;
  }

  const auto x_of = [&](double t) {
    return kMarginLeft + (t - t_min) / (t_max - t_min) * plot_w;
  };
  const auto y_of = [&](double v) {
    return kMarginTop + (1.0 - (v - v_min) / (v_max - v_min)) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width
      << " " << spec.height << "\">\n";
  out << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" fill=\"white\"/>\n";
  if (!spec.title.empty()) {
    out << "<text x=\"" << spec.width / 2
        << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">"
        << xml_escape(spec.title) << "</text>\n";
  }

  // y grid + labels
  const double y_step = nice_step(v_max - v_min, 5);
  const double y_first = std::ceil(v_min / y_step) * y_step;
  for (double v = y_first; v <= v_max + 1e-9 * y_step; v += y_step) {
    const double y = y_of(v);
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(y) << "\" x2=\""
        << spec.width - kMarginRight << "\" y2=\"" << num(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << value_label(v) << "</text>\n";
  }

  // x ticks: four even divisions labeled with UTC times
  for (int i = 0; i <= 4; ++i) {
    const double t = t_min + (t_max - t_min) * i / 4.0;
    const double x = x_of(t);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << spec.height - kMarginBottom
        << "\" x2=\"" << num(x) << "\" y2=\""
        << spec.height - kMarginBottom + 5
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << num(x) << "\" y=\""
        << spec.height - kMarginBottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"10\">"
        << format_iso8601(static_cast<std::int64_t>(std::llround(t)))
        << "</text>\n";
  }

  // axes
  out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\""
      << kMarginLeft << "\" y2=\"" << spec.height - kMarginBottom
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << kMarginLeft << "\" y1=\""
      << spec.height - kMarginBottom << "\" x2=\"" << spec.width - kMarginRight
      << "\" y2=\"" << spec.height - kMarginBottom
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // axis labels
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\""
      << spec.height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">"
      << xml_escape(spec.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 "
      << kMarginTop + plot_h / 2 << ")\">" << xml_escape(spec.y_label)
      << "</text>\n";

  // data
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
         "points=\"";
  bool sep = false;
  for (const auto& p : points) {
    const double t =
        0.5 * (static_cast<double>(p.window_start) + static_cast<double>(p.window_end));
    const double v = storage::select_statistic(p, fn);
    if (sep) out << ' ';
    out << num(x_of(t)) << ',' << num(y_of(v));
    sep = true;
  }
  out << "\"/>\n";
  for (const auto& p : points) {
    const double t =
        0.5 * (static_cast<double>(p.window_start) + static_cast<double>(p.window_end));
    const double v = storage::select_statistic(p, fn);
    out << "<circle cx=\"" << num(x_of(t)) << "\" cy=\"" << num(y_of(v))
        << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace aerolog::svg
