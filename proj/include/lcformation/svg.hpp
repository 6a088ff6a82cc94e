#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcf::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  bool equal_aspect = false;  // planar traces: one world unit is the same length on both axes
};

struct Style {
  int width = 820;
  int panel_height = 420;
  std::size_t max_points = 4000;  // longer series are decimated with a fixed stride
};

namespace detail {

inline const char *color(std::size_t k) {
  static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
  return palette[k % (sizeof palette / sizeof *palette)];
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

inline std::string escape(const std::string &s) {
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo <= hi)) {
      lo = -1.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      const double m = std::max(std::abs(lo), 1.0) * 0.5;
      lo -= m;
      hi += m;
    } else {
      const double m = 0.05 * (hi - lo);
      lo -= m;
      hi += m;
    }
  }
  double span() const { return hi - lo; }
};

inline void draw_panel(std::ostringstream &os, const Panel &panel, const Style &style, double top) {
  const double left = 70.0, right = 150.0, head = 30.0, foot = 45.0;
  const double pw = style.width - left - right;
  const double ph = style.panel_height - head - foot;
  const double x0 = left, y0 = top + head;

  Range xr, yr;
  for (const auto &s : panel.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.pad();
  yr.pad();
  if (panel.equal_aspect) {
    const double scale = std::max(xr.span() / pw, yr.span() / ph);
    const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
    xr = {cx - 0.5 * scale * pw, cx + 0.5 * scale * pw};
    yr = {cy - 0.5 * scale * ph, cy + 0.5 * scale * ph};
  }
  auto px = [&](double v) { return x0 + (v - xr.lo) / xr.span() * pw; };
  auto py = [&](double v) { return y0 + ph - (v - yr.lo) / yr.span() * ph; };

  os << "<g>\n";
  os << "<text x=\"" << num(x0 + pw / 2) << "\" y=\"" << num(top + 20)
     << "\" text-anchor=\"middle\" font-size=\"15\">" << escape(panel.title) << "</text>\n";
  os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(pw)
     << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#000\"/>\n";
  constexpr int ticks = 5;
  for (int k = 0; k <= ticks; ++k) {
    const double fx = xr.lo + xr.span() * k / ticks;
    const double fy = yr.lo + yr.span() * k / ticks;
    os << "<line x1=\"" << num(px(fx)) << "\" y1=\"" << num(y0 + ph) << "\" x2=\"" << num(px(fx))
       << "\" y2=\"" << num(y0 + ph + 5) << "\" stroke=\"#000\"/>\n";
    os << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(y0 + ph + 18)
       << "\" text-anchor=\"middle\" font-size=\"11\">" << tick(fx) << "</text>\n";
    os << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(py(fy)) << "\" x2=\"" << num(x0)
       << "\" y2=\"" << num(py(fy)) << "\" stroke=\"#000\"/>\n";
    os << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(py(fy) + 4)
       << "\" text-anchor=\"end\" font-size=\"11\">" << tick(fy) << "</text>\n";
  }
  if (yr.lo < 0.0 && yr.hi > 0.0 && !panel.equal_aspect) {
    os << "<line x1=\"" << num(x0) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(x0 + pw)
       << "\" y2=\"" << num(py(0)) << "\" stroke=\"#bbb\" stroke-dasharray=\"4,3\"/>\n";
  }
  os << "<text x=\"" << num(x0 + pw / 2) << "\" y=\"" << num(y0 + ph + 36)
     << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(panel.x_label) << "</text>\n";
  os << "<text x=\"" << num(18) << "\" y=\"" << num(y0 + ph / 2) << "\" text-anchor=\"middle\" "
     << "font-size=\"12\" transform=\"rotate(-90 18 " << num(y0 + ph / 2) << ")\">"
     << escape(panel.y_label) << "</text>\n";

  for (std::size_t k = 0; k < panel.series.size(); ++k) {
    const auto &s = panel.series[k];
    const std::size_t n = std::min(s.x.size(), s.y.size());
    const std::size_t stride = std::max<std::size_t>(1, (n + style.max_points - 1) / style.max_points);
    os << "<polyline fill=\"none\" stroke=\"" << color(k) << "\" stroke-width=\"1.3\" points=\"";
    bool first = true;
    for (std::size_t j = 0; j < n; j += stride) {
      if (!std::isfinite(s.x[j]) || !std::isfinite(s.y[j])) continue;
      os << (first ? "" : " ") << num(px(s.x[j])) << ',' << num(py(s.y[j]));
      first = false;
    }
    if (n > 0 && (n - 1) % stride != 0 && std::isfinite(s.x[n - 1]) && std::isfinite(s.y[n - 1])) {
      os << ' ' << num(px(s.x[n - 1])) << ',' << num(py(s.y[n - 1]));
    }
    os << "\"/>\n";
    const double ly = y0 + 12 + 16.0 * static_cast<double>(k);
    os << "<line x1=\"" << num(x0 + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
       << num(x0 + pw + 32) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color(k)
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num(x0 + pw + 38) << "\" y=\"" << num(ly + 4) << "\" font-size=\"11\">"
       << escape(s.label) << "</text>\n";
  }
  os << "</g>\n";
}

}  // namespace detail

/// Standalone SVG with the panels stacked vertically. Output depends only on the input, so equal
/// inputs give byte-identical documents. Throws std::invalid_argument when there is nothing to draw.
inline std::string emit_svg(const std::vector<Panel> &panels, const Style &style = {}) {
  if (panels.empty()) throw std::invalid_argument("emit_svg: no panels");
  for (const auto &p : panels) {
    if (p.series.empty()) throw std::invalid_argument("emit_svg: panel '" + p.title + "' has no series");
    for (const auto &s : p.series) {
      if (s.x.empty() || s.x.size() != s.y.size()) {
        throw std::invalid_argument("emit_svg: series '" + s.label + "' is empty or ragged");
      }
    }
  }
  std::ostringstream os;
  const int height = style.panel_height * static_cast<int>(panels.size());
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << style.width << ' ' << height
     << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  for (std::size_t k = 0; k < panels.size(); ++k) {
    detail::draw_panel(os, panels[k], style, static_cast<double>(style.panel_height) * static_cast<double>(k));
  }
  os << "</svg>\n";
  return os.str();
}

inline std::string emit_svg(const Panel &panel, const Style &style = {}) {
  return emit_svg(std::vector<Panel>{panel}, style);
}

}  // namespace lcf::svg
