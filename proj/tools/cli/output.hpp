#pragma once

// CSV, JSON metadata and SVG writers. CSV is the primary record; the SVG is
// drawn from the same table.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"

namespace kerrcool::cli {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match header");
    rows.push_back(std::move(row));
  }

  std::size_t index(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::logic_error("no column " + name);
    return static_cast<std::size_t>(it - columns.begin());
  }

  std::vector<double> numeric(const std::string& name) const {
    const std::size_t c = index(name);
    std::vector<double> out;
    for (const auto& r : rows)
      out.push_back(std::holds_alternative<double>(r[c]) ? std::get<double>(r[c])
                                                         : std::numeric_limits<double>::quiet_NaN());
    return out;
  }
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
  out += '\n';
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) out += ',';
      out += std::holds_alternative<double>(r[c]) ? format_number(std::get<double>(r[c]))
                                                  : std::get<std::string>(r[c]);
    }
    out += '\n';
  }
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

/// JSON numbers cannot hold NaN/inf; those become strings.
inline json number_or_text(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

struct Series {
  std::string label;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string title, x_label, y_label;
  bool log_x = false;
  bool log_y = false;
};

namespace detail {

inline std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

inline std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace detail

inline std::string line_plot_svg(const std::vector<Series>& series, const PlotSpec& spec) {
  const double width = 640, height = 420, left = 70, right = 20, top = 40, bottom = 50;
  auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0) && (!spec.log_y || y > 0);
  };
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (usable(s.x[i], s.y[i])) {
        x0 = std::min(x0, tx(s.x[i]));
        x1 = std::max(x1, tx(s.x[i]));
        y0 = std::min(y0, ty(s.y[i]));
        y1 = std::max(y1, ty(s.y[i]));
      }
  if (x0 > x1) x0 = 0, x1 = 1;
  if (y0 > y1) y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * (width - left - right); };
  auto py = [&](double v) { return height - bottom - (ty(v) - y0) / (y1 - y0) * (height - top - bottom); };

  static const char* colors[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         detail::svg_escape(spec.title) + "</text>\n";
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"#888\"/>\n",
                left, top, width - left - right, height - top - bottom);
  out += buf;
  const auto label = [&](double v, bool log) { return detail::fmt_tick(log ? std::pow(10.0, v) : v); };
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"11\">%s</text>\n", left,
                height - bottom + 15, label(x0, spec.log_x).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">%s</text>\n",
                width - right, height - bottom + 15, label(x1, spec.log_x).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">%s</text>\n",
                left - 4, height - bottom, label(y0, spec.log_y).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">%s</text>\n",
                left - 4, top + 10, label(y1, spec.log_y).c_str());
  out += buf;
  out += "<text x=\"355\" y=\"410\" text-anchor=\"middle\" font-size=\"12\">" +
         detail::svg_escape(spec.x_label) + "</text>\n";
  out += "<text x=\"14\" y=\"230\" font-size=\"12\" transform=\"rotate(-90 14 230)\" "
         "text-anchor=\"middle\">" +
         detail::svg_escape(spec.y_label) + "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 6];
    std::string path;
    bool pen = false;
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (!usable(series[s].x[i], series[s].y[i])) {
        pen = false;
        continue;
      }
      std::snprintf(buf, sizeof buf, "%c%.2f,%.2f ", pen ? 'L' : 'M', px(series[s].x[i]),
                    py(series[s].y[i]));
      path += buf;
      pen = true;
    }
    out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-size=\"11\" fill=\"%s\">%s</text>\n",
                  width - right - 150, top + 15 + 14.0 * s, color,
                  detail::svg_escape(series[s].label).c_str());
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

/// Heatmap of z over a regular (x, y) grid given as flat samples.
inline std::string heatmap_svg(const std::vector<double>& x, const std::vector<double>& y,
                               const std::vector<double>& z, const PlotSpec& spec) {
  std::vector<double> xs = x, ys = y;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  double z0 = 1e300, z1 = -1e300;
  for (double v : z)
    if (std::isfinite(v)) z0 = std::min(z0, v), z1 = std::max(z1, v);
  if (z0 > z1) z0 = 0, z1 = 1;
  if (z1 == z0) z1 = z0 + 1;
  const double left = 70, top = 40, size = 340;
  const double cw = size / xs.size(), ch = size / ys.size();
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"520\" height=\"430\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"240\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         detail::svg_escape(spec.title) + "</text>\n";
  char buf[512];
  for (std::size_t k = 0; k < z.size(); ++k) {
    const auto ix = std::lower_bound(xs.begin(), xs.end(), x[k]) - xs.begin();
    const auto iy = std::lower_bound(ys.begin(), ys.end(), y[k]) - ys.begin();
    std::string fill = "#cccccc";
    if (std::isfinite(z[k])) {
      const double t = (z[k] - z0) / (z1 - z0);
      std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(255 * t),
                    static_cast<int>(60 + 120 * (1 - std::abs(2 * t - 1))),
                    static_cast<int>(255 * (1 - t)));
      fill = buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"%s\"/>\n",
                  left + ix * cw, top + size - (iy + 1) * ch, cw + 0.05, ch + 0.05, fill.c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"11\">%s</text>\n", left,
                top + size + 15, detail::fmt_tick(xs.front()).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">%s</text>\n",
                left + size, top + size + 15, detail::fmt_tick(xs.back()).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">%s</text>\n",
                left - 4, top + size, detail::fmt_tick(ys.front()).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">%s</text>\n",
                left - 4, top + 10, detail::fmt_tick(ys.back()).c_str());
  out += buf;
  out += "<text x=\"240\" y=\"415\" text-anchor=\"middle\" font-size=\"12\">" +
         detail::svg_escape(spec.x_label) + "</text>\n";
  out += "<text x=\"14\" y=\"210\" font-size=\"12\" transform=\"rotate(-90 14 210)\" "
         "text-anchor=\"middle\">" +
         detail::svg_escape(spec.y_label) + "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" font-size=\"11\">max %s</text>\n"
                "<text x=\"%g\" y=\"%g\" font-size=\"11\">min %s</text>\n"
                "<text x=\"%g\" y=\"%g\" font-size=\"11\">grey: infeasible</text>\n",
                left + size + 8, top + 12, detail::fmt_tick(z1).c_str(), left + size + 8, top + 28,
                detail::fmt_tick(z0).c_str(), left + size + 8, top + 44);
  out += buf;
  out += "</svg>\n";
  return out;
}

}  // namespace kerrcool::cli
