#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainvqe/io.hpp"

namespace chainvqe {

// Self-contained deterministic SVG renderers for the CSV artifacts: line
// plots with error bars (energy / overlap vs layers), concurrence heatmaps,
// and per-site arrow plots of magnetic textures. Plots are aids; the CSVs
// stay the ground truth.

namespace svg {

inline std::string num(double v, int prec = 2) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
  return buf;
}

inline std::string label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Frame {
  double width = 640, height = 440;
  double left = 70, right = 20, top = 30, bottom = 50;
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;

  double px(double x) const {
    return left + (x - x_min) / (x_max - x_min) * (width - left - right);
  }
  double py(double y) const {
    return height - bottom - (y - y_min) / (y_max - y_min) * (height - top - bottom);
  }
};

inline void open_svg(std::string& s, double w, double h) {
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w, 0) + "\" height=\"" +
       num(h, 0) + "\" viewBox=\"0 0 " + num(w, 0) + " " + num(h, 0) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline void axes(std::string& s, const Frame& f, const std::string& title,
                 const std::string& xlabel, const std::string& ylabel) {
  s += "<rect x=\"" + num(f.left) + "\" y=\"" + num(f.top) + "\" width=\"" +
       num(f.width - f.left - f.right) + "\" height=\"" + num(f.height - f.top - f.bottom) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + num(f.width / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" +
       title + "</text>\n";
  s += "<text x=\"" + num(f.width / 2) + "\" y=\"" + num(f.height - 12) +
       "\" text-anchor=\"middle\" font-size=\"12\">" + xlabel + "</text>\n";
  s += "<text x=\"16\" y=\"" + num(f.height / 2) +
       "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " +
       num(f.height / 2) + ")\">" + ylabel + "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = f.x_min + (f.x_max - f.x_min) * t / 4.0;
    const double yv = f.y_min + (f.y_max - f.y_min) * t / 4.0;
    s += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(f.height - f.bottom + 16) +
         "\" text-anchor=\"middle\" font-size=\"10\">" + label(xv) + "</text>\n";
    s += "<text x=\"" + num(f.left - 6) + "\" y=\"" + num(f.py(yv) + 3) +
         "\" text-anchor=\"end\" font-size=\"10\">" + label(yv) + "</text>\n";
    s += "<line x1=\"" + num(f.px(xv)) + "\" y1=\"" + num(f.height - f.bottom) + "\" x2=\"" +
         num(f.px(xv)) + "\" y2=\"" + num(f.height - f.bottom + 4) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(f.left - 4) + "\" y1=\"" + num(f.py(yv)) + "\" x2=\"" +
         num(f.left) + "\" y2=\"" + num(f.py(yv)) + "\" stroke=\"black\"/>\n";
  }
}

// blue->red ramp
inline std::string heat_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255 * t));
  const int b = static_cast<int>(std::lround(255 * (1.0 - t)));
  const int g = static_cast<int>(std::lround(64 + 96 * (1.0 - std::abs(2 * t - 1))));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

} // namespace svg

/// Fig.-2-style line plot with error bars. Plots column value_col against
/// "layers", with err_col as symmetric bars, extra_col as open markers, and an
/// optional dashed horizontal reference line.
inline void render_sweep_svg(const std::vector<std::vector<std::string>>& csv,
                             const std::string& value_col, const std::string& err_col,
                             const std::string& extra_col, const std::string& title,
                             std::optional<double> reference,
                             const std::filesystem::path& out_path) {
  if (csv.size() < 2) throw std::runtime_error("sweep CSV has no data rows");
  const auto& header = csv.front();
  const auto col = [&](const std::string& name) {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == name) return c;
    throw std::runtime_error("sweep CSV missing column " + name);
  };
  const std::size_t c_layers = col("layers");
  const std::size_t c_val = col(value_col);
  const std::size_t c_err = err_col.empty() ? std::size_t(-1) : col(err_col);
  const std::size_t c_extra = extra_col.empty() ? std::size_t(-1) : col(extra_col);

  struct Point {
    double x, y, e, extra;
  };
  std::vector<Point> pts;
  for (std::size_t r = 1; r < csv.size(); ++r) {
    Point p{};
    p.x = std::stod(csv[r][c_layers]);
    p.y = std::stod(csv[r][c_val]);
    p.e = c_err == std::size_t(-1) ? 0.0 : std::stod(csv[r][c_err]);
    p.extra = c_extra == std::size_t(-1) ? std::nan("") : std::stod(csv[r][c_extra]);
    pts.push_back(p);
  }

  svg::Frame f;
  f.x_min = pts.front().x - 0.5;
  f.x_max = pts.back().x + 0.5;
  double lo = pts.front().y, hi = pts.front().y;
  for (const auto& p : pts) {
    lo = std::min({lo, p.y - p.e, std::isnan(p.extra) ? p.y : p.extra});
    hi = std::max({hi, p.y + p.e, std::isnan(p.extra) ? p.y : p.extra});
  }
  if (reference) {
    lo = std::min(lo, *reference);
    hi = std::max(hi, *reference);
  }
  const double pad = (hi - lo) * 0.1 + 1e-12;
  f.y_min = lo - pad;
  f.y_max = hi + pad;

  std::string s;
  svg::open_svg(s, f.width, f.height);
  svg::axes(s, f, title, "layers", value_col);

  if (reference)
    s += "<line x1=\"" + svg::num(f.px(f.x_min)) + "\" y1=\"" + svg::num(f.py(*reference)) +
         "\" x2=\"" + svg::num(f.px(f.x_max)) + "\" y2=\"" + svg::num(f.py(*reference)) +
         "\" stroke=\"#2e8b57\" stroke-dasharray=\"6,4\"/>\n";

  std::string poly = "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (const auto& p : pts) poly += svg::num(f.px(p.x)) + "," + svg::num(f.py(p.y)) + " ";
  s += poly + "\"/>\n";
  for (const auto& p : pts) {
    if (p.e > 0.0)
      s += "<line x1=\"" + svg::num(f.px(p.x)) + "\" y1=\"" + svg::num(f.py(p.y - p.e)) +
           "\" x2=\"" + svg::num(f.px(p.x)) + "\" y2=\"" + svg::num(f.py(p.y + p.e)) +
           "\" stroke=\"#1f4e9c\"/>\n";
    s += "<circle cx=\"" + svg::num(f.px(p.x)) + "\" cy=\"" + svg::num(f.py(p.y)) +
         "\" r=\"3\" fill=\"#1f4e9c\"/>\n";
    if (!std::isnan(p.extra))
      s += "<circle cx=\"" + svg::num(f.px(p.x)) + "\" cy=\"" + svg::num(f.py(p.extra)) +
           "\" r=\"3\" fill=\"none\" stroke=\"#c23b22\"/>\n";
  }
  s += "</svg>\n";
  write_text_file(out_path, s);
}

/// Fig.-3-style heatmap with a value-labeled color scale; NaN cells are gray.
inline void render_concurrence_svg(const std::vector<std::vector<std::string>>& csv,
                                   const std::string& title,
                                   const std::filesystem::path& out_path) {
  const int n = static_cast<int>(csv.size());
  if (n == 0) throw std::runtime_error("empty concurrence CSV");
  std::vector<double> vals(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  double vmax = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::string& cell = csv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const double v = cell == "nan" ? std::nan("") : std::stod(cell);
      vals[static_cast<std::size_t>(i * n + j)] = v;
      if (!std::isnan(v)) vmax = std::max(vmax, v);
    }
  if (vmax == 0.0) vmax = 1.0;

  const double cell = 36, left = 50, top = 40, legend = 70;
  const double w = left + n * cell + legend + 20, h = top + n * cell + 30;
  std::string s;
  svg::open_svg(s, w, h);
  s += "<text x=\"" + svg::num(left + n * cell / 2) +
       "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + title + "</text>\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = vals[static_cast<std::size_t>(i * n + j)];
      const std::string fill = std::isnan(v) ? "#bbbbbb" : svg::heat_color(v / vmax);
      const double x = left + j * cell, y = top + i * cell;
      s += "<rect x=\"" + svg::num(x) + "\" y=\"" + svg::num(y) + "\" width=\"" + svg::num(cell) +
           "\" height=\"" + svg::num(cell) + "\" fill=\"" + fill + "\" stroke=\"white\"/>\n";
      if (n <= 12)
        s += "<text x=\"" + svg::num(x + cell / 2) + "\" y=\"" + svg::num(y + cell / 2 + 3) +
             "\" text-anchor=\"middle\" font-size=\"8\" fill=\"black\">" +
             (std::isnan(v) ? std::string("-") : svg::num(v, 2)) + "</text>\n";
    }
  for (int i = 0; i < n; ++i) {
    s += "<text x=\"" + svg::num(left - 6) + "\" y=\"" + svg::num(top + i * cell + cell / 2 + 3) +
         "\" text-anchor=\"end\" font-size=\"10\">" + std::to_string(i) + "</text>\n";
    s += "<text x=\"" + svg::num(left + i * cell + cell / 2) + "\" y=\"" +
         svg::num(top + n * cell + 14) + "\" text-anchor=\"middle\" font-size=\"10\">" +
         std::to_string(i) + "</text>\n";
  }
  const double lx = left + n * cell + 20;
  for (int t = 0; t <= 20; ++t) {
    const double frac = 1.0 - t / 20.0;
    s += "<rect x=\"" + svg::num(lx) + "\" y=\"" + svg::num(top + t * (n * cell / 21.0)) +
         "\" width=\"14\" height=\"" + svg::num(n * cell / 21.0 + 0.5) + "\" fill=\"" +
         svg::heat_color(frac) + "\"/>\n";
  }
  for (int t = 0; t <= 4; ++t) {
    const double frac = 1.0 - t / 4.0;
    s += "<text x=\"" + svg::num(lx + 18) + "\" y=\"" + svg::num(top + t * (n * cell / 4.0) + 3) +
         "\" font-size=\"9\">" + svg::num(frac * vmax, 3) + "</text>\n";
  }
  s += "</svg>\n";
  write_text_file(out_path, s);
}

/// Fig.-4-style arrow plot: one in-plane arrow per site.
inline void render_texture_svg(const std::vector<std::vector<std::string>>& csv,
                               const std::string& title,
                               const std::filesystem::path& out_path) {
  if (csv.size() < 2) throw std::runtime_error("empty texture CSV");
  struct Row {
    int site;
    double mx, my, mz;
  };
  std::vector<Row> rows;
  for (std::size_t r = 1; r < csv.size(); ++r)
    rows.push_back({std::stoi(csv[r][0]), std::stod(csv[r][1]), std::stod(csv[r][2]),
                    std::stod(csv[r][3])});

  const double cell = 56, base = 110, w = 60 + rows.size() * cell, h = 190;
  const double scale = 0.45 * cell;
  std::string s;
  svg::open_svg(s, w, h);
  s += "<text x=\"" + svg::num(w / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
       title + "</text>\n";
  s += "<line x1=\"30\" y1=\"" + svg::num(base) + "\" x2=\"" + svg::num(w - 30) + "\" y2=\"" +
       svg::num(base) + "\" stroke=\"#cccccc\"/>\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double cx = 30 + (static_cast<double>(k) + 0.5) * cell;
    const double dx = rows[k].mx * scale;
    const double dy = -rows[k].my * scale; // svg y grows downward
    const double tipx = cx + dx, tipy = base + dy;
    s += "<line x1=\"" + svg::num(cx) + "\" y1=\"" + svg::num(base) + "\" x2=\"" + svg::num(tipx) +
         "\" y2=\"" + svg::num(tipy) + "\" stroke=\"#c23b22\" stroke-width=\"2\"/>\n";
    const double ang = std::atan2(tipy - base, tipx - cx);
    const double ah = 6.0;
    s += "<polygon fill=\"#c23b22\" points=\"" + svg::num(tipx) + "," + svg::num(tipy) + " " +
         svg::num(tipx - ah * std::cos(ang - 0.5)) + "," +
         svg::num(tipy - ah * std::sin(ang - 0.5)) + " " +
         svg::num(tipx - ah * std::cos(ang + 0.5)) + "," +
         svg::num(tipy - ah * std::sin(ang + 0.5)) + "\"/>\n";
    s += "<circle cx=\"" + svg::num(cx) + "\" cy=\"" + svg::num(base) +
         "\" r=\"2\" fill=\"black\"/>\n";
    s += "<text x=\"" + svg::num(cx) + "\" y=\"" + svg::num(h - 14) +
         "\" text-anchor=\"middle\" font-size=\"10\">" + std::to_string(rows[k].site) +
         "</text>\n";
  }
  s += "</svg>\n";
  write_text_file(out_path, s);
}

} // namespace chainvqe
