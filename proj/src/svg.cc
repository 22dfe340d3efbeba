#include "atdev/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace atdev::svg {

namespace {

constexpr double kPanelW = 220, kPanelH = 170, kPad = 28;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" font-family=\"sans-serif\" font-size=\"10\">\n<rect width=\"100%\" height=\"100%\" "
         "fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\">" +
         escape(s) + "</text>\n";
}

std::string panel(const Panel& p, double ox, double oy) {
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const auto& s : p.series) {
    for (double v : s.x) xlo = std::min(xlo, v), xhi = std::max(xhi, v);
    for (double v : s.y) ylo = std::min(ylo, v), yhi = std::max(yhi, v);
  }
  if (!(xhi > xlo)) xlo -= 0.5, xhi += 0.5;
  if (!(yhi - ylo > 1e-9)) ylo -= 0.5, yhi += 0.5;
  const double x0 = ox + kPad, x1 = ox + kPanelW - 6, y0 = oy + kPanelH - kPad, y1 = oy + 16;
  auto sx = [&](double v) { return x0 + (v - xlo) / (xhi - xlo) * (x1 - x0); };
  auto sy = [&](double v) { return y0 - (v - ylo) / (yhi - ylo) * (y0 - y1); };

  std::string out = "<g>\n";
  out += text(ox + kPanelW / 2, oy + 11, p.title);
  out += "<rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" + num(x1 - x0) +
         "\" height=\"" + num(y0 - y1) + "\" fill=\"none\" stroke=\"#888\"/>\n";
  out += text(x0, y0 + 11, num(xlo), "start") + text(x1, y0 + 11, num(xhi), "end");
  out += text(x0 - 2, y0, num(ylo), "end") + text(x0 - 2, y1 + 8, num(yhi), "end");
  std::string legend;
  for (std::size_t i = 0; i < p.series.size(); ++i) {
    const auto& s = p.series[i];
    const char* colour = kPalette[i % std::size(kPalette)];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t t = 0; t < s.x.size(); ++t) out += num(sx(s.x[t])) + "," + num(sy(s.y[t])) + " ";
    out += "\"/>\n";
    if (!s.label.empty()) legend += (legend.empty() ? "" : " / ") + s.label;
  }
  if (!legend.empty()) out += text(ox + kPanelW / 2, oy + kPanelH - 4, legend);
  return out + "</g>\n";
}

}  // namespace

std::string panels(std::span<const Panel> ps, std::size_t columns) {
  columns = std::max<std::size_t>(columns, 1);
  const std::size_t rows = (ps.size() + columns - 1) / columns;
  std::string out = header(kPanelW * static_cast<double>(columns), kPanelH * static_cast<double>(rows));
  for (std::size_t i = 0; i < ps.size(); ++i)
    out += panel(ps[i], kPanelW * static_cast<double>(i % columns), kPanelH * static_cast<double>(i / columns));
  return out + "</svg>\n";
}

std::string matrix(const EffectMatrix& m, std::span<const std::string> names) {
  std::vector<Panel> ps;
  for (std::size_t k = 0; k < m.p; ++k) {
    for (std::size_t j = 0; j < m.p; ++j) {
      Panel p{"(" + std::to_string(k + 1) + "," + std::to_string(j + 1) + ") " + names[j], {}};
      if (const auto& c = m.cell(k, j)) p.series.push_back({"", c->grid, c->values});
      ps.push_back(std::move(p));
    }
  }
  return panels(ps, m.p);
}

std::string heatmap(const HeatMapData& h) {
  const std::size_t p = h.size();
  const double cell = 40, margin = 50;
  const double side = margin + cell * static_cast<double>(p) + 10;
  std::string out = header(side, side + 16) + text(side / 2, 14, h.title);
  for (std::size_t i = 0; i < p; ++i) {
    out += text(margin - 4, margin + cell * (static_cast<double>(i) + 0.6), h.names[i], "end");
    out += text(margin + cell * (static_cast<double>(i) + 0.5), margin - 6, h.names[i]);
    for (std::size_t j = 0; j < p; ++j) {
      const double v = h.normalized[i * p + j];
      // Nonnegative: black to white. Signed: blue (-1) through white to red (+1).
      int r, g, b;
      if (h.scale == HeatScale::Nonnegative) {
        r = g = b = static_cast<int>(std::lround(255 * std::clamp(v, 0.0, 1.0)));
      } else {
        const double a = std::clamp(std::abs(v), 0.0, 1.0);
        const int fade = static_cast<int>(std::lround(255 * (1 - a)));
        r = v >= 0 ? 255 : fade;
        b = v >= 0 ? fade : 255;
        g = fade;
      }
      char fill[16];
      std::snprintf(fill, sizeof fill, "#%02x%02x%02x", r, g, b);
      out += "<rect x=\"" + num(margin + cell * static_cast<double>(j)) + "\" y=\"" +
             num(margin + cell * static_cast<double>(i)) + "\" width=\"" + num(cell) + "\" height=\"" +
             num(cell) + "\" fill=\"" + fill + "\" stroke=\"#ccc\"/>\n";
    }
  }
  return out + "</svg>\n";
}

std::string bars(const BarData& b) {
  const double bw = 36, h = 160, margin = 30;
  double mx = 0.0;
  for (double v : b.values) mx = std::max(mx, v);
  const double w = margin * 2 + bw * static_cast<double>(b.values.size());
  std::string out = header(w, h + margin * 2) + text(w / 2, 14, b.title);
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    const double len = mx > 0 ? b.values[i] / mx * h : 0.0;
    const double x = margin + bw * static_cast<double>(i);
    out += "<rect x=\"" + num(x + 4) + "\" y=\"" + num(margin + h - len) + "\" width=\"" + num(bw - 8) +
           "\" height=\"" + num(len) + "\" fill=\"#1f77b4\"/>\n";
    out += text(x + bw / 2, margin + h + 12, b.names[i]);
    out += text(x + bw / 2, margin + h - len - 3, num(b.values[i]));
  }
  return out + "</svg>\n";
}

}  // namespace atdev::svg
