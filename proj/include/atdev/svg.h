#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "atdev/effects.h"
#include "atdev/report.h"

namespace atdev::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Panel {
  std::string title;
  std::vector<Series> series;
};

// Grid of small multiples, `columns` panels per row, each with its own axes
// range, one polyline per series and a legend line.
std::string panels(std::span<const Panel> panels, std::size_t columns);

// p x p small multiples of an effect matrix; cell (k, j) at row k, column j.
std::string matrix(const EffectMatrix& m, std::span<const std::string> names);

std::string heatmap(const HeatMapData& h);
std::string bars(const BarData& b);

}  // namespace atdev::svg
