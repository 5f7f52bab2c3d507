#pragma once

#include <string>
#include <vector>

#include "fastkm/bench.hpp"
#include "fastkm/trace_io.hpp"

namespace fastkm::plot {

enum class Marker { none, square, diamond, circle };

struct Series {
  std::string label;
  std::string color;
  Marker marker = Marker::none;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal static SVG line chart. Output depends only on the inputs.
struct Figure {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<Series> series;

  std::string render_svg() const;
};

/// One center coordinate vs iteration. The slow series starts at the fast
/// series' last point (the hand-off).
Figure coordinate_figure(const std::vector<CoordinateRow>& rows, std::size_t center, std::size_t dim);

/// Center paths in the (dim_x, dim_y) plane; squares for fast, diamonds for slow.
Figure center_path_figure(const std::vector<CoordinateRow>& rows, std::size_t dim_x,
                          std::size_t dim_y);

/// Largest squared center shift per iteration on a log axis.
Figure shift_figure(const std::vector<StatsRow>& rows);

/// Median wall time vs dataset size for both variants, using each report's
/// first cell.
Figure timing_figure(std::vector<BenchReport> reports);

}  // namespace fastkm::plot
