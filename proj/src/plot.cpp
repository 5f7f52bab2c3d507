#include "fastkm/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <tuple>
#include <sstream>

namespace fastkm::plot {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kFastColor = "#1f4fd8";
constexpr const char* kSlowColor = "#d62728";
constexpr const char* kBaselineColor = "#2c2c2c";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(hi > lo)) {
      const double w = lo == 0.0 ? 1.0 : std::fabs(lo) * 0.05;
      lo -= w;
      hi += w;
    } else {
      const double w = (hi - lo) * 0.05;
      lo -= w;
      hi += w;
    }
  }
};

std::string marker_svg(Marker m, double x, double y, const std::string& color) {
  std::ostringstream os;
  switch (m) {
    case Marker::none:
      break;
    case Marker::square:
      os << "<rect x=\"" << num(x - 3) << "\" y=\"" << num(y - 3)
         << "\" width=\"6\" height=\"6\" fill=\"none\" stroke=\"" << color << "\"/>";
      break;
    case Marker::diamond:
      os << "<polygon points=\"" << num(x) << ',' << num(y - 4) << ' ' << num(x + 4) << ',' << num(y)
         << ' ' << num(x) << ',' << num(y + 4) << ' ' << num(x - 4) << ',' << num(y)
         << "\" fill=\"" << color << "\"/>";
      break;
    case Marker::circle:
      os << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"3\" fill=\"" << color
         << "\"/>";
      break;
  }
  return os.str();
}

}  // namespace

std::string Figure::render_svg() const {
  Range xr, yr;
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_y && !(s.y[i] > 0.0)) continue;
      xr.add(s.x[i]);
      yr.add(ty(s.y[i]));
    }
  }
  if (!(xr.hi >= xr.lo)) {
    xr = {0.0, 1.0};
    yr = {0.0, 1.0};
  }
  xr.pad();
  if (log_y) {
    yr.lo = std::floor(yr.lo);
    yr.hi = std::ceil(yr.hi);
    if (yr.hi <= yr.lo) yr.hi = yr.lo + 1.0;
  } else {
    yr.pad();
  }

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (ty(y) - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(title) << "</text>\n";
  os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
     << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int t = 0; t <= 5; ++t) {
    const double xv = xr.lo + (xr.hi - xr.lo) * t / 5.0;
    const double x = px(xv);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(x)
       << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>"
       << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + ph + 18)
       << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
  }
  if (log_y) {
    for (double e = yr.lo; e <= yr.hi; e += 1.0) {
      const double y = kTop + ph - (e - yr.lo) / (yr.hi - yr.lo) * ph;
      os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kLeft)
         << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>"
         << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4)
         << "\" text-anchor=\"end\">1e" << static_cast<int>(e) << "</text>\n";
    }
  } else {
    for (int t = 0; t <= 5; ++t) {
      const double yv = yr.lo + (yr.hi - yr.lo) * t / 5.0;
      const double y = kTop + ph - (yv - yr.lo) / (yr.hi - yr.lo) * ph;
      os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kLeft)
         << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>"
         << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4)
         << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
    }
  }
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15)
     << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << num(kTop + ph / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";

  std::size_t legend_row = 0;
  for (const auto& s : series) {
    os << "<g>";
    std::ostringstream pts;
    bool any = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_y && !(s.y[i] > 0.0)) continue;
      pts << (any ? " " : "") << num(px(s.x[i])) << ',' << num(py(s.y[i]));
      any = true;
    }
    if (any) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\""
         << pts.str() << "\"/>";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (log_y && !(s.y[i] > 0.0)) continue;
        os << marker_svg(s.marker, px(s.x[i]), py(s.y[i]), s.color);
      }
    }
    os << "</g>\n";
    const double ly = kTop + 14 + 18.0 * static_cast<double>(legend_row++);
    const double lx = kLeft + pw + 12;
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 20)
       << "\" y2=\"" << num(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>"
       << marker_svg(s.marker, lx + 10, ly, s.color) << "<text x=\"" << num(lx + 26) << "\" y=\""
       << num(ly + 4) << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

namespace {

const char* stage_color(Stage s) {
  switch (s) {
    case Stage::fast: return kFastColor;
    case Stage::slow: return kSlowColor;
    case Stage::baseline: return kBaselineColor;
  }
  return kBaselineColor;
}

Marker stage_marker(Stage s) {
  switch (s) {
    case Stage::fast: return Marker::square;
    case Stage::slow: return Marker::diamond;
    case Stage::baseline: return Marker::circle;
  }
  return Marker::circle;
}

void require_rows(bool empty) {
  if (empty) throw DataError("trace is empty");
}

/// Iterations of the fast stage, used to offset slow-stage x positions.
std::size_t fast_iterations(const std::vector<CoordinateRow>& rows) {
  std::size_t q = 0;
  for (const auto& r : rows)
    if (r.stage == Stage::fast) q = std::max(q, r.iteration);
  return q;
}

}  // namespace

Figure coordinate_figure(const std::vector<CoordinateRow>& rows, std::size_t center, std::size_t dim) {
  require_rows(rows.empty());
  std::size_t max_center = 0, max_dim = 0;
  for (const auto& r : rows) {
    max_center = std::max(max_center, r.center);
    max_dim = std::max(max_dim, r.dim);
  }
  if (center > max_center) {
    throw UsageError("center " + std::to_string(center) + " out of range (trace has " +
                     std::to_string(max_center + 1) + ")");
  }
  if (dim > max_dim) {
    throw UsageError("dim " + std::to_string(dim) + " out of range (trace has " +
                     std::to_string(max_dim + 1) + ")");
  }

  const std::size_t offset = fast_iterations(rows);
  std::map<Stage, Series> by_stage;
  for (const auto& r : rows) {
    if (r.center != center || r.dim != dim) continue;
    auto& s = by_stage[r.stage];
    s.label = std::string(to_string(r.stage)) + " stage";
    s.color = stage_color(r.stage);
    s.marker = stage_marker(r.stage);
    s.x.push_back(static_cast<double>(r.iteration + (r.stage == Stage::slow ? offset : 0)));
    s.y.push_back(r.value);
  }
  if (by_stage.count(Stage::fast) && by_stage.count(Stage::slow)) {
    auto& fast = by_stage[Stage::fast];
    auto& slow = by_stage[Stage::slow];
    slow.x.insert(slow.x.begin(), fast.x.back());
    slow.y.insert(slow.y.begin(), fast.y.back());
  }
  Figure fig;
  fig.title = "center " + std::to_string(center) + ", coordinate " + std::to_string(dim);
  fig.x_label = "iteration";
  fig.y_label = "coordinate value";
  for (auto& [stage, s] : by_stage) fig.series.push_back(std::move(s));
  return fig;
}

Figure center_path_figure(const std::vector<CoordinateRow>& rows, std::size_t dim_x,
                          std::size_t dim_y) {
  require_rows(rows.empty());
  std::size_t max_dim = 0, max_center = 0;
  for (const auto& r : rows) {
    max_dim = std::max(max_dim, r.dim);
    max_center = std::max(max_center, r.center);
  }
  if (dim_x > max_dim || dim_y > max_dim) {
    throw UsageError("requested dims out of range (trace has " + std::to_string(max_dim + 1) + ")");
  }
  // (stage, center, iteration) -> (x, y)
  std::map<std::tuple<Stage, std::size_t, std::size_t>, std::pair<double, double>> pos;
  for (const auto& r : rows) {
    auto& p = pos[{r.stage, r.center, r.iteration}];
    if (r.dim == dim_x) p.first = r.value;
    if (r.dim == dim_y) p.second = r.value;
  }
  std::map<std::pair<Stage, std::size_t>, Series> paths;
  for (const auto& [key, p] : pos) {
    const auto [stage, center, iteration] = key;
    auto& s = paths[{stage, center}];
    s.label = std::string(to_string(stage)) + " C" + std::to_string(center);
    s.color = stage_color(stage);
    s.marker = stage_marker(stage);
    s.x.push_back(p.first);
    s.y.push_back(p.second);
  }
  for (std::size_t c = 0; c <= max_center; ++c) {
    const auto fast = paths.find({Stage::fast, c});
    const auto slow = paths.find({Stage::slow, c});
    if (fast != paths.end() && slow != paths.end()) {
      slow->second.x.insert(slow->second.x.begin(), fast->second.x.back());
      slow->second.y.insert(slow->second.y.begin(), fast->second.y.back());
    }
  }
  Figure fig;
  fig.title = "center paths";
  fig.x_label = "coordinate " + std::to_string(dim_x);
  fig.y_label = "coordinate " + std::to_string(dim_y);
  for (auto& [key, s] : paths) fig.series.push_back(std::move(s));
  return fig;
}

Figure shift_figure(const std::vector<StatsRow>& rows) {
  require_rows(rows.empty());
  std::size_t offset = 0;
  for (const auto& r : rows)
    if (r.stage == Stage::fast) offset = std::max(offset, r.iteration);
  std::map<Stage, Series> by_stage;
  for (const auto& r : rows) {
    auto& s = by_stage[r.stage];
    s.label = std::string(to_string(r.stage)) + " stage";
    s.color = stage_color(r.stage);
    s.marker = stage_marker(r.stage);
    s.x.push_back(static_cast<double>(r.iteration + (r.stage == Stage::slow ? offset : 0)));
    s.y.push_back(r.max_shift);
  }
  Figure fig;
  fig.title = "center convergence";
  fig.x_label = "iteration";
  fig.y_label = "max squared center shift";
  fig.log_y = true;
  for (auto& [stage, s] : by_stage) fig.series.push_back(std::move(s));
  return fig;
}

Figure timing_figure(std::vector<BenchReport> reports) {
  if (reports.empty()) throw DataError("no bench reports given");
  std::sort(reports.begin(), reports.end(),
            [](const BenchReport& a, const BenchReport& b) { return a.n < b.n; });
  Series base{"baseline k-means", kSlowColor, Marker::circle, {}, {}};
  Series two{"two-stage k-means", kFastColor, Marker::circle, {}, {}};
  for (const auto& r : reports) {
    if (r.cells.empty()) throw DataError("bench report has no cells");
    base.x.push_back(static_cast<double>(r.n));
    base.y.push_back(r.cells.front().median_time_baseline);
    two.x.push_back(static_cast<double>(r.n));
    two.y.push_back(r.cells.front().median_time_two_stage);
  }
  Figure fig;
  fig.title = "wall time vs dataset size";
  fig.x_label = "points";
  fig.y_label = "median seconds";
  fig.series = {std::move(base), std::move(two)};
  return fig;
}

}  // namespace fastkm::plot
