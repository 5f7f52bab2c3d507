#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "fastkm/engine.hpp"

namespace fastkm {

/// Flattened trace rows as read back from the CSV pair.
struct CoordinateRow {
  Stage stage;
  std::size_t iteration;
  std::size_t center;
  std::size_t dim;
  double value;
};

struct StatsRow {
  Stage stage;
  std::size_t iteration;
  double wcss;
  double max_shift;
};

/// `stage,iteration,center_id,dim,value`, one row per coordinate per iteration.
void write_trace_coordinates(std::ostream& out, const IterationTrace& trace);
/// `stage,iteration,wcss,max_shift`, one row per iteration.
void write_trace_stats(std::ostream& out, const IterationTrace& trace);

std::vector<CoordinateRow> read_trace_coordinates(std::istream& in);
std::vector<StatsRow> read_trace_stats(std::istream& in);

std::vector<CoordinateRow> load_trace_coordinates(const std::filesystem::path& path);
std::vector<StatsRow> load_trace_stats(const std::filesystem::path& path);

}  // namespace fastkm
