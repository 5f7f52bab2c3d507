#include "fastkm/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "fastkm/dataset.hpp"

namespace fastkm {

namespace {

constexpr std::string_view kCoordinateHeader = "stage,iteration,center_id,dim,value";
constexpr std::string_view kStatsHeader = "stage,iteration,wcss,max_shift";

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

template <class T>
T parse_number(std::string_view s, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError("malformed trace field '" + std::string(s) + "', line " + std::to_string(line));
  }
  return v;
}

/// Reads a header-checked CSV, invoking row(fields, line_no) per data line.
template <class Row>
void read_rows(std::istream& in, std::string_view header, std::size_t width, Row&& row) {
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  bool any = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != header) {
        throw DataError("trace header mismatch, expected '" + std::string(header) + "', line " +
                        std::to_string(line_no));
      }
      seen_header = true;
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != width) {
      throw DataError("trace row has " + std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(width) + ", line " + std::to_string(line_no));
    }
    row(fields, line_no);
    any = true;
  }
  if (!any) throw DataError("trace file has no rows");
}

}  // namespace

void write_trace_coordinates(std::ostream& out, const IterationTrace& trace) {
  out << kCoordinateHeader << '\n';
  for (const auto& rec : trace) {
    for (std::size_t c = 0; c < rec.centers.rows(); ++c) {
      for (std::size_t j = 0; j < rec.centers.cols(); ++j) {
        out << to_string(rec.stage) << ',' << rec.iteration << ',' << c << ',' << j << ','
            << format_double(rec.centers(c, j)) << '\n';
      }
    }
  }
}

void write_trace_stats(std::ostream& out, const IterationTrace& trace) {
  out << kStatsHeader << '\n';
  for (const auto& rec : trace) {
    out << to_string(rec.stage) << ',' << rec.iteration << ',' << format_double(rec.wcss) << ','
        << format_double(rec.max_shift) << '\n';
  }
}

std::vector<CoordinateRow> read_trace_coordinates(std::istream& in) {
  std::vector<CoordinateRow> rows;
  read_rows(in, kCoordinateHeader, 5, [&](const auto& f, std::size_t line) {
    rows.push_back({stage_from_string(f[0]), parse_number<std::size_t>(f[1], line),
                    parse_number<std::size_t>(f[2], line), parse_number<std::size_t>(f[3], line),
                    parse_number<double>(f[4], line)});
  });
  return rows;
}

std::vector<StatsRow> read_trace_stats(std::istream& in) {
  std::vector<StatsRow> rows;
  read_rows(in, kStatsHeader, 4, [&](const auto& f, std::size_t line) {
    rows.push_back({stage_from_string(f[0]), parse_number<std::size_t>(f[1], line),
                    parse_number<double>(f[2], line), parse_number<double>(f[3], line)});
  });
  return rows;
}

std::vector<CoordinateRow> load_trace_coordinates(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_trace_coordinates(in);
}

std::vector<StatsRow> load_trace_stats(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_trace_stats(in);
}

}  // namespace fastkm
