#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "fastkm/matrix.hpp"
#include "fastkm/rng.hpp"

namespace fastkm {

/// Parses numeric CSV text (one point per row, ',' separated, optional single
/// header row, LF or CRLF line endings). Errors carry the 1-based line number.
Dataset parse_csv(std::istream& in, bool has_header = false);

Dataset load_csv(const std::filesystem::path& path, bool has_header = false);

/// Writes rows with shortest round-trip decimal rendering, LF line endings.
template <class Tag>
void write_csv(std::ostream& out, const RowMatrix<Tag>& m);

void save_csv(const Dataset& ds, const std::filesystem::path& path);
void save_csv(const Centers& centers, const std::filesystem::path& path);

/// One label per line.
void save_labels(const Assignment& labels, const std::filesystem::path& path);

/// Renders a double so that parsing it back yields the same value.
std::string format_double(double v);

/// Per-cluster point distribution. Both have per-axis standard deviation `spread`.
enum class BlobShape {
  gaussian,  // isotropic normal
  uniform,   // axis-aligned cube of half-width spread*sqrt(3)
};

/// Blobs around well-separated random centers.
struct BlobSpec {
  std::size_t n = 1000;
  std::size_t d = 2;
  std::size_t k = 3;
  double spread = 1.0;       // per-axis standard deviation
  double separation = 10.0;  // minimum distance between generating centers
  Seed seed = 0;
  BlobShape shape = BlobShape::gaussian;

  void validate() const;
};

struct Blobs {
  Dataset points;
  Assignment labels;  // generating cluster of each point
  Centers centers;
};

/// Centers are placed by rejection sampling in [0, 10*separation]^d; point i
/// belongs to cluster i % k. Deterministic in (spec, seed).
/// Throws UsageError when k centers cannot be placed within the attempt budget.
Blobs generate_blobs(const BlobSpec& spec);

std::string_view to_string(BlobShape shape);
BlobShape blob_shape_from_string(std::string_view name);

}  // namespace fastkm
