#include "fastkm/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace fastkm {

namespace {

std::string at_line(std::size_t line) { return ", line " + std::to_string(line); }

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_field(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (field.empty() || ec == std::errc::invalid_argument || ptr != last) {
    throw DataError("non-numeric field" + at_line(line));
  }
  if (ec == std::errc::result_out_of_range || !std::isfinite(v)) {
    throw DataError("non-finite field" + at_line(line));
  }
  return v;
}

}  // namespace

Dataset parse_csv(std::istream& in, bool has_header) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::string line;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header_pending) {
      header_pending = false;
      continue;
    }
    if (is_blank(line)) continue;
    std::size_t fields = 0;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      values.push_back(parse_field(rest.substr(0, comma), line_no));
      ++fields;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (rows == 0) {
      cols = fields;
    } else if (fields != cols) {
      throw DataError("ragged row: expected " + std::to_string(cols) + " fields, found " +
                      std::to_string(fields) + at_line(line_no));
    }
    ++rows;
  }
  if (rows == 0) {
    throw DataError("no data rows" + at_line(line_no));
  }
  return Dataset(rows, cols, std::move(values));
}

Dataset load_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return parse_csv(in, has_header);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

template <class Tag>
void write_csv(std::ostream& out, const RowMatrix<Tag>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) out << ',';
      out << format_double(r[j]);
    }
    out << '\n';
  }
}

template void write_csv(std::ostream&, const Dataset&);
template void write_csv(std::ostream&, const Centers&);

namespace {

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  writer(out);
  out.flush();
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

}  // namespace

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  if (ds.empty()) throw UsageError("cannot save an empty dataset");
  write_file(path, [&](std::ostream& out) { write_csv(out, ds); });
}

void save_csv(const Centers& centers, const std::filesystem::path& path) {
  if (centers.empty()) throw UsageError("cannot save empty centers");
  write_file(path, [&](std::ostream& out) { write_csv(out, centers); });
}

void save_labels(const Assignment& labels, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) {
    for (const auto l : labels) out << l << '\n';
  });
}

void BlobSpec::validate() const {
  if (k < 1) throw UsageError("blob spec: k must be >= 1");
  if (d < 1) throw UsageError("blob spec: d must be >= 1");
  if (n < k) throw UsageError("blob spec: n must be >= k");
  if (!(spread > 0.0) || !std::isfinite(spread)) throw UsageError("blob spec: spread must be > 0");
  if (!(separation >= 0.0) || !std::isfinite(separation)) {
    throw UsageError("blob spec: separation must be >= 0");
  }
}

Blobs generate_blobs(const BlobSpec& spec) {
  spec.validate();
  constexpr std::size_t kAttemptsPerCenter = 10000;

  // A zero separation still needs a nonzero box.
  const double side = spec.separation > 0.0 ? 10.0 * spec.separation : 10.0;
  const double min_sq = spec.separation * spec.separation;

  Rng center_rng(spec.seed, Stream::blob_centers);
  Centers centers(spec.k, spec.d);
  std::vector<double> candidate(spec.d);
  for (std::size_t c = 0; c < spec.k; ++c) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kAttemptsPerCenter && !placed; ++attempt) {
      for (auto& x : candidate) x = center_rng.uniform(0.0, side);
      placed = true;
      for (std::size_t o = 0; o < c && placed; ++o) {
        double sq = 0.0;
        for (std::size_t j = 0; j < spec.d; ++j) {
          const double diff = candidate[j] - centers(o, j);
          sq += diff * diff;
        }
        placed = sq >= min_sq;
      }
    }
    if (!placed) {
      throw UsageError("blob spec: could not place " + std::to_string(spec.k) +
                       " centers with separation " + format_double(spec.separation));
    }
    std::copy(candidate.begin(), candidate.end(), centers.row(c).begin());
  }

  Rng noise_rng(spec.seed, Stream::blob_noise);
  std::vector<double> values(spec.n * spec.d);
  Assignment labels(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const std::size_t c = i % spec.k;
    labels[i] = c;
    for (std::size_t j = 0; j < spec.d; ++j) {
      const double offset = spec.shape == BlobShape::gaussian
                                ? noise_rng.normal()
                                : std::sqrt(3.0) * noise_rng.uniform(-1.0, 1.0);
      values[i * spec.d + j] = centers(c, j) + spec.spread * offset;
    }
  }
  return Blobs{Dataset(spec.n, spec.d, std::move(values)), std::move(labels), std::move(centers)};
}

std::string_view to_string(BlobShape shape) {
  return shape == BlobShape::gaussian ? "gaussian" : "uniform";
}

BlobShape blob_shape_from_string(std::string_view name) {
  if (name == "gaussian") return BlobShape::gaussian;
  if (name == "uniform") return BlobShape::uniform;
  throw UsageError("unknown blob shape '" + std::string(name) + "' (expected gaussian or uniform)");
}

}  // namespace fastkm
