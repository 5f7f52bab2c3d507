#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "fastkm/dataset.hpp"
#include "fastkm/engine.hpp"

namespace fastkm {

/// Distance evaluations of a Lloyd run: k * q * n. Throws UsageError on a zero
/// input and std::overflow_error when the product does not fit in 64 bits.
std::uint64_t predicted_cost(std::uint64_t k, std::uint64_t q, std::uint64_t n);

/// k*q_fast*n_fast + k*q_slow*n, with the same error contract.
std::uint64_t predicted_two_stage_cost(std::uint64_t k, std::uint64_t q_fast, std::uint64_t n_fast,
                                       std::uint64_t q_slow, std::uint64_t n);

struct FileSource {
  std::filesystem::path path;
  bool has_header = false;
};

using DatasetSource = std::variant<BlobSpec, FileSource>;

/// A grid of (sample fraction, tolerance) cells. Each cell's tolerance is the
/// stopping rule of the baseline and of the slow stage; the fast stage uses
/// max(tolerance, fast_tolerance).
struct BenchConfig {
  DatasetSource source = BlobSpec{};
  std::size_t k = 3;
  std::vector<double> sample_fractions{0.10};
  std::vector<double> tolerances{1e-6};
  std::size_t repetitions = 5;
  Seed seed = 0;
  std::size_t workers = 1;
  std::size_t max_iters = 300;
  double fast_tolerance = 1e-3;

  void validate() const;
};

/// Parses the `key = value` bench config format (see docs/bench-config.md).
/// Throws UsageError naming the offending key.
BenchConfig parse_bench_config(std::istream& in);
BenchConfig load_bench_config(const std::filesystem::path& path);

struct BenchCell {
  double fraction = 0.0;
  double tolerance = 0.0;
  double median_time_two_stage = 0.0;  // seconds
  double median_time_baseline = 0.0;   // seconds
  double speedup = 0.0;                // baseline / two-stage
  double fast_iters = 0.0;             // medians over repetitions
  double slow_iters = 0.0;
  double baseline_iters = 0.0;
  double wcss_ratio = 0.0;  // median of paired two-stage / baseline WCSS
  bool baseline_converged = true;   // every repetition converged
  bool two_stage_converged = true;  // both stages converged in every repetition
  std::size_t fast_empty_cluster_warnings = 0;

  friend bool operator==(const BenchCell&, const BenchCell&) = default;
};

struct BenchReport {
  std::string dataset;  // human-readable source descriptor
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t k = 0;
  Seed seed = 0;
  std::size_t repetitions = 0;
  std::size_t workers = 1;
  std::vector<double> fractions;   // ascending
  std::vector<double> tolerances;  // descending
  std::vector<BenchCell> cells;    // row-major: tolerance rows, fraction columns

  const BenchCell& cell(std::size_t tolerance_row, std::size_t fraction_col) const {
    return cells[tolerance_row * fractions.size() + fraction_col];
  }

  friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

/// Benchmarks an already materialized dataset. Only the clustering calls are timed.
BenchReport run_benchmark(const BenchConfig& cfg, const Dataset& ds, std::string dataset_label);

/// Resolves cfg.source, then benchmarks it.
BenchReport run_benchmark(const BenchConfig& cfg);

enum class ReportFormat { table, json, csv };

std::string emit_report(const BenchReport& report, ReportFormat format);
BenchReport parse_report_json(const std::string& text);

/// Two significant figures ("3.8", "12", "0.53").
std::string two_significant(double v);

}  // namespace fastkm
