#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fastkm/matrix.hpp"

namespace fastkm {

/// Worker count for the data-parallel passes. Results do not depend on it:
/// points are reduced in fixed-size blocks combined in ascending block order.
struct Parallelism {
  std::size_t workers = 1;
};

/// Points per reduction block.
inline constexpr std::size_t kBlockSize = 4096;

/// Stopping rule of one Lloyd stage. `tolerance` is in squared feature units:
/// the stage stops once the largest squared center shift is <= tolerance.
struct StageParams {
  double tolerance = 1e-6;
  std::size_t max_iters = 300;

  void validate() const;
};

enum class Stage { fast, slow, baseline };

std::string_view to_string(Stage stage);
Stage stage_from_string(std::string_view name);

struct IterationRecord {
  Stage stage = Stage::baseline;
  std::size_t iteration = 0;  // 1-based within the stage
  Centers centers;            // centers after this iteration's update
  double wcss = 0.0;          // objective of this iteration's assignment against the centers it used
  double max_shift = 0.0;     // largest squared center displacement in this iteration
};

using IterationTrace = std::vector<IterationRecord>;

struct ClusterResult {
  Centers initial_centers;
  Centers centers;
  Assignment labels;  // exact nearest-center labels for `centers`
  double wcss = 0.0;
  std::size_t iters = 0;
  bool converged = false;
  std::size_t empty_clusters = 0;  // clusters with no points under the final labels
  IterationTrace trace;
  /// Point-center distance evaluations made by the Lloyd iterations (k*n each).
  std::uint64_t distance_computations = 0;
  /// Evaluations spent re-deriving labels after the last update, when it moved a center.
  std::uint64_t relabel_distance_computations = 0;
};

struct StepResult {
  Centers centers;
  Assignment labels;
  double max_shift = 0.0;
  double wcss = 0.0;  // sum of squared distances to the centers used for assignment
  std::vector<std::size_t> counts;
  std::uint64_t distance_computations = 0;
};

/// Sum of squared coordinate differences. Throws UsageError on length mismatch.
double squared_distance(std::span<const double> x, std::span<const double> c);

/// Nearest center per point; ties go to the lowest center index.
Assignment assign_points(const Dataset& ds, const Centers& centers, Parallelism par = {});

/// Mean of each cluster's points; an empty cluster keeps prev's row.
Centers update_centers(const Dataset& ds, const Assignment& labels, const Centers& prev,
                       Parallelism par = {});

double wcss(const Dataset& ds, const Centers& centers, const Assignment& labels,
            Parallelism par = {});

/// One assign + update pass over the data.
StepResult lloyd_step(const Dataset& ds, const Centers& centers, Parallelism par = {});

/// Iterates lloyd_step from `init` until the max squared shift is <= tolerance
/// or max_iters steps have run.
ClusterResult run_lloyd(const Dataset& ds, const Centers& init, const StageParams& params,
                        Stage stage, Parallelism par = {});

}  // namespace fastkm
