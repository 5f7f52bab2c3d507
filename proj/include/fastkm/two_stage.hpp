#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "fastkm/engine.hpp"
#include "fastkm/rng.hpp"

namespace fastkm {

/// Yields a uniformly random ordering of [0, n) one index at a time (lazy
/// Fisher-Yates). The first m draws are a uniform m-subset regardless of how
/// many draws follow, which is what pairs sampling with center seeding.
class IndexDraw {
 public:
  /// `expected_draws` only picks the storage: a dense permutation when a large
  /// share of [0, n) will be drawn, a sparse map otherwise. The sequence is the same.
  IndexDraw(std::size_t n, Seed seed, std::size_t expected_draws = 0);

  std::size_t remaining() const noexcept { return n_ - drawn_; }
  std::size_t next();

 private:
  std::size_t n_;
  std::size_t drawn_ = 0;
  Rng rng_;
  std::unordered_map<std::size_t, std::size_t> swapped_;  // positions moved by earlier draws
  std::vector<std::size_t> dense_;                        // full permutation, if used

  std::size_t at(std::size_t i) const;
};

/// Sample size used for a fraction of n points: floor(fraction * n).
std::size_t sample_size(std::size_t n, double fraction);

struct Sample {
  Dataset points;
  std::vector<std::size_t> indices;  // ascending row indices into the source
};

/// Uniform sample without replacement of floor(fraction * n) rows.
Sample sample_subset(const Dataset& ds, double fraction, Seed seed);

/// k rows drawn uniformly without replacement. Rows whose coordinates repeat an
/// already chosen center are skipped unless `allow_duplicates`; throws
/// DataError when fewer than k distinct rows exist.
Centers init_centers_random(const Dataset& ds, std::size_t k, Seed seed,
                            bool allow_duplicates = false);

struct TwoStageConfig {
  std::size_t k = 2;
  double sample_fraction = 0.10;
  StageParams fast{1e-3, 300};
  StageParams slow{1e-6, 300};
  Seed seed = 0;

  void validate(std::size_t n) const;
};

struct TwoStageResult {
  ClusterResult fast;  // on the sample
  ClusterResult slow;  // on the full data; authoritative labels
  std::vector<std::size_t> sample_indices;
  bool fast_empty_cluster_warning = false;
};

/// Fast Lloyd stage on a random sample, then a slow stage on all points seeded
/// with the fast stage's final centers. With the same seed the fast stage
/// starts from the same centers run_baseline would pick.
TwoStageResult run_two_stage(const Dataset& ds, const TwoStageConfig& cfg, Parallelism par = {});

/// Single-stage Lloyd from random data points: the comparator for two-stage runs.
ClusterResult run_baseline(const Dataset& ds, std::size_t k, const StageParams& params, Seed seed,
                           Parallelism par = {});

/// Minimum-cost perfect matching between two equally sized center sets on
/// squared distance. Returns perm with a.row(i) matched to b.row(perm[i]).
std::vector<std::size_t> match_centers(const Centers& a, const Centers& b);

/// Largest Euclidean distance between matched centers.
double matched_center_distance(const Centers& a, const Centers& b);

}  // namespace fastkm
