#include "fastkm/engine.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <thread>

namespace fastkm {

namespace {

std::size_t block_count(std::size_t n) { return (n + kBlockSize - 1) / kBlockSize; }

/// Calls fn(b) for every block b in [0, blocks). Workers take blocks
/// round-robin; callers write only to per-block slots.
template <class Fn>
void for_each_block(std::size_t blocks, Parallelism par, Fn&& fn) {
  const std::size_t workers = std::min(std::max<std::size_t>(par.workers, 1), blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t b = w; b < blocks; b += workers) fn(b);
    });
  }
  for (std::size_t b = 0; b < blocks; b += workers) fn(b);
}

struct BlockPartial {
  std::vector<double> sums;  // k*d
  std::vector<std::size_t> counts;
  double wcss = 0.0;
};

void require_same_dim(const Dataset& ds, const Centers& centers) {
  if (ds.cols() != centers.cols()) {
    throw UsageError("dimension mismatch: data has " + std::to_string(ds.cols()) +
                     " columns, centers have " + std::to_string(centers.cols()));
  }
  if (centers.rows() == 0) throw UsageError("at least one center is required");
}

void require_labels(const Dataset& ds, const Assignment& labels, std::size_t k) {
  if (labels.size() != ds.rows()) {
    throw UsageError("assignment length " + std::to_string(labels.size()) +
                     " does not match point count " + std::to_string(ds.rows()));
  }
  for (const auto l : labels) {
    if (l >= k) throw UsageError("label " + std::to_string(l) + " out of range for k=" + std::to_string(k));
  }
}

inline double sq_dist(const double* x, const double* c, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double diff = x[j] - c[j];
    s += diff * diff;
  }
  return s;
}

/// Nearest-center search for points [lo, hi); writes labels and returns the
/// block's sum of minimal squared distances.
double assign_range(const Dataset& ds, const Centers& centers, std::size_t lo, std::size_t hi,
                    std::size_t* labels) {
  const std::size_t d = ds.cols();
  const std::size_t k = centers.rows();
  const double* cdata = centers.data();
  double total = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double* x = ds.data() + i * d;
    std::size_t best = 0;
    double best_sq = sq_dist(x, cdata, d);
    for (std::size_t c = 1; c < k; ++c) {
      const double sq = sq_dist(x, cdata + c * d, d);
      if (sq < best_sq) {
        best_sq = sq;
        best = c;
      }
    }
    labels[i] = best;
    total += best_sq;
  }
  return total;
}

void accumulate_range(const Dataset& ds, const std::size_t* labels, std::size_t lo, std::size_t hi,
                      BlockPartial& part) {
  const std::size_t d = ds.cols();
  for (std::size_t i = lo; i < hi; ++i) {
    const double* x = ds.data() + i * d;
    double* s = part.sums.data() + labels[i] * d;
    for (std::size_t j = 0; j < d; ++j) s[j] += x[j];
    ++part.counts[labels[i]];
  }
}

/// Combines block partials in ascending order into means; empty clusters keep prev.
Centers combine_means(const std::vector<BlockPartial>& parts, const Centers& prev,
                      std::vector<std::size_t>& counts) {
  const std::size_t k = prev.rows();
  const std::size_t d = prev.cols();
  std::vector<double> sums(k * d, 0.0);
  counts.assign(k, 0);
  for (const auto& part : parts) {
    for (std::size_t t = 0; t < k * d; ++t) sums[t] += part.sums[t];
    for (std::size_t c = 0; c < k; ++c) counts[c] += part.counts[c];
  }
  Centers next = prev;
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    const double inv = static_cast<double>(counts[c]);
    for (std::size_t j = 0; j < d; ++j) next(c, j) = sums[c * d + j] / inv;
  }
  return next;
}

std::vector<BlockPartial> make_partials(std::size_t blocks, std::size_t k, std::size_t d) {
  std::vector<BlockPartial> parts(blocks);
  for (auto& p : parts) {
    p.sums.assign(k * d, 0.0);
    p.counts.assign(k, 0);
  }
  return parts;
}

double max_squared_shift(const Centers& a, const Centers& b) {
  double worst = 0.0;
  for (std::size_t c = 0; c < a.rows(); ++c) worst = std::max(worst, squared_distance(a.row(c), b.row(c)));
  return worst;
}

}  // namespace

void StageParams::validate() const {
  if (!(tolerance >= 0.0)) throw UsageError("stage tolerance must be >= 0");
  if (max_iters < 1) throw UsageError("stage max_iters must be >= 1");
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::fast: return "fast";
    case Stage::slow: return "slow";
    case Stage::baseline: return "baseline";
  }
  return "baseline";
}

Stage stage_from_string(std::string_view name) {
  if (name == "fast") return Stage::fast;
  if (name == "slow") return Stage::slow;
  if (name == "baseline") return Stage::baseline;
  throw DataError("unknown stage tag '" + std::string(name) + "'");
}

double squared_distance(std::span<const double> x, std::span<const double> c) {
  if (x.size() != c.size()) {
    throw UsageError("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                     std::to_string(c.size()));
  }
  return sq_dist(x.data(), c.data(), x.size());
}

Assignment assign_points(const Dataset& ds, const Centers& centers, Parallelism par) {
  require_same_dim(ds, centers);
  Assignment labels(ds.rows());
  const std::size_t blocks = block_count(ds.rows());
  for_each_block(blocks, par, [&](std::size_t b) {
    assign_range(ds, centers, b * kBlockSize, std::min(ds.rows(), (b + 1) * kBlockSize), labels.data());
  });
  return labels;
}

Centers update_centers(const Dataset& ds, const Assignment& labels, const Centers& prev,
                       Parallelism par) {
  require_same_dim(ds, prev);
  require_labels(ds, labels, prev.rows());
  const std::size_t blocks = block_count(ds.rows());
  auto parts = make_partials(blocks, prev.rows(), prev.cols());
  for_each_block(blocks, par, [&](std::size_t b) {
    accumulate_range(ds, labels.data(), b * kBlockSize, std::min(ds.rows(), (b + 1) * kBlockSize),
                     parts[b]);
  });
  std::vector<std::size_t> counts;
  return combine_means(parts, prev, counts);
}

double wcss(const Dataset& ds, const Centers& centers, const Assignment& labels, Parallelism par) {
  require_same_dim(ds, centers);
  require_labels(ds, labels, centers.rows());
  const std::size_t blocks = block_count(ds.rows());
  std::vector<double> partial(blocks, 0.0);
  const std::size_t d = ds.cols();
  for_each_block(blocks, par, [&](std::size_t b) {
    double s = 0.0;
    for (std::size_t i = b * kBlockSize, hi = std::min(ds.rows(), (b + 1) * kBlockSize); i < hi; ++i) {
      s += sq_dist(ds.data() + i * d, centers.data() + labels[i] * d, d);
    }
    partial[b] = s;
  });
  double total = 0.0;
  for (const double s : partial) total += s;
  return total;
}

StepResult lloyd_step(const Dataset& ds, const Centers& centers, Parallelism par) {
  require_same_dim(ds, centers);
  const std::size_t k = centers.rows();
  const std::size_t blocks = block_count(ds.rows());
  StepResult out;
  out.labels.resize(ds.rows());
  auto parts = make_partials(blocks, k, ds.cols());
  for_each_block(blocks, par, [&](std::size_t b) {
    const std::size_t lo = b * kBlockSize;
    const std::size_t hi = std::min(ds.rows(), lo + kBlockSize);
    parts[b].wcss = assign_range(ds, centers, lo, hi, out.labels.data());
    accumulate_range(ds, out.labels.data(), lo, hi, parts[b]);
  });
  for (const auto& p : parts) out.wcss += p.wcss;
  out.centers = combine_means(parts, centers, out.counts);
  out.max_shift = max_squared_shift(centers, out.centers);
  out.distance_computations = static_cast<std::uint64_t>(k) * ds.rows();
  return out;
}

ClusterResult run_lloyd(const Dataset& ds, const Centers& init, const StageParams& params,
                        Stage stage, Parallelism par) {
  params.validate();
  require_same_dim(ds, init);

  ClusterResult result;
  result.initial_centers = init;
  Centers current = init;
  StepResult last;
  bool fixed_point = false;
  for (std::size_t it = 1; it <= params.max_iters; ++it) {
    last = lloyd_step(ds, current, par);
    fixed_point = last.centers == current;
    current = last.centers;
    result.distance_computations += last.distance_computations;
    result.trace.push_back({stage, it, std::move(last.centers), last.wcss, last.max_shift});
    result.iters = it;
    if (last.max_shift <= params.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.centers = std::move(current);

  if (fixed_point) {
    // The last assignment was made from the final centers.
    result.labels = std::move(last.labels);
    result.wcss = last.wcss;
  } else {
    result.labels.resize(ds.rows());
    const std::size_t blocks = block_count(ds.rows());
    std::vector<double> partial(blocks, 0.0);
    for_each_block(blocks, par, [&](std::size_t b) {
      partial[b] = assign_range(ds, result.centers, b * kBlockSize,
                                std::min(ds.rows(), (b + 1) * kBlockSize), result.labels.data());
    });
    for (const double s : partial) result.wcss += s;
    result.relabel_distance_computations = static_cast<std::uint64_t>(init.rows()) * ds.rows();
  }
  std::vector<std::size_t> counts(init.rows(), 0);
  for (const auto l : result.labels) ++counts[l];
  result.empty_clusters = static_cast<std::size_t>(std::count(counts.begin(), counts.end(), 0));
  return result;
}

}  // namespace fastkm
