#include "fastkm/two_stage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fastkm/dataset.hpp"

namespace fastkm {

IndexDraw::IndexDraw(std::size_t n, Seed seed, std::size_t expected_draws)
    : n_(n), rng_(seed, Stream::selection) {
  if (expected_draws >= n / 16 && expected_draws > 0) {
    dense_.resize(n);
    std::iota(dense_.begin(), dense_.end(), std::size_t{0});
  }
}

std::size_t IndexDraw::at(std::size_t i) const {
  const auto it = swapped_.find(i);
  return it == swapped_.end() ? i : it->second;
}

std::size_t IndexDraw::next() {
  if (drawn_ >= n_) throw UsageError("index draw exhausted");
  const std::size_t j = drawn_++;
  const std::size_t r = j + static_cast<std::size_t>(rng_.below(n_ - j));
  if (!dense_.empty()) {
    std::swap(dense_[j], dense_[r]);
    return dense_[j];
  }
  const std::size_t value = at(r);
  if (r != j) swapped_[r] = at(j);
  swapped_.erase(j);
  return value;
}

std::size_t sample_size(std::size_t n, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw UsageError("sample fraction must be in (0, 1], got " + format_double(fraction));
  }
  // Absorb representation error so that e.g. 0.29 * 100 yields 29.
  const double exact = fraction * static_cast<double>(n);
  return std::min(n, static_cast<std::size_t>(std::floor(exact * (1.0 + 1e-12))));
}

namespace {

Dataset gather_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
  std::vector<double> values;
  values.reserve(rows.size() * ds.cols());
  for (const auto i : rows) {
    const auto r = ds.row(i);
    values.insert(values.end(), r.begin(), r.end());
  }
  return Dataset(rows.size(), ds.cols(), std::move(values));
}

std::vector<std::size_t> draw_order(std::size_t n, std::size_t m, Seed seed) {
  IndexDraw draw(n, seed, m);
  std::vector<std::size_t> order(m);
  for (auto& i : order) i = draw.next();
  return order;
}

std::vector<std::size_t> ascending(const std::vector<std::size_t>& order, std::size_t n) {
  std::vector<bool> chosen(n, false);
  for (const auto i : order) chosen[i] = true;
  std::vector<std::size_t> out;
  out.reserve(order.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (chosen[i]) out.push_back(i);
  }
  return out;
}

bool same_row(std::span<const double> a, std::span<const double> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

/// Picks k center rows from a draw order, skipping coordinate duplicates.
/// `limit` bounds how many draws may be consumed.
Centers pick_centers(const Dataset& ds, std::size_t k, bool allow_duplicates, std::size_t limit,
                     auto&& draw) {
  Centers centers(k, ds.cols());
  std::size_t chosen = 0;
  std::vector<std::size_t> rows;
  for (std::size_t used = 0; used < limit && chosen < k; ++used) {
    const std::size_t i = draw();
    const auto candidate = ds.row(i);
    const bool duplicate =
        !allow_duplicates && std::any_of(rows.begin(), rows.end(), [&](std::size_t r) {
          return same_row(ds.row(r), candidate);
        });
    if (duplicate) continue;
    rows.push_back(i);
    std::copy(candidate.begin(), candidate.end(), centers.row(chosen).begin());
    ++chosen;
  }
  if (chosen < k) {
    throw DataError("fewer than k=" + std::to_string(k) + " distinct points available for seeding");
  }
  return centers;
}

}  // namespace

Sample sample_subset(const Dataset& ds, double fraction, Seed seed) {
  const std::size_t m = sample_size(ds.rows(), fraction);
  if (m < 1) throw UsageError("sample fraction selects no points");
  std::vector<std::size_t> indices = ascending(draw_order(ds.rows(), m, seed), ds.rows());
  Dataset points = gather_rows(ds, indices);
  return Sample{std::move(points), std::move(indices)};
}

Centers init_centers_random(const Dataset& ds, std::size_t k, Seed seed, bool allow_duplicates) {
  if (k < 1) throw UsageError("k must be >= 1");
  if (ds.rows() < k) {
    throw DataError("k=" + std::to_string(k) + " exceeds point count " + std::to_string(ds.rows()));
  }
  IndexDraw draw(ds.rows(), seed);
  return pick_centers(ds, k, allow_duplicates, ds.rows(), [&] { return draw.next(); });
}

void TwoStageConfig::validate(std::size_t n) const {
  if (k < 1) throw UsageError("k must be >= 1");
  fast.validate();
  slow.validate();
  if (fast.tolerance < slow.tolerance) {
    throw UsageError("fast-stage tolerance must be >= slow-stage tolerance");
  }
  const std::size_t m = sample_size(n, sample_fraction);
  if (m < k) {
    throw UsageError("sample of " + std::to_string(m) + " points cannot seed k=" + std::to_string(k) +
                     " centers; raise the sample fraction");
  }
}

TwoStageResult run_two_stage(const Dataset& ds, const TwoStageConfig& cfg, Parallelism par) {
  cfg.validate(ds.rows());
  const std::size_t m = sample_size(ds.rows(), cfg.sample_fraction);

  // The draw order defines the sample; its leading rows seed the centers,
  // which makes them uniform over the sample and identical to run_baseline's.
  const std::vector<std::size_t> order = draw_order(ds.rows(), m, cfg.seed);
  std::size_t cursor = 0;
  Centers init = pick_centers(ds, cfg.k, false, m, [&] { return order[cursor++]; });

  TwoStageResult result;
  result.sample_indices = ascending(order, ds.rows());
  const Dataset sample = gather_rows(ds, result.sample_indices);

  result.fast = run_lloyd(sample, init, cfg.fast, Stage::fast, par);
  result.fast_empty_cluster_warning = result.fast.empty_clusters > 0;
  result.slow = run_lloyd(ds, result.fast.centers, cfg.slow, Stage::slow, par);
  return result;
}

ClusterResult run_baseline(const Dataset& ds, std::size_t k, const StageParams& params, Seed seed,
                           Parallelism par) {
  params.validate();
  const Centers init = init_centers_random(ds, k, seed);
  return run_lloyd(ds, init, params, Stage::baseline, par);
}

std::vector<std::size_t> match_centers(const Centers& a, const Centers& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw UsageError("center sets must have the same shape to be matched");
  }
  // Hungarian algorithm (shortest augmenting paths with potentials), 1-based.
  const std::size_t k = a.rows();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0), minv(k + 1);
  std::vector<std::size_t> p(k + 1, 0), way(k + 1, 0);
  std::vector<bool> used(k + 1);
  for (std::size_t i = 1; i <= k; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = squared_distance(a.row(i0 - 1), b.row(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> perm(k);
  for (std::size_t j = 1; j <= k; ++j) perm[p[j] - 1] = j - 1;
  return perm;
}

double matched_center_distance(const Centers& a, const Centers& b) {
  const auto perm = match_centers(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    worst = std::max(worst, squared_distance(a.row(i), b.row(perm[i])));
  }
  return std::sqrt(worst);
}

}  // namespace fastkm
