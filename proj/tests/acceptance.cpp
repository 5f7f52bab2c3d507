// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: fastkm_acceptance [criterion ...]   (default: all, 1-9)
//
// Criteria 3 and 8 are aggregated over every run performed by the others.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fastkm/bench.hpp"
#include "fastkm/dataset.hpp"
#include "fastkm/trace_io.hpp"
#include "fastkm/two_stage.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace fastkm;
using testing_support::to_points;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

/// Every Lloyd run made by the suite, for the aggregated criteria.
struct RunLog {
  std::size_t iterations = 0;
  std::size_t stages = 0;
  std::size_t wcss_violations = 0;
  double worst_relative_increase = 0.0;
  std::size_t two_stage_runs = 0;
  std::size_t handoff_mismatches = 0;

  void record(const ClusterResult& r) {
    ++stages;
    iterations += r.trace.size();
    for (std::size_t t = 1; t < r.trace.size(); ++t) {
      const double prev = r.trace[t - 1].wcss;
      const double rel = prev > 0.0 ? (r.trace[t].wcss - prev) / prev : 0.0;
      worst_relative_increase = std::max(worst_relative_increase, rel);
      if (r.trace[t].wcss > prev + 1e-9 * prev) ++wcss_violations;
    }
  }

  void record(const TwoStageResult& r) {
    record(r.fast);
    record(r.slow);
    ++two_stage_runs;
    if (!(r.slow.initial_centers == r.fast.centers) ||
        !(r.slow.trace.empty() || r.fast.trace.back().centers == r.slow.initial_centers)) {
      ++handoff_mismatches;
    }
  }
};

RunLog g_log;

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

TwoStageConfig standard_config(std::size_t k, double fraction, Seed seed) {
  TwoStageConfig cfg;
  cfg.k = k;
  cfg.sample_fraction = fraction;
  cfg.fast = {1e-3, 300};
  cfg.slow = {1e-6, 300};
  cfg.seed = seed;
  return cfg;
}

// 1. run_baseline (tolerance 0) equals a brute-force Lloyd fixed point.
Outcome oracle_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 gen(20240601);
  std::size_t agree = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 1 + gen() % 4;
    const std::size_t n = k + gen() % (51 - k);
    const std::size_t d = 1 + gen() % 3;
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::vector<double> v(n * d);
    for (auto& x : v) x = u(gen);
    const Dataset ds(n, d, v);
    const Seed seed = trial;
    const ClusterResult r = run_baseline(ds, k, {0.0, 10000}, seed);
    g_log.record(r);
    const auto ref = oracle::lloyd_fixed_point(to_points(ds), to_points(init_centers_random(ds, k, seed)));
    double diff = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t j = 0; j < d; ++j) diff = std::max(diff, std::fabs(r.centers(c, j) - ref.centers[c][j]));
    }
    worst = std::max(worst, diff);
    if (diff <= 1e-9 && r.labels == ref.labels && r.converged) ++agree;
  }
  const double elapsed = seconds_since(start);
  return {agree == 100 && elapsed < 10.0,
          fmt("%zu/100 instances identical, max |dcenter| = %.3g, %.2f s (limit 10 s)", agree, worst,
              elapsed)};
}

// 2. Cost model totals and instrumented distance counters.
Outcome cost_model() {
  const bool totals = predicted_cost(4, 20, 1000) == 80000 &&
                      predicted_two_stage_cost(4, 18, 100, 2, 1000) == 15200;
  std::mt19937_64 gen(77);
  std::size_t exact = 0;
  for (int run = 0; run < 20; ++run) {
    const std::size_t k = 2 + gen() % 5;
    const BlobSpec spec{2000 + 100 * static_cast<std::size_t>(run), 1 + gen() % 4, k, 1.0, 10.0,
                        static_cast<Seed>(run)};
    const Dataset ds = generate_blobs(spec).points;
    bool ok = true;
    // Per-pass counter.
    const Centers init = init_centers_random(ds, k, run);
    ok = ok && lloyd_step(ds, init).distance_computations == k * ds.rows();
    // Whole runs against the cost model with observed iteration counts.
    const TwoStageResult r = run_two_stage(ds, standard_config(k, 0.1, run));
    g_log.record(r);
    ok = ok && r.fast.distance_computations == predicted_cost(k, r.fast.iters, r.sample_indices.size());
    ok = ok && r.slow.distance_computations == predicted_cost(k, r.slow.iters, ds.rows());
    const ClusterResult b = run_baseline(ds, k, {1e-6, 300}, run);
    g_log.record(b);
    ok = ok && b.distance_computations == predicted_cost(k, b.iters, ds.rows());
    exact += ok ? 1 : 0;
  }
  return {totals && exact == 20,
          fmt("predicted_cost(4,20,1000)=%llu, predicted_two_stage_cost(4,18,100,2,1000)=%llu, "
              "counters exact on %zu/20 runs",
              static_cast<unsigned long long>(predicted_cost(4, 20, 1000)),
              static_cast<unsigned long long>(predicted_two_stage_cost(4, 18, 100, 2, 1000)), exact)};
}

// 4. Two-stage WCSS within 1% of the paired baseline on separated blobs.
Outcome two_stage_quality() {
  const auto start = Clock::now();
  std::size_t good = 0;
  double worst = 0.0;
  for (Seed seed = 1; seed <= 20; ++seed) {
    const Dataset ds = generate_blobs({10000, 2, 3, 1.0, 10.0, seed}).points;
    const TwoStageResult r = run_two_stage(ds, standard_config(3, 0.10, seed));
    const ClusterResult b = run_baseline(ds, 3, {1e-6, 300}, seed);
    g_log.record(r);
    g_log.record(b);
    const double ratio = r.slow.wcss / b.wcss;
    worst = std::max(worst, ratio);
    if (ratio <= 1.01) ++good;
  }
  const double elapsed = seconds_since(start);
  return {good >= 18 && elapsed < 60.0,
          fmt("%zu/20 seeds with two-stage WCSS <= 1.01 x baseline (need 18), worst ratio %.6f, "
              "%.1f s (limit 60 s)",
              good, worst, elapsed)};
}

// 5. Slow stage needs fewer iterations than the baseline.
Outcome slow_stage_economy() {
  const auto start = Clock::now();
  std::size_t fewer = 0;
  std::ostringstream pairs;
  for (Seed seed = 1; seed <= 20; ++seed) {
    const Dataset ds = generate_blobs({100000, 12, 6, 1.0, 10.0, seed}).points;
    const TwoStageResult r = run_two_stage(ds, standard_config(6, 0.10, seed));
    const ClusterResult b = run_baseline(ds, 6, {1e-6, 300}, seed);
    g_log.record(r);
    g_log.record(b);
    if (r.slow.iters < b.iters) ++fewer;
    pairs << (seed > 1 ? " " : "") << r.slow.iters << "/" << b.iters;
  }
  const double elapsed = seconds_since(start);
  return {fewer >= 16 && elapsed < 300.0,
          fmt("%zu/20 seeds with slow iters < baseline iters (need 16), %.1f s (limit 300 s); "
              "slow/baseline: %s",
              fewer, elapsed, pairs.str().c_str())};
}

// 6. Wall-clock speed-up at desk scale.
Outcome speedup() {
  const auto start = Clock::now();
  BenchConfig cfg;
  const BlobSpec spec{1000000, 12, 6, 1.0, 10.0, 1};
  cfg.source = spec;
  cfg.k = 6;
  cfg.sample_fractions = {0.01, 0.10};
  cfg.tolerances = {1e-6};
  cfg.fast_tolerance = 1e-3;
  cfg.repetitions = 5;
  cfg.seed = 1;
  cfg.workers = 1;
  const Dataset ds = generate_blobs(spec).points;
  const BenchReport report = run_benchmark(cfg, ds, "acceptance blobs");
  const BenchCell& one = report.cell(0, 0);
  const BenchCell& ten = report.cell(0, 1);
  const double elapsed = seconds_since(start);
  return {ten.speedup >= 1.0 && one.speedup >= 1.5 && elapsed <= 900.0,
          fmt("10%%: %.3fx (need >= 1.0; %.3f s vs %.3f s), 1%%: %.3fx (need >= 1.5; %.3f s vs %.3f s), "
              "median iters fast+slow/baseline 10%%: %g+%g/%g 1%%: %g+%g/%g, %.0f s (limit 900 s)",
              ten.speedup, ten.median_time_two_stage, ten.median_time_baseline, one.speedup,
              one.median_time_two_stage, one.median_time_baseline, ten.fast_iters, ten.slow_iters,
              ten.baseline_iters, one.fast_iters, one.slow_iters, one.baseline_iters, elapsed)};
}

std::string trace_csv(const TwoStageResult& r) {
  IterationTrace trace = r.fast.trace;
  trace.insert(trace.end(), r.slow.trace.begin(), r.slow.trace.end());
  std::ostringstream coords, stats;
  write_trace_coordinates(coords, trace);
  write_trace_stats(stats, trace);
  return coords.str() + stats.str();
}

// 7. Bitwise determinism across repeats and worker counts.
Outcome determinism() {
  const Dataset ds = generate_blobs({60000, 5, 4, 1.0, 10.0, 17}).points;
  const TwoStageConfig cfg = standard_config(4, 0.10, 23);
  std::vector<TwoStageResult> runs;
  std::vector<ClusterResult> bases;
  for (const std::size_t workers : {1, 1, 4, 4}) {
    runs.push_back(run_two_stage(ds, cfg, {workers}));
    bases.push_back(run_baseline(ds, 4, {1e-6, 300}, 23, {workers}));
    g_log.record(runs.back());
    g_log.record(bases.back());
  }
  std::size_t identical = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    const bool same = runs[i].slow.labels == runs[0].slow.labels &&
                      runs[i].slow.centers == runs[0].slow.centers &&
                      runs[i].fast.iters == runs[0].fast.iters &&
                      runs[i].slow.iters == runs[0].slow.iters &&
                      trace_csv(runs[i]) == trace_csv(runs[0]) &&
                      bases[i].labels == bases[0].labels && bases[i].centers == bases[0].centers &&
                      bases[i].iters == bases[0].iters;
    identical += same ? 1 : 0;
  }
  return {identical == runs.size() - 1,
          fmt("%zu/%zu repeated runs (workers 1,1,4,4) bitwise identical to the first", identical,
              runs.size() - 1)};
}

// 9. Larger fast-stage samples shift the cost curve upwards.
Outcome cost_curves() {
  std::size_t higher = 0;
  for (std::uint64_t qf = 1; qf <= 50; ++qf) {
    if (predicted_two_stage_cost(4, qf, 500, 2, 1000) > predicted_two_stage_cost(4, qf, 100, 2, 1000)) {
      ++higher;
    }
  }
  return {higher == 50, fmt("cost(N_f=500) > cost(N_f=100) for %zu/50 values of Q_f", higher)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  auto enabled = [&](int id) { return wanted.empty() || wanted.count(id) > 0; };

  const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
      {1, {"oracle equivalence", oracle_equivalence}},
      {2, {"cost model and distance counters", cost_model}},
      {4, {"two-stage quality", two_stage_quality}},
      {5, {"slow-stage economy", slow_stage_economy}},
      {6, {"wall-clock speed-up", speedup}},
      {7, {"determinism", determinism}},
      {9, {"cost curves skew upwards", cost_curves}},
  };

  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("[%s] AC%d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  for (const auto& [id, entry] : criteria) {
    if (enabled(id)) report(id, entry.first, entry.second());
  }
  if (enabled(3)) {
    report(3, "WCSS monotonicity",
           {g_log.wcss_violations == 0 && g_log.iterations >= 500,
            fmt("%zu traced iterations over %zu stages, %zu increases beyond 1e-9 relative "
                "(worst %.3g), need >= 500 iterations",
                g_log.iterations, g_log.stages, g_log.wcss_violations, g_log.worst_relative_increase)});
  }
  if (enabled(8)) {
    report(8, "hand-off exactness",
           {g_log.two_stage_runs > 0 && g_log.handoff_mismatches == 0,
            fmt("%zu two-stage runs, %zu with slow initial centers != fast final centers",
                g_log.two_stage_runs, g_log.handoff_mismatches)});
  }
  std::printf("%s\n", failures == 0 ? "all acceptance criteria passed"
                                    : (std::to_string(failures) + " criterion(s) failed").c_str());
  return failures == 0 ? 0 : 1;
}
