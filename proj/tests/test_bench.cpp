#include <doctest.h>

#include <random>
#include <sstream>

#include "fastkm/bench.hpp"
#include "fastkm/two_stage.hpp"
#include "oracle.hpp"

using namespace fastkm;

TEST_CASE("predicted_cost reproduces the worked example") {
  CHECK(predicted_cost(4, 20, 1000) == 80000);
  CHECK(predicted_cost(1, 1, 1) == 1);
  CHECK(predicted_cost(4, 18, 100) + predicted_cost(4, 2, 1000) == 15200);
  CHECK(predicted_two_stage_cost(4, 18, 100, 2, 1000) == 15200);
  CHECK(predicted_two_stage_cost(6, 10, 1000, 3, 100000) == 1860000);
}

TEST_CASE("cost model rejects zero inputs and overflow") {
  CHECK_THROWS_AS(predicted_cost(0, 1, 1), UsageError);
  CHECK_THROWS_AS(predicted_two_stage_cost(4, 0, 100, 2, 1000), UsageError);
  CHECK_THROWS_AS(predicted_cost(1ULL << 40, 1ULL << 30, 1), std::overflow_error);
  CHECK_THROWS_AS(predicted_two_stage_cost(1, 1, UINT64_MAX, 1, 1), std::overflow_error);
}

TEST_CASE("property: cost model equals the arithmetic oracle on random inputs") {
  std::mt19937_64 gen(1000);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t k = 1 + gen() % 64, qf = 1 + gen() % 500, nf = 1 + gen() % 1000000;
    const std::uint64_t qs = 1 + gen() % 500, n = 1 + gen() % 100000000;
    const unsigned __int128 want = oracle::lloyd_cost(k, qf, nf) + oracle::lloyd_cost(k, qs, n);
    REQUIRE(predicted_cost(k, qf, nf) == static_cast<std::uint64_t>(oracle::lloyd_cost(k, qf, nf)));
    REQUIRE(predicted_two_stage_cost(k, qf, nf, qs, n) == static_cast<std::uint64_t>(want));
  }
}

TEST_CASE("larger fast-stage samples always cost more") {
  for (std::uint64_t qf = 1; qf <= 50; ++qf) {
    CHECK(predicted_two_stage_cost(4, qf, 500, 2, 1000) > predicted_two_stage_cost(4, qf, 100, 2, 1000));
  }
}

TEST_CASE("counted work equals the cost model with observed iteration counts") {
  const Blobs b = generate_blobs({20000, 3, 4, 1.0, 10.0, 2});
  TwoStageConfig cfg;
  cfg.k = 4;
  cfg.seed = 6;
  const TwoStageResult r = run_two_stage(b.points, cfg);
  CHECK(r.fast.distance_computations + r.slow.distance_computations ==
        predicted_two_stage_cost(4, r.fast.iters, r.sample_indices.size(), r.slow.iters, 20000));
}

TEST_CASE("bench config parsing") {
  std::istringstream in(R"(# smoke grid
source = blobs
n = 2000
d = 3
k = 4
spread = 1
separation = 10
fractions = 0.1, 0.2
tolerances = 1e-2, 1e-4
repetitions = 2
seed = 7
workers = 2
)");
  const BenchConfig cfg = parse_bench_config(in);
  CHECK(cfg.k == 4);
  CHECK(cfg.sample_fractions == std::vector<double>{0.1, 0.2});
  CHECK(cfg.tolerances == std::vector<double>{1e-2, 1e-4});
  CHECK(cfg.repetitions == 2);
  CHECK(cfg.workers == 2);
  const auto& blobs = std::get<BlobSpec>(cfg.source);
  CHECK(blobs.n == 2000);
  CHECK(blobs.k == 4);
  CHECK(blobs.seed == 7);
}

TEST_CASE("malformed bench configs name the offending key") {
  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_bench_config(in);
    } catch (const UsageError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("repetitions = many\n").find("'repetitions'") != std::string::npos);
  CHECK(message("colour = blue\n").find("'colour'") != std::string::npos);
  CHECK(message("tolerances = 1e-4, 1e-2\n").find("tolerances") != std::string::npos);
  CHECK(message("fractions = 0.1, 1.5\n").find("fractions") != std::string::npos);
  CHECK(message("shape = square\n").find("'shape'") != std::string::npos);
  CHECK(message("source = file\n").find("'path'") != std::string::npos);
  CHECK(message("k = 3\nk = 4\n").find("'k'") != std::string::npos);
  CHECK(message("just words\n").find("line 1") != std::string::npos);
}

namespace {

BenchReport small_report() {
  BenchConfig cfg;
  cfg.source = BlobSpec{3000, 2, 3, 1.0, 10.0, 4};
  cfg.k = 3;
  cfg.sample_fractions = {0.1, 0.2};
  cfg.tolerances = {1e-2, 1e-4, 1e-6};
  cfg.repetitions = 3;
  cfg.seed = 11;
  return run_benchmark(cfg);
}

}  // namespace

TEST_CASE("run_benchmark fills a tolerance x fraction grid") {
  const BenchReport r = small_report();
  REQUIRE(r.cells.size() == 6);
  CHECK(r.n == 3000);
  CHECK(r.d == 2);
  CHECK(r.dataset.find("blobs(") == 0);
  CHECK(r.cell(0, 1).tolerance == 1e-2);
  CHECK(r.cell(0, 1).fraction == 0.2);
  CHECK(r.cell(2, 0).tolerance == 1e-6);
  for (const auto& c : r.cells) {
    CHECK(c.speedup == doctest::Approx(c.median_time_baseline / c.median_time_two_stage));
    CHECK(c.wcss_ratio > 0.0);
    CHECK(c.median_time_baseline > 0.0);
    CHECK(c.fast_iters >= 1.0);
  }
}

TEST_CASE("fraction 1.0 with equal tolerances gives an exact WCSS ratio of 1") {
  BenchConfig cfg;
  cfg.source = BlobSpec{2000, 2, 3, 1.0, 10.0, 4};
  cfg.k = 3;
  cfg.sample_fractions = {1.0};
  cfg.tolerances = {1e-6};
  cfg.fast_tolerance = 1e-6;
  cfg.repetitions = 1;
  const BenchReport r = run_benchmark(cfg);
  REQUIRE(r.cells.size() == 1);
  CHECK(r.cells[0].wcss_ratio == 1.0);
}

TEST_CASE("report renderings") {
  const BenchReport r = small_report();

  const std::string json = emit_report(r, ReportFormat::json);
  CHECK(parse_report_json(json) == r);

  const std::string csv = emit_report(r, ReportFormat::csv);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3 * 2 + 1);

  const std::string table = emit_report(r, ReportFormat::table);
  CHECK(table.find("10%") != std::string::npos);
  CHECK(table.find("20%") != std::string::npos);
  // Tolerance rows appear in descending order.
  CHECK(table.find("1e-02") < table.find("1e-04"));
  CHECK(table.find("1e-04") < table.find("1e-06"));

  CHECK_THROWS_AS(parse_report_json("{\"dataset\": 3}"), DataError);
}

TEST_CASE("single-cell table shows the speed-up to two significant figures") {
  BenchReport r;
  r.dataset = "test";
  r.fractions = {0.1};
  r.tolerances = {1e-2};
  BenchCell c;
  c.fraction = 0.1;
  c.tolerance = 1e-2;
  c.median_time_baseline = 3.8;
  c.median_time_two_stage = 1.0;
  c.speedup = 3.8;
  r.cells = {c};
  const std::string table = emit_report(r, ReportFormat::table);
  CHECK(table.find("3.8") != std::string::npos);
}

TEST_CASE("two_significant") {
  CHECK(two_significant(3.8) == "3.8");
  CHECK(two_significant(3.84) == "3.8");
  CHECK(two_significant(12.3) == "12");
  CHECK(two_significant(0.534) == "0.53");
  CHECK(two_significant(1.0) == "1.0");
}
