#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fastkm/dataset.hpp"
#include "fastkm/two_stage.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace fastkm;
using testing_support::TempDir;

namespace {

Dataset parse(const std::string& text, bool header = false) {
  std::istringstream in(text);
  return parse_csv(in, header);
}

std::string error_of(const std::string& text, bool header = false) {
  try {
    parse(text, header);
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("load_csv parses rows and columns") {
  const Dataset ds = parse("0,0\n1,1\n");
  CHECK(ds.rows() == 2);
  CHECK(ds.cols() == 2);
  CHECK(ds(1, 0) == 1.0);
  CHECK(ds(1, 1) == 1.0);
}

TEST_CASE("load_csv skips a header and accepts CRLF") {
  const Dataset ds = parse("x,y\r\n0,0\r\n", true);
  CHECK(ds.rows() == 1);
  CHECK(ds.cols() == 2);
}

TEST_CASE("load_csv reports errors with line numbers") {
  CHECK(error_of("0,a\n") == "non-numeric field, line 1");
  CHECK(error_of("1,2\n3\n").find("ragged row") != std::string::npos);
  CHECK(error_of("1,2\n3\n").find("line 2") != std::string::npos);
  CHECK(error_of("x,y\n", true).find("no data rows") != std::string::npos);
  CHECK(error_of("1,nan\n").find("line 1") != std::string::npos);
  CHECK(error_of("1,,2\n") == "non-numeric field, line 1");
  CHECK_THROWS_AS(load_csv("/nonexistent/fastkm.csv"), DataError);
}

TEST_CASE("save_csv round-trips values exactly") {
  TempDir dir;
  const Dataset small(1, 2, {0.5, 0.25});
  save_csv(small, dir / "a.csv");
  CHECK(load_csv(dir / "a.csv") == small);

  std::ifstream in(dir / "a.csv");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text == "0.5,0.25\n");

  const Dataset one(1, 2, {1.0, 2.0});
  save_csv(one, dir / "b.csv");
  std::ifstream in_b(dir / "b.csv");
  std::string text_b((std::istreambuf_iterator<char>(in_b)), std::istreambuf_iterator<char>());
  CHECK(text_b == "1,2\n");

  CHECK_THROWS_AS(save_csv(Dataset{}, dir / "empty.csv"), UsageError);
}

TEST_CASE("property: CSV round-trip is the identity on arbitrary doubles") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> mag(-300, 300);
  std::uniform_real_distribution<double> mant(-1, 1);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 1 + gen() % 20, d = 1 + gen() % 5;
    std::vector<double> v(n * d);
    for (auto& x : v) x = mant(gen) * std::pow(10.0, std::floor(mag(gen)));
    const Dataset ds(n, d, v);
    std::ostringstream out;
    write_csv(out, ds);
    std::istringstream in(out.str());
    REQUIRE(parse_csv(in) == ds);
  }
}

TEST_CASE("dataset rejects non-finite values") {
  CHECK_THROWS_AS(Dataset(1, 1, {std::numeric_limits<double>::infinity()}), DataError);
  CHECK_THROWS_AS(Dataset(2, 1, {1.0}), DataError);
}

TEST_CASE("generate_blobs with tiny spread yields near-duplicate pairs far apart") {
  const Blobs b = generate_blobs({4, 1, 2, 1e-9, 10.0, 42});
  REQUIRE(b.points.rows() == 4);
  CHECK(std::abs(b.points(0, 0) - b.points(2, 0)) < 1e-6);
  CHECK(std::abs(b.points(1, 0) - b.points(3, 0)) < 1e-6);
  CHECK(std::abs(b.points(0, 0) - b.points(1, 0)) >= 10.0 - 1e-6);
  CHECK(b.labels == Assignment{0, 1, 0, 1});
}

TEST_CASE("generate_blobs is deterministic and respects separation") {
  const BlobSpec spec{500, 3, 5, 1.0, 12.0, 99};
  const Blobs a = generate_blobs(spec);
  const Blobs b = generate_blobs(spec);
  CHECK(a.points == b.points);
  CHECK(a.labels == b.labels);
  CHECK(a.centers == b.centers);
  for (std::size_t i = 0; i < spec.k; ++i) {
    for (std::size_t j = i + 1; j < spec.k; ++j) {
      CHECK(squared_distance(a.centers.row(i), a.centers.row(j)) >= 144.0);
    }
  }
  BlobSpec other = spec;
  other.seed = 100;
  CHECK_FALSE(generate_blobs(other).points == a.points);
}

TEST_CASE("generate_blobs validates its spec") {
  CHECK_THROWS_AS(generate_blobs({10, 2, 0, 1.0, 1.0, 0}), UsageError);
  CHECK_THROWS_AS(generate_blobs({2, 2, 3, 1.0, 1.0, 0}), UsageError);
  CHECK_THROWS_AS(generate_blobs({10, 2, 2, 0.0, 1.0, 0}), UsageError);
  CHECK_THROWS_AS(generate_blobs({10, 2, 2, 1.0, -1.0, 0}), UsageError);
  // k centers 10 apart in a 1-d box of side 100 cannot exceed 11 placements.
  CHECK_THROWS_AS(generate_blobs({100, 1, 30, 1.0, 10.0, 0}), UsageError);
}

TEST_CASE("reference Lloyd recovers generating centers of separated blobs") {
  const Blobs b = generate_blobs({10000, 2, 3, 1.0, 10.0, 5});
  // Seed the oracle with one generated point from each cluster.
  oracle::Points init;
  for (std::size_t c = 0; c < 3; ++c) {
    init.emplace_back(b.points.row(c).begin(), b.points.row(c).end());
  }
  const auto fit = oracle::lloyd_fixed_point(testing_support::to_points(b.points), init);
  const auto truth = testing_support::to_points(b.centers);
  const auto perm = oracle::best_permutation(fit.centers, truth);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(std::sqrt(oracle::dist2(fit.centers[c], truth[perm[c]])) < 0.1);
  }
}
