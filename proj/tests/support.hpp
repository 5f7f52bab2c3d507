#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "fastkm/matrix.hpp"
#include "oracle.hpp"

namespace testing_support {

template <class Tag>
oracle::Points to_points(const fastkm::RowMatrix<Tag>& m) {
  oracle::Points out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i].assign(m.row(i).begin(), m.row(i).end());
  return out;
}

template <class M = fastkm::Dataset>
M from_points(const oracle::Points& pts) {
  std::vector<double> v;
  for (const auto& p : pts) v.insert(v.end(), p.begin(), p.end());
  return M(pts.size(), pts.front().size(), std::move(v));
}

/// Random instance with values on a coarse grid, so coordinate ties and
/// duplicate points occur now and then.
inline fastkm::Dataset random_dataset(std::mt19937_64& gen, std::size_t n, std::size_t d) {
  std::uniform_int_distribution<int> grid(-40, 40);
  std::vector<double> v(n * d);
  for (auto& x : v) x = grid(gen) * 0.25;
  return fastkm::Dataset(n, d, std::move(v));
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() / ("fastkm_test_" + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

}  // namespace testing_support
