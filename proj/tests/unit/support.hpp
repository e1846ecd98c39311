#pragma once

#include "riskband/loss_model.hpp"
#include "riskband/rng.hpp"

#include <filesystem>
#include <initializer_list>
#include <random>
#include <string>

namespace testing {

using namespace riskband;

inline RowMatrix rows(std::initializer_list<std::initializer_list<double>> data) {
  RowMatrix out(static_cast<Index>(data.size()), static_cast<Index>(data.begin()->size()));
  Index i = 0;
  for (const auto& row : data) {
    Index j = 0;
    for (double v : row) out(i, j++) = v;
    ++i;
  }
  return out;
}

/// Indicator losses 1{U_i <= t} on a grid over [0,1]: nondecreasing step rows.
inline LossMatrix step_losses(Index n, Index m, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const ParameterGrid grid = ParameterGrid::linspace(0.0, 1.0, m);
  RowMatrix values(n, m);
  for (Index i = 0; i < n; ++i) {
    const double x = u(gen);
    for (Index j = 0; j < m; ++j) values(i, j) = x <= grid[j] ? 1.0 : 0.0;
  }
  return LossMatrix(grid, values, Orientation::NonDecreasing);
}

/// Arbitrary losses in [0,1] without any monotone structure.
inline LossMatrix noise_losses(Index n, Index m, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RowMatrix values(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) values(i, j) = u(gen);
  return LossMatrix(ParameterGrid::linspace(0.0, 1.0, m), values, Orientation::Unconstrained);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("riskband_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
