#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "surmodel/core/random.hpp"
#include "surmodel/core/types.hpp"
#include "surmodel/dataset/gauss_legendre.hpp"

namespace surmodel::dataset {

/// 5x5x5 Gauss-point tensor grid mapped onto the cube, lexicographic in
/// (tau0, phi, m2) with m2 varying fastest.
inline std::vector<ParameterVector> tensor_grid(const ParameterCube& cube) {
  const auto nodes = gauss_nodes_5();
  std::vector<ParameterVector> out;
  out.reserve(125);
  auto map = [](const Interval& iv, double x) { return iv.from_unit(0.5 * (1.0 + x)); };
  for (double a : nodes)
    for (double b : nodes)
      for (double c : nodes) out.push_back({map(cube.tau0, a), map(cube.phi, b), map(cube.m2, c)});
  return out;
}

/// k-point Gauss-Legendre tensor grid (k^3 points), same ordering.
inline std::vector<ParameterVector> tensor_grid(const ParameterCube& cube, int k) {
  if (k == 5) return tensor_grid(cube);
  if (k < 1) throw std::invalid_argument("tensor_grid: k must be >= 1");
  auto nodes = gauss_legendre_nodes(k);
  if (k % 2 == 1) nodes[static_cast<std::size_t>(k / 2)] = 0.0;
  std::vector<ParameterVector> out;
  auto map = [](const Interval& iv, double x) { return iv.from_unit(0.5 * (1.0 + x)); };
  for (double a : nodes)
    for (double b : nodes)
      for (double c : nodes) out.push_back({map(cube.tau0, a), map(cube.phi, b), map(cube.m2, c)});
  return out;
}

/// Nodes per axis for a tensor grid of n points, or 0 if n is not a cube.
inline int cube_root_exact(std::size_t n) {
  for (int k = 1; static_cast<std::size_t>(k) * k * k <= n; ++k)
    if (static_cast<std::size_t>(k) * k * k == n) return k;
  return 0;
}

/// Uniform Monte Carlo draws from the cube.
inline std::vector<ParameterVector> monte_carlo(const ParameterCube& cube, std::size_t n,
                                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ParameterVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u0 = uniform01(rng);
    const double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    out.push_back(cube.from_unit({u0, u1, u2}));
  }
  return out;
}

}  // namespace surmodel::dataset
