#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "surmodel/dataset/dataset.hpp"
#include "surmodel/dataset/design.hpp"

using namespace surmodel;
using namespace surmodel::dataset;

namespace {

double p5(double x) { return (63 * std::pow(x, 5) - 70 * std::pow(x, 3) + 15 * x) / 8.0; }

double bisect(double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (p5(lo) * p5(mid) <= 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Cheap synthetic samples: y depends on p and t, f_o on tau0.
std::vector<Sample> synthetic(std::size_t n_traj, int n_steps) {
  std::vector<Sample> out;
  const auto pvs = monte_carlo(ParameterCube{}, n_traj, 3);
  for (const auto& p : pvs)
    for (int t = 1; t <= n_steps; ++t)
      out.push_back({p, t, {p.m2 * t * 1e4, p.phi * t * 1e-5}, p.tau0 > 1e5 ? 1 : 0});
  return out;
}

}  // namespace

TEST(GaussNodes, MatchBisection) {
  const auto nodes = gauss_nodes_5();
  EXPECT_EQ(nodes[2], 0.0);
  EXPECT_NEAR(nodes[0], -bisect(0.8, 0.95), 1e-12);
  EXPECT_NEAR(nodes[1], -bisect(0.4, 0.7), 1e-12);
  EXPECT_NEAR(nodes[3], bisect(0.4, 0.7), 1e-12);
  EXPECT_NEAR(nodes[4], 0.9061798459, 1e-10);
  EXPECT_NEAR(nodes[3], 0.5384693101, 1e-10);
}

TEST(GaussNodes, GeneralOrderRoots) {
  for (int n : {2, 3, 4, 7}) {
    const auto x = gauss_legendre_nodes(n);
    ASSERT_EQ(x.size(), static_cast<std::size_t>(n));
    for (double v : x) EXPECT_NEAR(legendre(n, v), 0.0, 1e-12);
  }
}

TEST(TensorGrid, AffineMapAndOrder) {
  const ParameterCube cube;
  const auto g = tensor_grid(cube);
  ASSERT_EQ(g.size(), 125u);
  EXPECT_NEAR(g[62].tau0, 1e5, 1e-9);  // center node
  EXPECT_NEAR(g[0].tau0, 9.382e3, 1.0);
  EXPECT_NEAR(g[0].tau0 / 1e6, 0.1 * (1.0 - 0.9061798459), 1e-11);
  // lexicographic in (tau0, phi, m2): m2 varies fastest
  EXPECT_EQ(g[0].tau0, g[4].tau0);
  EXPECT_EQ(g[0].phi, g[4].phi);
  EXPECT_LT(g[0].m2, g[1].m2);
  EXPECT_LT(g[0].tau0, g[25].tau0);
  for (const auto& p : g) EXPECT_TRUE(cube.contains(p));
  EXPECT_EQ(tensor_grid(cube, 3).size(), 27u);
  EXPECT_EQ(cube_root_exact(125), 5);
  EXPECT_EQ(cube_root_exact(100), 0);
}

TEST(MonteCarlo, InsideCubeAndSeeded) {
  const ParameterCube cube;
  const auto a = monte_carlo(cube, 200, 9), b = monte_carlo(cube, 200, 9), c = monte_carlo(cube, 200, 10);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (const auto& p : a) EXPECT_TRUE(cube.contains(p));
}

TEST(Generate, CountsAndLabels) {
  oracle::OracleConfig cfg;
  cfg.grid_ny = 20;
  cfg.grid_nz = 46;
  const oracle::FaultModel model(cfg);
  const auto pvs = monte_carlo(ParameterCube{}, 50, 1);
  const auto s = generate(pvs, model);
  ASSERT_EQ(s.size(), 500u);
  for (std::size_t n = 0; n < 50; ++n)
    for (std::size_t i = 0; i < 10; ++i) {
      EXPECT_EQ(s[n * 10 + i].f_o, s[n * 10].f_o);
      EXPECT_EQ(s[n * 10 + i].t, static_cast<int>(i + 1));
    }
}

TEST(Split, SizesAndDisjointTrajectories) {
  const auto samples = synthetic(125, 10);
  const auto d = split(samples, 10, 42);
  EXPECT_EQ(d.test.size(), 250u);
  EXPECT_EQ(d.train.size(), 900u);
  EXPECT_EQ(d.validation.size(), 100u);
  auto key = [](const Sample& s) { return std::make_tuple(s.p.tau0, s.p.phi, s.p.m2); };
  std::set<std::tuple<double, double, double>> tr, va, te;
  for (const auto& s : d.train) tr.insert(key(s));
  for (const auto& s : d.validation) va.insert(key(s));
  for (const auto& s : d.test) te.insert(key(s));
  EXPECT_EQ(tr.size() + va.size() + te.size(), 125u);
  for (const auto& k : te) EXPECT_FALSE(tr.count(k) || va.count(k));
  for (const auto& k : va) EXPECT_FALSE(tr.count(k));
  EXPECT_EQ(split(samples, 10, 42), d);
  EXPECT_NE(split(samples, 10, 43).test, d.test);
  EXPECT_THROW(split(synthetic(9, 10), 10, 1), std::invalid_argument);
  EXPECT_THROW(split(std::vector<Sample>(samples.begin(), samples.begin() + 15), 10, 1), std::invalid_argument);
}

TEST(Split, NormalizationFromTrainOnly) {
  const auto d = split(synthetic(125, 10), 10, 5);
  const auto& n = d.normalization;
  for (const auto& s : d.train) {
    const auto x = base_inputs(s);
    for (std::size_t i = 0; i < kBaseInputs; ++i) {
      const double u = n.normalize_input(i, x[i]);
      EXPECT_GE(u, 0.0);
      EXPECT_LE(u, 1.0);
      EXPECT_NEAR(n.denormalize_input(i, u), x[i], 1e-12 * std::max(1.0, std::abs(x[i])));
    }
    EXPECT_LE(n.normalize_output(0, s.y.a_a), 1.0);
    EXPECT_LE(n.normalize_output(1, s.y.delta_s), 1.0);
  }
  for (double s : n.output_scale) EXPECT_GT(s, 0.0);
}

TEST(Persistence, RoundTripBitwise) {
  const auto d = split(synthetic(40, 10), 10, 11);
  const auto dir = std::filesystem::temp_directory_path() / "surmodel_dataset_test";
  std::filesystem::create_directories(dir);
  save_dataset(dir / "d.csv", dir / "d.json", d);
  const auto back = load_dataset(dir / "d.csv", dir / "d.json");
  EXPECT_EQ(back, d);
  std::filesystem::remove_all(dir);
}

TEST(Subsample, KeepsWholeTrajectories) {
  const auto s = synthetic(125, 10);
  const auto k = subsample_trajectories(s, 10, 50, 4);
  ASSERT_EQ(k.size(), 500u);
  for (std::size_t n = 0; n < 50; ++n)
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(k[n * 10 + i].p, k[n * 10].p);
  EXPECT_THROW(subsample_trajectories(s, 10, 126, 4), std::invalid_argument);
}
