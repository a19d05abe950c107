#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "surmodel/assimilation/posterior.hpp"

using namespace surmodel;
using namespace surmodel::assimilation;

namespace {

double ks_uniform(std::vector<double> v, const Interval& r) {
  std::sort(v.begin(), v.end());
  double d = 0.0;
  const double n = static_cast<double>(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double F = (v[k] - r.lo) / r.width();
    d = std::max({d, std::abs(F - (k + 1.0) / n), std::abs(F - k / n)});
  }
  return d;
}

// Constant prediction, so M0_hat = G * a * d everywhere.
struct ConstantModel {
  StateVector y;
  [[nodiscard]] std::vector<StateVector> predict_batch(const std::vector<ParameterVector>& pvs, int) const {
    return std::vector<StateVector>(pvs.size(), y);
  }
};

}  // namespace

TEST(LogPrior, ClosedCube) {
  const ParameterCube cube;
  EXPECT_EQ(log_prior(cube.center(), cube), 0.0);
  EXPECT_EQ(log_prior({cube.tau0.hi, cube.phi.lo, cube.m2.hi}, cube), 0.0);
  EXPECT_EQ(log_prior({-1.0, 30.0, 0.5}, cube), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(log_prior({1e5, NAN, 0.5}, cube), -std::numeric_limits<double>::infinity());
}

TEST(LogLikelihood, Examples) {
  ObservationSet obs;
  obs.sigma = 2.0;
  obs.steps = {1, 2, 3};
  obs.m0 = {6.0, 6.0, 6.0};
  const ConstantModel m{{2.0, 3.0}};
  EXPECT_EQ(log_likelihood({}, obs, m, 1.0), 0.0);
  obs.m0[1] = 8.0;
  EXPECT_DOUBLE_EQ(log_likelihood({}, obs, m, 1.0), -0.5);
  obs.m0[2] = 4.0;
  EXPECT_DOUBLE_EQ(log_likelihood({}, obs, m, 1.0), -1.0);
  EXPECT_DOUBLE_EQ(log_likelihood({}, obs.window(2), m, 1.0), -0.5);
}

TEST(Observations, NoiseAndWindows) {
  oracle::OracleConfig cfg;
  cfg.grid_ny = 20;
  cfg.grid_nz = 92;
  const oracle::FaultModel model(cfg);
  const ParameterVector truth{9.2e4, 27.1, 0.45};
  const std::vector<int> all{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto clean = synthesize_observations(truth, all, 0.0, model, 1);
  for (std::size_t k = 0; k < all.size(); ++k) {
    EXPECT_EQ(clean.m0[k], clean.noiseless[k]);
    EXPECT_EQ(clean.m0[k], model.seismic_moment(model.evaluate(truth, all[k])));
  }
  const auto noisy = synthesize_observations(truth, all, kDefaultNoiseSigma, model, 1);
  const auto first5 = synthesize_observations(truth, {1, 2, 3, 4, 5}, kDefaultNoiseSigma, model, 1);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(first5.m0[k], noisy.m0[k]);
    EXPECT_EQ(first5.noiseless[k], noisy.noiseless[k]);
  }
  EXPECT_EQ(noisy.window(5).m0, first5.m0);
  EXPECT_EQ(synthesize_observations(truth, all, kDefaultNoiseSigma, model, 1).m0, noisy.m0);
  EXPECT_THROW(synthesize_observations(truth, all, -1.0, model, 1), std::invalid_argument);
}

TEST(MhStep, AcceptanceRules) {
  Rng rng(3);
  auto uphill = [](const State& s) { return s[0]; };
  // From -inf-ish current, any finite proposal wins.
  for (int k = 0; k < 100; ++k) EXPECT_TRUE(mh_step({0.0}, -1e300, {1.0}, rng, uphill).accepted);
  auto outside = [](const State&) { return -std::numeric_limits<double>::infinity(); };
  for (int k = 0; k < 100; ++k) {
    const auto r = mh_step({0.5}, 0.0, {1.0}, rng, outside);
    EXPECT_FALSE(r.accepted);
    EXPECT_EQ(r.next, State{0.5});
  }
  EXPECT_THROW(mh_step({0.0, 1.0}, 0.0, {1.0}, rng, uphill), std::invalid_argument);
}

TEST(Chain, ZeroScaleStaysPut) {
  const auto c = run_chain({1.0, 2.0}, 200, {0.0, 0.0}, 5, [](const State&) { return 0.0; });
  EXPECT_EQ(c.burn_in, 40u);
  ASSERT_EQ(c.samples.size(), 160u);
  for (const auto& s : c.samples) EXPECT_EQ(s, (State{1.0, 2.0}));
  EXPECT_EQ(c.acceptance_rate(), 1.0);
  EXPECT_EQ(c.warnings.size(), 1u);  // 100% acceptance is flagged
}

TEST(Chain, GaussianTargetMoments) {
  // 25000 iterations keep 2e4 post burn-in samples.
  auto logpost = [](const State& s) { return -0.5 * (s[0] - 3.0) * (s[0] - 3.0) / 4.0; };
  const auto c = run_chain({0.0}, 25000, {4.8}, 2024, logpost);
  ASSERT_EQ(c.samples.size(), 20000u);
  const auto m = c.marginal(0);
  EXPECT_NEAR(stats::mean(m), 3.0, 0.06);
  EXPECT_NEAR(std::sqrt(stats::variance(m)), 2.0, 0.06);
  EXPECT_TRUE(c.warnings.empty());
}

TEST(Chain, DetailedBalanceTwoStates) {
  // Two unit cells with target mass 0.3 and 0.7; the state is the cell index.
  const double pi0 = 0.3, pi1 = 0.7;
  auto logpost = [&](const State& s) {
    if (s[0] < 0.0 || s[0] >= 2.0) return -std::numeric_limits<double>::infinity();
    return std::log(s[0] < 1.0 ? pi0 : pi1);
  };
  Rng rng(77);
  State cur{0.5};
  double lp = logpost(cur);
  std::size_t n0 = 0, n1 = 0, f01 = 0, f10 = 0;
  for (int k = 0; k < 1000000; ++k) {
    const int from = cur[0] < 1.0 ? 0 : 1;
    auto r = mh_step(cur, lp, {0.8}, rng, logpost);
    cur = std::move(r.next);
    lp = r.log_posterior;
    const int to = cur[0] < 1.0 ? 0 : 1;
    (from == 0 ? n0 : n1)++;
    if (from == 0 && to == 1) ++f01;
    if (from == 1 && to == 0) ++f10;
  }
  const double p01 = static_cast<double>(f01) / n0, p10 = static_cast<double>(f10) / n1;
  EXPECT_NEAR(pi0 * p01 / (pi1 * p10), 1.0, 0.01);
  EXPECT_NEAR(static_cast<double>(n1) / (n0 + n1), pi1, 0.01);
}

TEST(Chain, FlatPosteriorSamplesPrior) {
  // sigma -> infinity: the likelihood is flat and the chain samples the prior.
  // Random-walk samples are autocorrelated, so 5000 of them sit right at the
  // KS bound; 20000 with a wider proposal leave margin.
  const ParameterCube cube;
  ObservationSet obs;
  obs.sigma = 1e300;
  obs.steps = {1};
  obs.m0 = {1e10};
  AssimilationConfig cfg;
  cfg.n_iterations = 25000;
  cfg.scale_fraction = 0.3;
  cfg.seed = 31;
  const auto c = assimilate(obs, ConstantModel{{1.0, 1.0}}, 1.0, cube, cfg);
  ASSERT_EQ(c.samples.size(), 20000u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LT(ks_uniform(c.marginal(i), cube.axis(i)), 0.05) << i;
    for (double x : c.marginal(i)) ASSERT_TRUE(cube.axis(i).contains(x));
  }
  const auto s = posterior_summary(c, cube);
  EXPECT_NEAR(s.marginals[2].median, cube.m2.mid(), 0.05 * cube.m2.width());
}

TEST(Summary, ConstantChainAndHistogram) {
  Chain c;
  c.samples.assign(100, State{1e5, 30.0, 0.7});
  c.accepted.assign(100, 0);
  const auto s = posterior_summary(c, ParameterCube{});
  for (const auto& m : s.marginals) {
    EXPECT_EQ(m.iqr(), 0.0);
    EXPECT_EQ(m.counts.size(), kHistogramBins);
    std::size_t total = 0;
    for (auto n : m.counts) total += n;
    EXPECT_EQ(total, 100u);
  }
  EXPECT_EQ(s.marginals[0].counts[20], 100u);  // 1e5 sits at the left edge of bin 20 of [0, 2e5]
  EXPECT_THROW(summarize_marginal("x", {}, Interval{0, 1}), std::invalid_argument);
}
