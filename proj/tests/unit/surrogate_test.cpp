#include <gtest/gtest.h>

#include <numeric>

#include "surmodel/dataset/design.hpp"
#include "surmodel/surrogate/metrics.hpp"
#include "surmodel/surrogate/training.hpp"

using namespace surmodel;
using namespace surmodel::surrogate;

TEST(Threshold, GreaterOrEqualConvention) {
  EXPECT_EQ(threshold_label(0.5, 0.5), 1);
  EXPECT_EQ(threshold_label(0.0, 0.5), 0);
  EXPECT_EQ(threshold_label(1.0, 0.5), 1);
  for (double p = 0.0; p <= 1.0; p += 0.05)
    for (double lo = 0.0; lo <= 1.0; lo += 0.1)
      if (threshold_label(p, lo) == 0) {
        EXPECT_EQ(threshold_label(p, lo + 0.1), 0);
      }
}

TEST(Blend, EndpointsMidpointConvexity) {
  const StateVector y0{2.0, 0.1}, y1{4.0, 0.05};
  EXPECT_EQ(SurrogatePair::blend(0.0, y0, y1), y0);
  EXPECT_EQ(SurrogatePair::blend(1.0, y0, y1), y1);
  EXPECT_DOUBLE_EQ(SurrogatePair::blend(0.5, y0, y1).a_a, 3.0);
  for (double p = 0.0; p <= 1.0; p += 0.01) {
    const auto y = SurrogatePair::blend(p, y0, y1);
    EXPECT_GE(y.a_a, 2.0);
    EXPECT_LE(y.a_a, 4.0);
    EXPECT_GE(y.delta_s, 0.05 - 1e-17);
    EXPECT_LE(y.delta_s, 0.1 + 1e-17);
  }
}

TEST(Metrics, RSquaredExamples) {
  const std::vector<double> ref{1, 2, 3, 4, 6};
  EXPECT_EQ(r_squared(ref, ref), 1.0);
  const double m = std::accumulate(ref.begin(), ref.end(), 0.0) / 5.0;
  EXPECT_NEAR(r_squared(ref, std::vector<double>(5, m)), 0.0, 1e-15);
  EXPECT_THROW(r_squared(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(r_squared(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
}

TEST(Metrics, RelativeErrorExamples) {
  const std::vector<double> ref{0, 1, 2, 5};
  EXPECT_EQ(relative_error(ref, ref), 0.0);
  EXPECT_EQ(relative_error(ref, std::vector<double>(4, 0.0)), 1.0);
  EXPECT_THROW(relative_error(std::vector<double>(4, 0.0), ref), std::invalid_argument);
}

TEST(Metrics, RSquaredAgreesWithErrorNumerator) {
  const std::vector<double> ref{0.3, 1.7, 2.2, 5.1, 4.4, 0.0}, pred{0.5, 1.5, 2.0, 4.8, 4.9, 0.1};
  double sse = 0, sst = 0, den = 0;
  const double m = std::accumulate(ref.begin(), ref.end(), 0.0) / ref.size();
  for (std::size_t k = 0; k < ref.size(); ++k) {
    sse += (ref[k] - pred[k]) * (ref[k] - pred[k]);
    sst += (ref[k] - m) * (ref[k] - m);
    den += ref[k] * ref[k];
  }
  EXPECT_NEAR(r_squared(ref, pred), 1.0 - relative_error(ref, pred) * den / sst, 1e-12);
  EXPECT_NEAR(r_squared(ref, pred), 1.0 - sse / sst, 1e-12);
}

TEST(Metrics, AccuracySkipsFirstTwoStepsPerStep) {
  Trajectories ref(3, std::vector<StateVector>(4)), pred;
  for (int p = 0; p < 3; ++p)
    for (int t = 0; t < 4; ++t) ref[p][t] = {t < 2 ? 0.0 : (p + 1.0) * t, 0.1 * (p + t)};
  pred = ref;
  pred[0][3].a_a += 1.0;
  const auto r = accuracy(ref, pred, 4);
  ASSERT_EQ(r.e_per_step[0].size(), 2u);  // t3, t4
  EXPECT_EQ(r.e_per_step[0][0], 0.0);
  EXPECT_GT(r.e_per_step[0][1], 0.0);
  EXPECT_EQ(r.e_total[1], 0.0);
  EXPECT_EQ(r.r2[1], 1.0);
}

TEST(Confusion, Examples) {
  const std::vector<int> y{0, 0, 1, 1}, p{0, 1, 1, 1};
  const auto m = confusion_matrix(y, p);
  EXPECT_EQ(m, (ConfusionMatrix{1, 1, 0, 2}));
  EXPECT_EQ(m.accuracy(), 0.75);
  const auto same = confusion_matrix(y, y);
  EXPECT_EQ(same.fp + same.fn, 0u);
  const std::vector<int> wrong{1, 1, 0, 0};
  const auto w = confusion_matrix(y, wrong);
  EXPECT_EQ(w.tn + w.tp, 0u);
}

TEST(EnsembleSummary, Examples) {
  Trajectories tr;
  for (int v = 1; v <= 100; ++v) tr.push_back({StateVector{static_cast<double>(v), 7.0}});
  const auto a = ensemble_summary(tr, Qoi::ActivatedArea, 1);
  EXPECT_DOUBLE_EQ(a[0].median, 50.5);
  EXPECT_LE(a[0].q025, a[0].median);
  EXPECT_GE(a[0].q975, a[0].median);
  ASSERT_EQ(a[0].cdf.size(), 100u);
  EXPECT_EQ(a[0].cdf.back().second, 1.0);
  const auto c = ensemble_summary(tr, Qoi::AverageSlip, 1);
  EXPECT_EQ(c[0].median, 7.0);
  EXPECT_EQ(c[0].q025, 7.0);
  EXPECT_EQ(c[0].q975, 7.0);
}

namespace {

// Small but real: coarse oracle grid, 125 Gauss trajectories, short training.
struct Fixture {
  oracle::FaultModel model;
  dataset::SplitDataset ds;
  nn::TrainConfig cfg;

  Fixture() : model(coarse()) {
    ds = dataset::split(dataset::generate(dataset::tensor_grid(ParameterCube{}), model), 10, 17);
    cfg.max_epochs = 60;
    cfg.patience = 20;
    cfg.seed = 3;
  }
  static oracle::OracleConfig coarse() {
    oracle::OracleConfig c;
    c.grid_ny = 25;
    c.grid_nz = 115;
    return c;
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST(Training, ShapesNonnegativityAndLiveFifthInput) {
  const auto& f = fixture();
  using nn::Activation;
  const auto base = train_baseline(f.ds, nn::NetworkSpec::uniform(4, 2, 12, 2, Activation::ReLU, Activation::Softplus),
                                   f.cfg);
  auto cls = train_classifier(f.ds, nn::NetworkSpec::uniform(3, 2, 8, 1, Activation::Tanh, Activation::Sigmoid),
                              f.cfg, 0.5);
  const auto ii = train_surrogate_ii(f.ds, cls.model,
                                     nn::NetworkSpec::uniform(5, 2, 12, 2, Activation::ReLU, Activation::Softplus), f.cfg);
  const auto pvs = dataset::monte_carlo(ParameterCube{}, 60, 8);
  for (int t = 1; t <= 10; ++t) {
    for (const auto& y : base.model.predict_batch(pvs, t)) EXPECT_TRUE(y.a_a >= 0.0 && y.delta_s >= 0.0);
    for (const auto& y : ii.model.predict_batch(pvs, t)) EXPECT_TRUE(y.a_a >= 0.0 && y.delta_s >= 0.0);
  }
  for (double pr : cls.model.probability_batch(pvs)) EXPECT_TRUE(pr >= 0.0 && pr <= 1.0);
  const auto y0 = ii.model.predict_with_label(pvs, 8, std::vector<double>(60, 0.0));
  const auto y1 = ii.model.predict_with_label(pvs, 8, std::vector<double>(60, 1.0));
  bool differs = false;
  for (std::size_t k = 0; k < pvs.size(); ++k) differs = differs || !(y0[k] == y1[k]);
  EXPECT_TRUE(differs);
  EXPECT_EQ(ii.model.model.network.spec().n0, 5u);
  EXPECT_EQ(ii.model.predict_batch(pvs, 4), ii.model.predict_batch(pvs, 4));
  EXPECT_THROW(train_baseline(f.ds, nn::NetworkSpec::uniform(5, 1, 4, 2, Activation::ReLU, Activation::Softplus), f.cfg),
               ConfigError);
}

TEST(Training, PairPartitionsByLabel) {
  const auto& f = fixture();
  using nn::Activation;
  auto cls = train_classifier(f.ds, nn::NetworkSpec::uniform(3, 1, 4, 1, Activation::Tanh, Activation::Sigmoid), f.cfg, 0.5);
  const auto spec = nn::NetworkSpec::uniform(4, 2, 8, 2, Activation::ReLU, Activation::Softplus);
  const auto pair = train_pair(f.ds, cls.model, spec, f.cfg);
  const auto pvs = dataset::monte_carlo(ParameterCube{}, 20, 2);
  const auto y0 = SurrogateBaseline{pair.model.model0}.predict_batch(pvs, 9);
  EXPECT_EQ(pair.model.predict_with_probability(pvs, 9, std::vector<double>(20, 0.0)), y0);

  auto closed = f.ds;
  for (auto* v : {&closed.train, &closed.validation, &closed.test})
    for (auto& s : *v) s.f_o = 0;
  EXPECT_THROW(train_pair(closed, cls.model, spec, f.cfg), ConfigError);
}
