#include <gtest/gtest.h>

#include <cmath>

#include "surmodel/dataset/design.hpp"
#include "surmodel/oracle/calibration.hpp"
#include "surmodel/oracle/fault_model.hpp"

using namespace surmodel;
using namespace surmodel::oracle;

namespace {

// E1(u) = int_0^inf exp(-u e^s) ds, composite Simpson. Independent of the
// series / continued fraction in the library.
double e1_quadrature(double u) {
  const int n = 200000;
  const double hi = 40.0, h = hi / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::exp(-u * std::exp(i * h));
  }
  return acc * h / 3.0;
}

OracleConfig theis_example() {
  OracleConfig c;
  c.well_rate = 0.01;
  c.transmissivity = 1e-5;
  c.storativity = 1e-4;
  return c;
}

}  // namespace

TEST(WellFunction, MatchesQuadratureAcrossBranches) {
  for (double u : {1e-6, 7.135e-3, 0.3, 0.99, 1.0, 1.01, 2.5, 8.0, 20.0})
    EXPECT_NEAR(well_function(u), e1_quadrature(u), 1e-9 * std::max(1.0, e1_quadrature(u))) << "u=" << u;
}

TEST(WellFunction, RejectsNonPositive) {
  EXPECT_THROW(well_function(0.0), std::domain_error);
  EXPECT_THROW(well_function(-1.0), std::domain_error);
}

TEST(Theis, OneYearExample) {
  const auto c = theis_example();
  const double u = 300.0 * 300.0 * c.storativity / (4.0 * c.transmissivity * kSecondsPerYear);
  EXPECT_NEAR(u, 7.135e-3, 1e-6);
  EXPECT_NEAR(well_function(u), 4.373, 1e-3);
  const double expected = c.well_rate / (4.0 * kPi * c.transmissivity) * e1_quadrature(u);
  EXPECT_NEAR(theis_drawdown(300.0, kSecondsPerYear, c), expected, 1e-6);
  EXPECT_NEAR(theis_drawdown(300.0, kSecondsPerYear, c), 348.0, 0.1);
}

TEST(Theis, VanishesFarAway) {
  const auto c = theis_example();
  // u >= 10 needs r^2 >= 40 T t / S; use u ~ 40 so the drawdown is far below 1e-6 m.
  const double r = std::sqrt(160.0 * c.transmissivity * kSecondsPerYear / c.storativity);
  EXPECT_LT(theis_drawdown(r, kSecondsPerYear, c), 1e-6);
}

TEST(Theis, MonotoneInTimeAndDistance) {
  const auto c = theis_example();
  double prev = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double s = theis_drawdown(300.0, i * kSecondsPerYear, c);
    EXPECT_GE(s, prev);
    prev = s;
  }
  prev = 1e300;
  for (double r = 10.0; r < 1e5; r *= 1.7) {
    const double s = theis_drawdown(r, kSecondsPerYear, c);
    EXPECT_LE(s, prev);
    EXPECT_GE(s, 0.0);
    prev = s;
  }
  EXPECT_THROW(theis_drawdown(0.0, 1.0, c), std::domain_error);
  EXPECT_THROW(theis_drawdown(1.0, 0.0, c), std::domain_error);
}

TEST(PressureChange, CappedAtAquiferMid) {
  auto c = theis_example();
  c.pressure_cap = 3e6;
  const double dp = pressure_change(0.5 * c.fault_length, c.aquifer_mid(), kSecondsPerYear, c);
  // 9.81e3 * 348 = 3.41 MPa exceeds the 3 MPa cap
  EXPECT_DOUBLE_EQ(dp, -3e6);
  c.pressure_cap = 1e7;
  EXPECT_NEAR(pressure_change(0.5 * c.fault_length, c.aquifer_mid(), kSecondsPerYear, c), -3.41e6, 0.01e6);
  EXPECT_THROW(pressure_change(0.0, 1.0, kSecondsPerYear, c), std::domain_error);
}

TEST(PressureChange, DecaysAwayFromAquifer) {
  const OracleConfig c;
  const double mid = pressure_change(2500.0, c.aquifer_mid(), 5 * kSecondsPerYear, c);
  const double above = pressure_change(2500.0, c.aquifer_top + 100.0, 5 * kSecondsPerYear, c);
  EXPECT_NEAR(above / mid, std::exp(-100.0 / c.decay_length), 1e-12);
}

TEST(TauMax, Examples) {
  EXPECT_DOUBLE_EQ(tau_max(0.0, 33.0, 0.0), 0.0);
  EXPECT_NEAR(tau_max(1.0e5, 30.0, -1.0e6), 1.0e5 + 1.0e6 / std::sqrt(3.0), 1e-6);
  EXPECT_NEAR(tau_max(1.0e5, 30.0, -1.0e6), 6.7735e5, 1.0);
  EXPECT_NEAR(tau_max(9.2e4, 27.1, -1.0e7), 5.209e6, 1e3);
  EXPECT_THROW(tau_max(0.0, 0.0, -1.0), std::domain_error);
  EXPECT_THROW(tau_max(0.0, 90.0, -1.0), std::domain_error);
}

TEST(ClassifyPatch, Modes) {
  OracleConfig c;
  const ParameterVector p{0.0, 30.0, 0.5};
  EXPECT_EQ(classify_patch(1.0, 1e9, p, c).mode, PatchMode::Open);
  EXPECT_EQ(classify_patch(1.0, 1e9, p, c).slip, 0.0);
  EXPECT_EQ(classify_patch(-1e6, 0.0, p, c).mode, PatchMode::Stick);
  c.patch_shear_stiffness = 1e8;
  const auto s = classify_patch(-1e6, 6.0e5, p, c);
  EXPECT_EQ(s.mode, PatchMode::Slip);
  EXPECT_NEAR(s.slip, (6.0e5 - 1e6 / std::sqrt(3.0)) / 1e8, 1e-15);
  EXPECT_NEAR(s.slip, 2.265e-4, 1e-7);
}

TEST(SeismicMoment, Examples) {
  const OracleConfig c;
  EXPECT_NEAR(c.shear_modulus(), 3.846e8, 1e5);
  EXPECT_EQ(seismic_moment(StateVector{0.0, 0.3}, c), 0.0);
  EXPECT_NEAR(seismic_moment(StateVector{1.0e6, 0.01}, c), 3.846e12, 1e9);
}

TEST(FaultModel, MatchesBruteForcePatchLoop) {
  OracleConfig c;
  c.grid_ny = 40;
  c.grid_nz = 115;
  const FaultModel model(c);
  const FaultGrid grid(c);
  for (const ParameterVector& p : {ParameterVector{0.0, 20.0, 0.4286}, ParameterVector{9.2e4, 27.1, 0.45},
                                   ParameterVector{1.5e5, 35.0, 0.8}}) {
    for (int t = 1; t <= c.n_steps; ++t) {
      double area = 0.0, moment = 0.0;
      for (double s : grid.s)
        for (double z : grid.z) {
          const auto l = patch_loads(s, z, t * kSecondsPerYear, p, c);
          const auto st = classify_patch(l.t_n, l.tau, p, c);
          if (st.mode == PatchMode::Slip) {
            area += grid.patch_area;
            moment += st.slip * grid.patch_area;
          }
        }
      const auto y = model.evaluate(p, t);
      EXPECT_NEAR(y.a_a, area, 1e-9 * std::max(1.0, area));
      EXPECT_NEAR(y.delta_s, area > 0 ? moment / area : 0.0, 1e-15);
    }
  }
}

TEST(FaultModel, StepRangeChecked) {
  const FaultModel model{OracleConfig{}};
  EXPECT_THROW((void)model.evaluate({0.0, 30.0, 0.5}, 0), std::exception);
  EXPECT_THROW((void)model.evaluate({0.0, 30.0, 0.5}, 11), std::exception);
}

TEST(FaultModel, WeakestCornerSlipsLate) {
  const FaultModel model{OracleConfig{}};
  const auto y1 = model.evaluate({0.0, 20.0, 0.4286}, 1);
  const auto y10 = model.evaluate({0.0, 20.0, 0.4286}, 10);
  EXPECT_EQ(y1.a_a, 0.0);
  EXPECT_EQ(y1.delta_s, 0.0);
  EXPECT_GT(y10.a_a, 0.0);
}

TEST(FaultModel, StiffnessScalesSlipOnly) {
  OracleConfig a;
  a.grid_ny = 30;
  a.grid_nz = 92;
  OracleConfig b = a;
  b.patch_shear_stiffness = 2.0 * a.patch_shear_stiffness;
  const FaultModel ma(a), mb(b);
  const ParameterVector p{5e4, 25.0, 0.5};
  for (int t = 1; t <= 10; ++t) {
    const auto ya = ma.evaluate(p, t), yb = mb.evaluate(p, t);
    EXPECT_EQ(ya.a_a, yb.a_a);
    EXPECT_NEAR(yb.delta_s, 0.5 * ya.delta_s, 1e-15);
  }
}

TEST(FaultModel, SeriesFlagsOpening) {
  const FaultModel model{OracleConfig{}};
  const auto s = model.run_series({9.2e4, 27.1, 0.45});
  ASSERT_EQ(s.states.size(), 10u);
  bool any_open = false;
  for (int n : s.open_patches) any_open = any_open || n > 0;
  EXPECT_EQ(s.opened, any_open);
  for (const auto& y : s.states)
    if (y.a_a == 0.0) {
      EXPECT_EQ(y.delta_s, 0.0);
    }
}

TEST(Calibration, DefaultsPassPhenomenology) {
  const FaultModel model{OracleConfig{}};
  const auto r = assess(model, dataset::tensor_grid(ParameterCube{}));
  EXPECT_EQ(r.n_points, 125u);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.active_at_t1, 0u);
  EXPECT_GE(r.opened_and_decreasing, 1u);
}

TEST(Calibration, FirstCandidateIsShippedDefault) {
  oracle::CalibrationCandidates cand;
  const auto res = calibrate(OracleConfig{}, cand, ParameterCube{});
  ASSERT_TRUE(res.success);
  EXPECT_EQ(res.tried, 1u);
  EXPECT_EQ(to_json(res.config), to_json(OracleConfig{}));
}

TEST(OracleConfig, JsonRoundTripAndValidation) {
  OracleConfig c;
  c.decay_length = 50.0;
  EXPECT_EQ(to_json(oracle_config_from_json(to_json(c))), to_json(c));
  auto j = to_json(c);
  j["storativity"] = -1.0;
  EXPECT_THROW(oracle_config_from_json(j), ConfigError);
}
