#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "surmodel/core/statistics.hpp"
#include "surmodel/core/types.hpp"

namespace surmodel::surrogate {

/// 1 - SSE/SST, with the mean taken over every value passed.
inline double r_squared(std::span<const double> ref, std::span<const double> pred) {
  if (ref.size() != pred.size()) throw std::invalid_argument("r_squared: size mismatch");
  if (ref.size() < 2) throw std::invalid_argument("r_squared: need at least 2 values");
  const double m = stats::mean(ref);
  double sse = 0.0, sst = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    sse += (ref[k] - pred[k]) * (ref[k] - pred[k]);
    sst += (ref[k] - m) * (ref[k] - m);
  }
  if (!(sst > 0.0)) throw std::invalid_argument("r_squared: reference has zero variance");
  return 1.0 - sse / sst;
}

/// sum (ref - pred)^2 / sum ref^2.
inline double relative_error(std::span<const double> ref, std::span<const double> pred) {
  if (ref.size() != pred.size()) throw std::invalid_argument("relative_error: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    num += (ref[k] - pred[k]) * (ref[k] - pred[k]);
    den += ref[k] * ref[k];
  }
  if (!(den > 0.0)) throw std::invalid_argument("relative_error: reference is identically zero");
  return num / den;
}

/// Trajectories indexed [p][t-1].
using Trajectories = std::vector<std::vector<StateVector>>;

enum class Qoi { ActivatedArea, AverageSlip };

inline double component(const StateVector& s, Qoi q) { return q == Qoi::ActivatedArea ? s.a_a : s.delta_s; }

/// Flattened values of one QoI over the given steps (1-based).
inline std::vector<double> flatten(const Trajectories& tr, Qoi q, int first_step, int last_step) {
  std::vector<double> out;
  for (const auto& traj : tr)
    for (int t = first_step; t <= last_step; ++t) out.push_back(component(traj[static_cast<std::size_t>(t - 1)], q));
  return out;
}

struct AccuracyReport {
  int n_steps = 0;
  std::array<std::vector<double>, 2> e_per_step;  // steps 3..N, index 0 = A_a, 1 = delta_S
  std::array<double, 2> e_total{};
  std::array<double, 2> r2{};
};

/// Per-step relative error (t1, t2 excluded), overall error and R^2.
inline AccuracyReport accuracy(const Trajectories& ref, const Trajectories& pred, int n_steps) {
  if (ref.size() != pred.size()) throw std::invalid_argument("accuracy: ensemble size mismatch");
  AccuracyReport r;
  r.n_steps = n_steps;
  for (int q = 0; q < 2; ++q) {
    const auto qoi = static_cast<Qoi>(q);
    for (int t = 3; t <= n_steps; ++t)
      r.e_per_step[static_cast<std::size_t>(q)].push_back(
          relative_error(flatten(ref, qoi, t, t), flatten(pred, qoi, t, t)));
    const auto a = flatten(ref, qoi, 1, n_steps), b = flatten(pred, qoi, 1, n_steps);
    r.e_total[static_cast<std::size_t>(q)] = relative_error(a, b);
    r.r2[static_cast<std::size_t>(q)] = r_squared(a, b);
  }
  return r;
}

struct ConfusionMatrix {
  std::size_t tn = 0, fp = 0, fn = 0, tp = 0;

  [[nodiscard]] std::size_t total() const { return tn + fp + fn + tp; }
  [[nodiscard]] double accuracy() const {
    return total() ? static_cast<double>(tn + tp) / static_cast<double>(total()) : 0.0;
  }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

inline ConfusionMatrix confusion_matrix(std::span<const int> labels, std::span<const int> predictions) {
  if (labels.size() != predictions.size()) throw std::invalid_argument("confusion_matrix: size mismatch");
  ConfusionMatrix m;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const bool y = labels[k] != 0, p = predictions[k] != 0;
    if (!y && !p) ++m.tn;
    else if (!y && p) ++m.fp;
    else if (y && !p) ++m.fn;
    else ++m.tp;
  }
  return m;
}

struct StepSummary {
  int step = 0;
  double median = 0.0, q025 = 0.0, q975 = 0.0;
  std::vector<std::pair<double, double>> cdf;  // (value, rank/n)
};

/// Per-step median, 2.5%/97.5% quantiles and empirical CDF of one QoI.
inline std::vector<StepSummary> ensemble_summary(const Trajectories& tr, Qoi q, int n_steps) {
  if (tr.size() < 2) throw std::invalid_argument("ensemble_summary: need at least 2 realizations");
  std::vector<StepSummary> out;
  for (int t = 1; t <= n_steps; ++t) {
    auto v = flatten(tr, q, t, t);
    std::sort(v.begin(), v.end());
    StepSummary s;
    s.step = t;
    s.median = stats::quantile_sorted(v, 0.5);
    s.q025 = stats::quantile_sorted(v, 0.025);
    s.q975 = stats::quantile_sorted(v, 0.975);
    s.cdf = stats::empirical_cdf(std::move(v));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace surmodel::surrogate
