#pragma once

#include <algorithm>
#include <concepts>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "surmodel/core/parallel.hpp"
#include "surmodel/core/types.hpp"
#include "surmodel/nn/model_io.hpp"
#include "surmodel/oracle/fault_model.hpp"

namespace surmodel::surrogate {

/// Anything that maps a batch of parameter vectors at one step to states.
template <typename M>
concept Surrogate = requires(const M& m, const std::vector<ParameterVector>& pvs, int t) {
  { m.predict_batch(pvs, t) } -> std::same_as<std::vector<StateVector>>;
};

template <Surrogate M>
StateVector predict(const M& m, const ParameterVector& p, int t) {
  return m.predict_batch(std::vector<ParameterVector>{p}, t).front();
}

/// f_hat = 1 iff prob >= threshold.
inline int threshold_label(double prob, double threshold) { return prob >= threshold ? 1 : 0; }

namespace detail {

/// Normalized regression inputs (tau0, phi, m2, t[, extra]) one per column.
inline Eigen::MatrixXd regression_inputs(const Normalization& norm, const std::vector<ParameterVector>& pvs,
                                         int t, const std::vector<double>* extra = nullptr) {
  const Eigen::Index rows = extra ? 5 : 4;
  Eigen::MatrixXd X(rows, static_cast<Eigen::Index>(pvs.size()));
  for (std::size_t c = 0; c < pvs.size(); ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    X(0, ci) = norm.normalize_input(0, pvs[c].tau0);
    X(1, ci) = norm.normalize_input(1, pvs[c].phi);
    X(2, ci) = norm.normalize_input(2, pvs[c].m2);
    X(3, ci) = norm.normalize_input(3, static_cast<double>(t));
    if (extra) X(4, ci) = (*extra)[c];
  }
  return X;
}

inline std::vector<StateVector> to_states(const Normalization& norm, const Eigen::MatrixXd& Y) {
  std::vector<StateVector> out(static_cast<std::size_t>(Y.cols()));
  for (Eigen::Index c = 0; c < Y.cols(); ++c)
    out[static_cast<std::size_t>(c)] = {std::max(0.0, norm.denormalize_output(0, Y(0, c))),
                                        std::max(0.0, norm.denormalize_output(1, Y(1, c)))};
  return out;
}

}  // namespace detail

/// Opening classifier on (tau0, phi, m2) with a sigmoid head.
struct ModelClass {
  nn::ModelFile model;
  double threshold = 0.5;

  [[nodiscard]] std::vector<double> probability_batch(const std::vector<ParameterVector>& pvs) const {
    const auto& norm = model.normalization;
    Eigen::MatrixXd X(3, static_cast<Eigen::Index>(pvs.size()));
    for (std::size_t c = 0; c < pvs.size(); ++c)
      for (std::size_t i = 0; i < 3; ++i)
        X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = norm.normalize_input(i, pvs[c][i]);
    const Eigen::MatrixXd P = model.network.forward(X);
    return {P.data(), P.data() + P.size()};
  }
  [[nodiscard]] double probability(const ParameterVector& p) const { return probability_batch({p}).front(); }
  [[nodiscard]] int classify(const ParameterVector& p) const { return threshold_label(probability(p), threshold); }
  [[nodiscard]] std::vector<int> classify_batch(const std::vector<ParameterVector>& pvs) const {
    std::vector<int> out;
    for (double pr : probability_batch(pvs)) out.push_back(threshold_label(pr, threshold));
    return out;
  }
};

/// Plain regression on (tau0, phi, m2, t).
struct SurrogateBaseline {
  nn::ModelFile model;

  [[nodiscard]] std::vector<StateVector> predict_batch(const std::vector<ParameterVector>& pvs, int t) const {
    const auto& n = model.normalization;
    return detail::to_states(n, model.network.forward(detail::regression_inputs(n, pvs, t)));
  }
};

/// Regression with the thresholded classifier output as a fifth input.
struct SurrogateII {
  nn::ModelFile model;
  ModelClass classifier;

  [[nodiscard]] std::vector<StateVector> predict_batch(const std::vector<ParameterVector>& pvs, int t) const {
    std::vector<double> f_hat;
    for (int f : classifier.classify_batch(pvs)) f_hat.push_back(f);
    return predict_with_label(pvs, t, f_hat);
  }

  /// Evaluates the network with an explicit fifth input.
  [[nodiscard]] std::vector<StateVector> predict_with_label(const std::vector<ParameterVector>& pvs, int t,
                                                            const std::vector<double>& f_hat) const {
    const auto& n = model.normalization;
    return detail::to_states(n, model.network.forward(detail::regression_inputs(n, pvs, t, &f_hat)));
  }
};

/// Two regressions (no opening / opening) blended by the raw probability.
struct SurrogatePair {
  nn::ModelFile model0;
  nn::ModelFile model1;
  ModelClass classifier;

  static StateVector blend(double prob, const StateVector& y0, const StateVector& y1) {
    return {prob * y1.a_a + (1.0 - prob) * y0.a_a, prob * y1.delta_s + (1.0 - prob) * y0.delta_s};
  }

  [[nodiscard]] std::vector<StateVector> predict_batch(const std::vector<ParameterVector>& pvs, int t) const {
    const auto prob = classifier.probability_batch(pvs);
    return predict_with_probability(pvs, t, prob);
  }

  [[nodiscard]] std::vector<StateVector> predict_with_probability(const std::vector<ParameterVector>& pvs, int t,
                                                                  const std::vector<double>& prob) const {
    const SurrogateBaseline s0{model0}, s1{model1};
    const auto y0 = s0.predict_batch(pvs, t);
    const auto y1 = s1.predict_batch(pvs, t);
    std::vector<StateVector> out(pvs.size());
    for (std::size_t k = 0; k < pvs.size(); ++k) out[k] = blend(prob[k], y0[k], y1[k]);
    return out;
  }
};

/// The oracle behind the same interface, for reference curves and
/// oracle-likelihood runs.
struct OracleModel {
  const oracle::FaultModel* model = nullptr;

  [[nodiscard]] std::vector<StateVector> predict_batch(const std::vector<ParameterVector>& pvs, int t) const {
    std::vector<StateVector> out(pvs.size());
    parallel_for(pvs.size(), [&](std::size_t k) { out[k] = model->evaluate(pvs[k], t); });
    return out;
  }
};

/// Trajectories [p][t-1] of a model over steps 1..n_steps.
template <Surrogate M>
std::vector<std::vector<StateVector>> trajectories(const M& m, const std::vector<ParameterVector>& pvs,
                                                   int n_steps) {
  std::vector<std::vector<StateVector>> out(pvs.size(), std::vector<StateVector>(static_cast<std::size_t>(n_steps)));
  for (int t = 1; t <= n_steps; ++t) {
    const auto ys = m.predict_batch(pvs, t);
    for (std::size_t k = 0; k < pvs.size(); ++k) out[k][static_cast<std::size_t>(t - 1)] = ys[k];
  }
  return out;
}

}  // namespace surmodel::surrogate
