#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace surmodel::nn {

enum class Loss { MSE, BCE };

inline std::string_view to_string(Loss l) { return l == Loss::MSE ? "mse" : "bce"; }

inline Loss parse_loss(std::string_view s) {
  if (s == "mse") return Loss::MSE;
  if (s == "bce") return Loss::BCE;
  throw std::invalid_argument("unknown loss '" + std::string(s) + "'");
}

inline constexpr double kProbClip = 1e-7;

inline void check_shapes(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("loss: shape mismatch");
  if (a.cols() == 0) throw std::invalid_argument("loss: empty batch");
}

/// Sum over samples (columns) of the squared error norm.
inline double mse_sum(const Eigen::MatrixXd& preds, const Eigen::MatrixXd& targets) {
  check_shapes(preds, targets);
  return (preds - targets).squaredNorm();
}

/// Sum convention divided by the batch size.
inline double mse_loss(const Eigen::MatrixXd& preds, const Eigen::MatrixXd& targets) {
  return mse_sum(preds, targets) / static_cast<double>(preds.cols());
}

inline double bce_term(double p, double y) {
  if (y != 0.0 && y != 1.0) throw std::invalid_argument("bce: label outside {0,1}");
  p = std::clamp(p, kProbClip, 1.0 - kProbClip);
  return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

inline double bce_sum(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& labels) {
  check_shapes(probs, labels);
  double s = 0.0;
  for (Eigen::Index c = 0; c < probs.cols(); ++c)
    for (Eigen::Index r = 0; r < probs.rows(); ++r) s += bce_term(probs(r, c), labels(r, c));
  return s;
}

inline double bce_loss(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& labels) {
  return bce_sum(probs, labels) / static_cast<double>(probs.size());
}

inline double loss_sum(Loss kind, const Eigen::MatrixXd& preds, const Eigen::MatrixXd& targets) {
  return kind == Loss::MSE ? mse_sum(preds, targets) : bce_sum(preds, targets);
}

/// Per-sample mean of the loss.
inline double loss_mean(Loss kind, const Eigen::MatrixXd& preds, const Eigen::MatrixXd& targets) {
  return kind == Loss::MSE ? mse_loss(preds, targets) : bce_loss(preds, targets);
}

/// d(loss_sum)/d(preds).
inline Eigen::MatrixXd loss_gradient(Loss kind, const Eigen::MatrixXd& preds,
                                     const Eigen::MatrixXd& targets) {
  check_shapes(preds, targets);
  if (kind == Loss::MSE) return 2.0 * (preds - targets);
  Eigen::MatrixXd g(preds.rows(), preds.cols());
  for (Eigen::Index c = 0; c < preds.cols(); ++c)
    for (Eigen::Index r = 0; r < preds.rows(); ++r) {
      const double p = preds(r, c), y = targets(r, c);
      // flat (zero gradient) where the clip is active
      g(r, c) = (p <= kProbClip || p >= 1.0 - kProbClip) ? 0.0 : -(y / p - (1.0 - y) / (1.0 - p));
    }
  return g;
}

}  // namespace surmodel::nn
