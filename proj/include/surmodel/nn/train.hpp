#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "surmodel/core/errors.hpp"
#include "surmodel/core/random.hpp"
#include "surmodel/nn/adam.hpp"
#include "surmodel/nn/backprop.hpp"
#include "surmodel/nn/network.hpp"

namespace surmodel::nn {

struct TrainConfig {
  AdamConfig adam{};
  std::size_t batch_size = 32;
  std::size_t max_epochs = 10000;
  std::size_t patience = 200;
  std::uint64_t seed = 0;
  Loss loss = Loss::MSE;
  double min_improvement = 1e-12;

  void validate() const {
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (patience < 1) throw ConfigError("patience must be >= 1");
    if (patience >= max_epochs) throw ConfigError("patience must be < max_epochs");
    if (!(adam.learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  }
};

/// Column-major design: one sample per column.
struct TrainData {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(X.cols()); }
  [[nodiscard]] bool empty() const { return X.cols() == 0; }
};

struct TrainResult {
  Network network;
  std::vector<double> train_loss;  // per-sample mean over each epoch
  std::vector<double> val_loss;
  std::size_t best_epoch = 0;      // 1-based
  double best_val_loss = 0.0;
};

inline double evaluate_loss(const Network& net, const TrainData& d, Loss loss) {
  return loss_mean(loss, net.forward(d.X), d.Y);
}

/// Adam over shuffled mini-batches with early stopping on the validation
/// loss; returns the best weights seen. An empty validation set falls back
/// to the training loss.
inline TrainResult train(const NetworkSpec& spec, const TrainData& train_set, const TrainData& val_set,
                         const TrainConfig& cfg,
                         const std::function<void(std::size_t, double, double)>& on_epoch = {}) {
  cfg.validate();
  if (train_set.empty()) throw std::invalid_argument("train: empty training set");
  if (train_set.X.cols() != train_set.Y.cols()) throw std::invalid_argument("train: X/Y column mismatch");

  TrainResult res;
  Network net = Network::initialized(spec, derive_seed(cfg.seed, "init"));
  Adam opt(net, cfg.adam);
  Rng rng(derive_seed(cfg.seed, "shuffle"));

  const std::size_t n = train_set.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  double best = INFINITY;
  Network best_net = net;
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    shuffle_in_place(order, rng);
    double epoch_sum = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t end = std::min(n, start + cfg.batch_size);
      const std::vector<Eigen::Index> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                          order.begin() + static_cast<std::ptrdiff_t>(end));
      const Eigen::MatrixXd xb = train_set.X(Eigen::all, idx);
      const Eigen::MatrixXd yb = train_set.Y(Eigen::all, idx);
      BackpropResult bp = backprop(net, xb, yb, cfg.loss);
      if (!std::isfinite(bp.loss_sum) || !bp.grad.finite())
        throw NumericalDivergence("training diverged at epoch " + std::to_string(epoch));
      bp.grad *= 1.0 / static_cast<double>(end - start);
      opt.step(net, bp.grad);
      epoch_sum += bp.loss_sum;
    }
    const double denom = cfg.loss == Loss::MSE ? static_cast<double>(n) : static_cast<double>(train_set.Y.size());
    const double tl = epoch_sum / denom;
    const double vl = val_set.empty() ? evaluate_loss(net, train_set, cfg.loss) : evaluate_loss(net, val_set, cfg.loss);
    if (!std::isfinite(tl) || !std::isfinite(vl))
      throw NumericalDivergence("loss is not finite at epoch " + std::to_string(epoch));
    res.train_loss.push_back(tl);
    res.val_loss.push_back(vl);
    if (on_epoch) on_epoch(epoch, tl, vl);
    if (vl < best - cfg.min_improvement) {
      best = vl;
      best_net = net;
      res.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  res.network = std::move(best_net);
  res.best_val_loss = best;
  return res;
}

}  // namespace surmodel::nn
