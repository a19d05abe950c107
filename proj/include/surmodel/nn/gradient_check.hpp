#pragma once

#include <algorithm>
#include <cmath>

#include "surmodel/core/random.hpp"
#include "surmodel/nn/backprop.hpp"

namespace surmodel::nn {

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t coordinates = 0;
};

/// Compares backprop against central differences of the summed loss on
/// every weight and bias. Relative error uses max(|analytic|, |numeric|)
/// with a floor, so coordinates whose gradient is numerically zero are
/// judged in absolute terms.
inline GradientCheck gradient_check(const Network& net, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                                    Loss loss, double h = 1e-5, double floor = 1e-6) {
  const auto analytic = backprop(net, X, Y, loss).grad;
  Network probe = net;
  GradientCheck out;
  auto visit = [&](double& w, double g) {
    const double w0 = w;
    w = w0 + h;
    const double up = loss_sum(loss, probe.forward(X), Y);
    w = w0 - h;
    const double down = loss_sum(loss, probe.forward(X), Y);
    w = w0;
    const double fd = (up - down) / (2.0 * h);
    const double rel = std::abs(g - fd) / std::max({std::abs(g), std::abs(fd), floor});
    out.max_relative_error = std::max(out.max_relative_error, rel);
    ++out.coordinates;
  };
  for (std::size_t l = 0; l < probe.layers().size(); ++l) {
    auto& L = probe.layers()[l];
    for (Eigen::Index r = 0; r < L.W.rows(); ++r)
      for (Eigen::Index c = 0; c < L.W.cols(); ++c) visit(L.W(r, c), analytic.layers[l].W(r, c));
    for (Eigen::Index r = 0; r < L.b.size(); ++r) visit(L.b(r), analytic.layers[l].b(r));
  }
  return out;
}

/// One randomized small-network draw for the gradient check: widths <= 8,
/// smooth hidden activations (no ReLU kinks), MSE or BCE with a matching
/// head, nonzero biases, a handful of samples.
struct GradientCase {
  Network net;
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;
  Loss loss = Loss::MSE;
};

inline GradientCase random_gradient_case(std::uint64_t seed) {
  Rng rng(seed);
  auto draw = [&](std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng() % (hi - lo + 1)); };
  const Activation smooth[] = {Activation::Tanh, Activation::Softplus, Activation::Sigmoid};
  GradientCase c;
  c.loss = rng() % 4 == 0 ? Loss::BCE : Loss::MSE;
  NetworkSpec spec;
  spec.n0 = draw(1, 8);
  spec.widths.clear();
  const std::size_t hidden = draw(0, 3);
  for (std::size_t l = 0; l < hidden; ++l) spec.widths.push_back(draw(1, 8));
  spec.widths.push_back(c.loss == Loss::BCE ? 1 : draw(1, 4));
  spec.hidden = smooth[rng() % 3];
  const Activation mse_heads[] = {Activation::Identity, Activation::Softplus, Activation::Tanh};
  spec.output = c.loss == Loss::BCE ? Activation::Sigmoid : mse_heads[rng() % 3];
  c.net = Network::initialized(spec, rng());
  for (auto& L : c.net.layers())
    for (Eigen::Index r = 0; r < L.b.size(); ++r) L.b(r) = 0.5 * standard_normal(rng);
  const auto batch = static_cast<Eigen::Index>(draw(1, 6));
  c.X.resize(static_cast<Eigen::Index>(spec.n0), batch);
  for (Eigen::Index i = 0; i < c.X.size(); ++i) c.X.data()[i] = standard_normal(rng);
  c.Y.resize(static_cast<Eigen::Index>(spec.n_out()), batch);
  for (Eigen::Index i = 0; i < c.Y.size(); ++i)
    c.Y.data()[i] = c.loss == Loss::BCE ? static_cast<double>(rng() % 2) : standard_normal(rng);
  return c;
}

}  // namespace surmodel::nn
