#pragma once

#include <vector>

#include <Eigen/Dense>

#include "surmodel/nn/loss.hpp"
#include "surmodel/nn/network.hpp"

namespace surmodel::nn {

/// Same shapes as the network layers.
struct Gradients {
  std::vector<Layer> layers;

  static Gradients zeros_like(const Network& net) {
    Gradients g;
    for (const auto& L : net.layers())
      g.layers.push_back({Eigen::MatrixXd::Zero(L.W.rows(), L.W.cols()), Eigen::VectorXd::Zero(L.b.size())});
    return g;
  }

  Gradients& operator*=(double s) {
    for (auto& L : layers) {
      L.W *= s;
      L.b *= s;
    }
    return *this;
  }

  [[nodiscard]] bool finite() const {
    for (const auto& L : layers)
      if (!L.W.allFinite() || !L.b.allFinite()) return false;
    return true;
  }
};

struct BackpropResult {
  double loss_sum = 0.0;  // summed over the batch
  Gradients grad;         // gradient of loss_sum
};

/// Reverse-mode gradient of the summed loss over a batch (one sample per
/// column of X and Y).
inline BackpropResult backprop(const Network& net, const Eigen::MatrixXd& X,
                               const Eigen::MatrixXd& Y, Loss loss) {
  const auto& layers = net.layers();
  const std::size_t n_layers = layers.size();
  std::vector<Eigen::MatrixXd> a(n_layers + 1), z(n_layers);
  if (static_cast<std::size_t>(X.rows()) != net.spec().n0)
    throw std::invalid_argument("backprop: input width mismatch");
  a[0] = X;
  for (std::size_t l = 0; l < n_layers; ++l) {
    z[l] = layers[l].W * a[l];
    z[l].colwise() += layers[l].b;
    a[l + 1] = activate(net.activation_of(l), z[l]);
  }

  BackpropResult out;
  out.loss_sum = loss_sum(loss, a[n_layers], Y);
  out.grad = Gradients::zeros_like(net);
  Eigen::MatrixXd delta = loss_gradient(loss, a[n_layers], Y);
  for (std::size_t l = n_layers; l-- > 0;) {
    const Activation act = net.activation_of(l);
    if (act != Activation::Identity) delta.array() *= derivative(act, z[l]).array();
    out.grad.layers[l].W.noalias() = delta * a[l].transpose();
    out.grad.layers[l].b = delta.rowwise().sum();
    if (l > 0) delta = layers[l].W.transpose() * delta;
  }
  return out;
}

}  // namespace surmodel::nn
