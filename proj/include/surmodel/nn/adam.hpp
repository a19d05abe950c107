#pragma once

#include <cmath>

#include "surmodel/nn/backprop.hpp"
#include "surmodel/nn/network.hpp"

namespace surmodel::nn {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam(const Network& net, AdamConfig cfg) : cfg_(cfg), m_(Gradients::zeros_like(net)), v_(Gradients::zeros_like(net)) {}

  void step(Network& net, const Gradients& g) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    auto update = [&](auto& param, auto& m, auto& v, const auto& grad) {
      m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * grad;
      v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * grad.cwiseProduct(grad);
      param.array() -= cfg_.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg_.epsilon);
    };
    auto& layers = net.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
      update(layers[l].W, m_.layers[l].W, v_.layers[l].W, g.layers[l].W);
      update(layers[l].b, m_.layers[l].b, v_.layers[l].b, g.layers[l].b);
    }
  }

  [[nodiscard]] long long steps() const { return t_; }

 private:
  AdamConfig cfg_;
  Gradients m_, v_;
  long long t_ = 0;
};

}  // namespace surmodel::nn
