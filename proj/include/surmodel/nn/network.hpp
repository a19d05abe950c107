#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "surmodel/core/random.hpp"
#include "surmodel/nn/activation.hpp"

namespace surmodel::nn {

/// Feedforward architecture: n0 inputs, then L hidden layers and one output
/// layer whose widths are listed in `widths` (size L + 1).
struct NetworkSpec {
  std::size_t n0 = 1;
  std::vector<std::size_t> widths{1};
  Activation hidden = Activation::ReLU;
  Activation output = Activation::Identity;

  /// Uniform hidden block: L layers of n neurons, then n_out outputs.
  static NetworkSpec uniform(std::size_t n0, std::size_t L, std::size_t n, std::size_t n_out,
                             Activation hidden, Activation output) {
    NetworkSpec s;
    s.n0 = n0;
    s.widths.assign(L, n);
    s.widths.push_back(n_out);
    s.hidden = hidden;
    s.output = output;
    return s;
  }

  [[nodiscard]] std::size_t hidden_layers() const { return widths.empty() ? 0 : widths.size() - 1; }
  [[nodiscard]] std::size_t n_out() const { return widths.back(); }
  [[nodiscard]] std::size_t input_width(std::size_t layer) const {
    return layer == 0 ? n0 : widths[layer - 1];
  }

  [[nodiscard]] std::size_t parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < widths.size(); ++l) n += widths[l] * (input_width(l) + 1);
    return n;
  }

  void validate() const {
    if (n0 < 1) throw std::invalid_argument("NetworkSpec: n0 must be >= 1");
    if (widths.empty()) throw std::invalid_argument("NetworkSpec: no layers");
    for (std::size_t w : widths)
      if (w < 1) throw std::invalid_argument("NetworkSpec: widths must be >= 1");
  }

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

struct Layer {
  Eigen::MatrixXd W;  // n_l x n_{l-1}
  Eigen::VectorXd b;  // n_l
};

inline bool operator==(const Layer& a, const Layer& b) {
  return a.W.rows() == b.W.rows() && a.W.cols() == b.W.cols() && a.b.size() == b.b.size() &&
         a.W == b.W && a.b == b.b;
}

class Network {
 public:
  Network() = default;
  explicit Network(NetworkSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    for (std::size_t l = 0; l < spec_.widths.size(); ++l) {
      const auto rows = static_cast<Eigen::Index>(spec_.widths[l]);
      const auto cols = static_cast<Eigen::Index>(spec_.input_width(l));
      layers_.push_back({Eigen::MatrixXd::Zero(rows, cols), Eigen::VectorXd::Zero(rows)});
    }
  }

  /// He-uniform weights for ReLU hidden layers, Glorot-uniform otherwise;
  /// zero biases.
  static Network initialized(const NetworkSpec& spec, std::uint64_t seed) {
    Network net(spec);
    Rng rng(seed);
    for (std::size_t l = 0; l < net.layers_.size(); ++l) {
      auto& W = net.layers_[l].W;
      const double fan_in = static_cast<double>(W.cols());
      const double fan_out = static_cast<double>(W.rows());
      const bool hidden = l + 1 < net.layers_.size();
      const double limit = (hidden && spec.hidden == Activation::ReLU)
                               ? std::sqrt(6.0 / fan_in)
                               : std::sqrt(6.0 / (fan_in + fan_out));
      for (Eigen::Index r = 0; r < W.rows(); ++r)
        for (Eigen::Index c = 0; c < W.cols(); ++c) W(r, c) = limit * (2.0 * uniform01(rng) - 1.0);
    }
    return net;
  }

  [[nodiscard]] const NetworkSpec& spec() const { return spec_; }
  [[nodiscard]] std::vector<Layer>& layers() { return layers_; }
  [[nodiscard]] const std::vector<Layer>& layers() const { return layers_; }

  [[nodiscard]] Activation activation_of(std::size_t layer) const {
    return layer + 1 == layers_.size() ? spec_.output : spec_.hidden;
  }

  /// Batch forward pass; one sample per column.
  [[nodiscard]] Eigen::MatrixXd forward(const Eigen::MatrixXd& X) const {
    if (static_cast<std::size_t>(X.rows()) != spec_.n0)
      throw std::invalid_argument("forward: expected " + std::to_string(spec_.n0) + " input rows, got " +
                                  std::to_string(X.rows()));
    Eigen::MatrixXd a = X;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      Eigen::MatrixXd z = layers_[l].W * a;
      z.colwise() += layers_[l].b;
      a = activate(activation_of(l), z);
    }
    return a;
  }

  [[nodiscard]] Eigen::VectorXd forward(const Eigen::VectorXd& x) const {
    return forward(Eigen::MatrixXd(x)).col(0);
  }

  [[nodiscard]] std::vector<double> forward(const std::vector<double>& x) const {
    const Eigen::VectorXd out =
        forward(Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()))));
    return {out.data(), out.data() + out.size()};
  }

  [[nodiscard]] bool finite() const {
    for (const auto& L : layers_)
      if (!L.W.allFinite() || !L.b.allFinite()) return false;
    return true;
  }

  friend bool operator==(const Network& a, const Network& b) {
    return a.spec_ == b.spec_ && a.layers_ == b.layers_;
  }

 private:
  NetworkSpec spec_;
  std::vector<Layer> layers_;
};

}  // namespace surmodel::nn
