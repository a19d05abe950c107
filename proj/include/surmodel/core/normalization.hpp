#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace surmodel {

/// Min-max scaling of inputs to [0,1] and positive scaling of outputs.
struct Normalization {
  std::vector<double> input_min;
  std::vector<double> input_max;
  std::vector<double> output_scale;

  [[nodiscard]] std::size_t n_inputs() const { return input_min.size(); }
  [[nodiscard]] std::size_t n_outputs() const { return output_scale.size(); }

  [[nodiscard]] double input_range(std::size_t i) const {
    const double r = input_max[i] - input_min[i];
    return r > 0.0 ? r : 1.0;
  }
  [[nodiscard]] double normalize_input(std::size_t i, double x) const {
    return (x - input_min[i]) / input_range(i);
  }
  [[nodiscard]] double denormalize_input(std::size_t i, double u) const {
    return input_min[i] + u * input_range(i);
  }
  [[nodiscard]] double normalize_output(std::size_t i, double y) const { return y / output_scale[i]; }
  [[nodiscard]] double denormalize_output(std::size_t i, double v) const { return v * output_scale[i]; }

  void check() const {
    if (input_min.size() != input_max.size()) throw std::invalid_argument("normalization size mismatch");
    for (double s : output_scale)
      if (!(s > 0.0)) throw std::invalid_argument("output scale must be > 0");
  }
  friend bool operator==(const Normalization&, const Normalization&) = default;
};

}  // namespace surmodel
