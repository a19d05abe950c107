// Sobol indices of the Ishigami function from a Saltelli design.
#include <cmath>
#include <cstdio>

#include "surmodel/sensitivity/indices.hpp"

int main() {
  using namespace surmodel;
  constexpr double a = 7.0, b = 0.1;
  const std::vector<Interval> box(3, Interval{-kPi, kPi});
  const auto design = sensitivity::saltelli_sample(box, 1 << 13, true);
  std::vector<double> y(design.n_rows());
  for (std::size_t r = 0; r < y.size(); ++r) {
    const double* x = design.row(r);
    y[r] = std::sin(x[0]) + a * std::sin(x[1]) * std::sin(x[1]) + b * std::pow(x[2], 4) * std::sin(x[0]);
  }
  const auto s = sensitivity::analyze_outputs(design, y);
  for (std::size_t i = 0; i < 3; ++i) std::printf("x%zu  S1 %.4f  ST %.4f\n", i + 1, s.first[i], s.total[i]);
  std::printf("S12 %.4f  S13 %.4f  S23 %.4f\n", s.s2(0, 1), s.s2(0, 2), s.s2(1, 2));
}
