#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "surmodel/core/types.hpp"
#include "surmodel/sensitivity/sobol_sequence.hpp"

namespace surmodel::sensitivity {

/// Rows grouped per base index j: A_j, AB_1..AB_n, [BA_1..BA_n,] B_j.
struct SaltelliDesign {
  std::size_t base = 0;  // D
  std::size_t dim = 0;   // n
  bool second_order = true;
  std::vector<double> rows;  // row-major, dim columns, physical coordinates

  [[nodiscard]] std::size_t block() const { return second_order ? 2 * dim + 2 : dim + 2; }
  [[nodiscard]] std::size_t n_rows() const { return base * block(); }
  [[nodiscard]] const double* row(std::size_t r) const { return rows.data() + r * dim; }
};

inline bool is_power_of_two(std::size_t d) { return d > 0 && (d & (d - 1)) == 0; }

inline SaltelliDesign saltelli_sample(const std::vector<Interval>& box, std::size_t D, bool second_order,
                                      std::uint64_t seed = 0, bool scramble = false) {
  if (!is_power_of_two(D)) throw std::invalid_argument("Saltelli base count D must be a power of two");
  const std::size_t n = box.size();
  if (n < 1 || 2 * n > kSobolMaxDimension)
    throw std::invalid_argument("Saltelli design supports 1.." + std::to_string(kSobolMaxDimension / 2) +
                                " inputs");
  SaltelliDesign d;
  d.base = D;
  d.dim = n;
  d.second_order = second_order;
  d.rows.reserve(d.n_rows() * n);
  SobolSequence seq(2 * n, seed, scramble);
  auto emit = [&](const std::vector<double>& u) {
    for (std::size_t i = 0; i < n; ++i) d.rows.push_back(box[i].from_unit(u[i]));
  };
  for (std::size_t j = 0; j < D; ++j) {
    const auto u = seq.next();
    const std::vector<double> a(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(n));
    const std::vector<double> b(u.begin() + static_cast<std::ptrdiff_t>(n), u.end());
    emit(a);
    for (std::size_t i = 0; i < n; ++i) {
      auto ab = a;
      ab[i] = b[i];
      emit(ab);
    }
    if (second_order)
      for (std::size_t i = 0; i < n; ++i) {
        auto ba = b;
        ba[i] = a[i];
        emit(ba);
      }
    emit(b);
  }
  return d;
}

inline std::vector<Interval> cube_axes(const ParameterCube& c) { return {c.tau0, c.phi, c.m2}; }

inline std::vector<ParameterVector> parameter_rows(const SaltelliDesign& d) {
  if (d.dim != 3) throw std::invalid_argument("parameter_rows: design must be 3-dimensional");
  std::vector<ParameterVector> out(d.n_rows());
  for (std::size_t r = 0; r < d.n_rows(); ++r) out[r] = {d.row(r)[0], d.row(r)[1], d.row(r)[2]};
  return out;
}

}  // namespace surmodel::sensitivity
