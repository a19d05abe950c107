#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "surmodel/core/statistics.hpp"
#include "surmodel/io/csv.hpp"
#include "surmodel/sensitivity/saltelli.hpp"

namespace surmodel::sensitivity {

namespace detail {
inline void check(std::size_t n, std::size_t m, double var) {
  if (n != m) throw std::invalid_argument("Sobol estimator: length mismatch");
  if (n < 2) throw std::invalid_argument("Sobol estimator: need at least 2 samples");
  if (!(var > 0.0)) throw std::invalid_argument("Sobol estimator: zero output variance");
}
}  // namespace detail

/// mean(y_B (y_ABi - y_A)) / Var.
inline double sobol_first(std::span<const double> yA, std::span<const double> yB, std::span<const double> yABi,
                          double var) {
  detail::check(yA.size(), yB.size(), var);
  detail::check(yA.size(), yABi.size(), var);
  double acc = 0.0;
  for (std::size_t k = 0; k < yA.size(); ++k) acc += yB[k] * (yABi[k] - yA[k]);
  return acc / static_cast<double>(yA.size()) / var;
}

/// mean((y_A - y_ABi)^2) / (2 Var).
inline double sobol_total(std::span<const double> yA, std::span<const double> yABi, double var) {
  detail::check(yA.size(), yABi.size(), var);
  double acc = 0.0;
  for (std::size_t k = 0; k < yA.size(); ++k) acc += (yA[k] - yABi[k]) * (yA[k] - yABi[k]);
  return acc / static_cast<double>(yA.size()) / (2.0 * var);
}

/// [mean(y_BAi y_ABj) - mean(y_A) mean(y_B)] / Var - S_i - S_j.
inline double sobol_second(std::span<const double> yA, std::span<const double> yB, std::span<const double> yABj,
                           std::span<const double> yBAi, double s_i, double s_j, double var) {
  if (yBAi.empty()) throw std::invalid_argument("Sobol second order: design has no BA blocks");
  detail::check(yA.size(), yB.size(), var);
  detail::check(yA.size(), yABj.size(), var);
  detail::check(yA.size(), yBAi.size(), var);
  double acc = 0.0;
  for (std::size_t k = 0; k < yA.size(); ++k) acc += yBAi[k] * yABj[k];
  const double n = static_cast<double>(yA.size());
  return (acc / n - stats::mean(yA) * stats::mean(yB)) / var - s_i - s_j;
}

struct SobolIndices {
  std::size_t dim = 0;
  double variance = 0.0;
  std::vector<double> first;   // S_i
  std::vector<double> total;   // S_T_i
  std::vector<double> second;  // S_ij, dim x dim row-major, upper triangle used; NaN elsewhere

  [[nodiscard]] double s2(std::size_t i, std::size_t j) const { return second[i * dim + j]; }
  [[nodiscard]] bool has_second() const { return !second.empty(); }
};

/// Splits model outputs (one per design row) into the A, B, AB_i, BA_i
/// blocks and applies the estimators. Var is taken over A and B together.
inline SobolIndices analyze_outputs(const SaltelliDesign& d, std::span<const double> y) {
  if (y.size() != d.n_rows()) throw std::invalid_argument("analyze: one output per design row expected");
  const std::size_t n = d.dim, D = d.base, blk = d.block();
  std::vector<double> yA(D), yB(D);
  std::vector<std::vector<double>> yAB(n, std::vector<double>(D)), yBA;
  if (d.second_order) yBA.assign(n, std::vector<double>(D));
  for (std::size_t j = 0; j < D; ++j) {
    const double* r = y.data() + j * blk;
    yA[j] = r[0];
    for (std::size_t i = 0; i < n; ++i) yAB[i][j] = r[1 + i];
    if (d.second_order)
      for (std::size_t i = 0; i < n; ++i) yBA[i][j] = r[1 + n + i];
    yB[j] = r[blk - 1];
  }
  std::vector<double> ab(yA);
  ab.insert(ab.end(), yB.begin(), yB.end());

  SobolIndices s;
  s.dim = n;
  s.variance = stats::variance(ab);
  for (std::size_t i = 0; i < n; ++i) {
    s.first.push_back(sobol_first(yA, yB, yAB[i], s.variance));
    s.total.push_back(sobol_total(yA, yAB[i], s.variance));
  }
  if (d.second_order) {
    s.second.assign(n * n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        s.second[i * n + j] = sobol_second(yA, yB, yAB[j], yBA[i], s.first[i], s.first[j], s.variance);
  }
  return s;
}

/// One row per index: output, step, index_type, i, j, value.
struct IndexRow {
  std::string output;
  int step = 0;
  std::string type;  // S1, S2, ST
  std::string i, j;
  double value = 0.0;
};

inline void append_rows(std::vector<IndexRow>& rows, const std::string& output, int step, const SobolIndices& s,
                        const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < s.dim; ++i) rows.push_back({output, step, "S1", names[i], "", s.first[i]});
  if (s.has_second())
    for (std::size_t i = 0; i < s.dim; ++i)
      for (std::size_t j = i + 1; j < s.dim; ++j) rows.push_back({output, step, "S2", names[i], names[j], s.s2(i, j)});
  for (std::size_t i = 0; i < s.dim; ++i) rows.push_back({output, step, "ST", names[i], "", s.total[i]});
}

inline void write_index_csv(const std::filesystem::path& path, const std::vector<IndexRow>& rows) {
  io::CsvWriter w(path);
  w.header({"output", "step", "index_type", "i", "j", "value"});
  for (const auto& r : rows)
    w.row({r.output, io::CsvWriter::num(r.step), r.type, r.i, r.j, io::CsvWriter::num(r.value)});
}

}  // namespace surmodel::sensitivity
