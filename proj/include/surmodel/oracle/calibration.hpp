#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

#include "surmodel/core/parallel.hpp"
#include "surmodel/core/types.hpp"
#include "surmodel/dataset/design.hpp"
#include "surmodel/io/files.hpp"
#include "surmodel/oracle/config.hpp"
#include "surmodel/oracle/fault_model.hpp"

namespace surmodel::oracle {

/// Candidate values per calibrated constant, preferred value first.
struct CalibrationCandidates {
  std::vector<double> shear_load_coeff{0.9, 0.75, 1.0, 0.6};
  std::vector<double> normal_unload_coeff{1.22, 1.15, 1.3, 1.4};
  std::vector<double> patch_shear_stiffness{1.0e9};
  std::vector<double> decay_length{45.0, 50.0, 40.0};
  std::vector<double> pressure_cap{3.0e6};
  std::vector<double> vertical_stress_gradient{4.0e3, 6.0e3};
  std::vector<double> storativity{1.0e-2, 5.0e-3};

  [[nodiscard]] std::size_t size() const {
    return shear_load_coeff.size() * normal_unload_coeff.size() * patch_shear_stiffness.size() *
           decay_length.size() * pressure_cap.size() * vertical_stress_gradient.size() *
           storativity.size();
  }
};

struct PhenomenologyReport {
  std::size_t n_points = 0;
  std::size_t active_at_t1 = 0;      // points with A_a(t1) > 0
  std::size_t active_by_t5 = 0;      // points with A_a > 0 at some t <= 5
  std::size_t opened = 0;            // points with F_o = 1
  int first_open_step = 0;           // earliest step with an Open patch, 0 if none
  std::size_t opened_and_decreasing = 0;  // F_o = 1 and A_a(t+1) < A_a(t) after opening

  [[nodiscard]] double fraction_active_by_t5() const {
    return n_points ? static_cast<double>(active_by_t5) / static_cast<double>(n_points) : 0.0;
  }
  [[nodiscard]] double fraction_opened() const {
    return n_points ? static_cast<double>(opened) / static_cast<double>(n_points) : 0.0;
  }
  [[nodiscard]] bool inactive_first_step() const { return active_at_t1 == 0; }
  [[nodiscard]] bool mostly_active_by_t5() const { return fraction_active_by_t5() >= 0.5; }
  [[nodiscard]] bool opening_fraction_ok() const {
    return fraction_opened() >= 0.10 && fraction_opened() <= 0.60;
  }
  [[nodiscard]] bool late_opening() const { return first_open_step == 0 || first_open_step >= 5; }
  [[nodiscard]] bool passed() const {
    return inactive_first_step() && mostly_active_by_t5() && opening_fraction_ok() && late_opening();
  }
};

inline PhenomenologyReport assess(const FaultModel& model, const std::vector<ParameterVector>& pvs) {
  std::vector<SeriesResult> series(pvs.size());
  parallel_for(pvs.size(), [&](std::size_t n) { series[n] = model.run_series(pvs[n]); });

  PhenomenologyReport r;
  r.n_points = pvs.size();
  for (const auto& s : series) {
    if (s.states.front().a_a > 0.0) ++r.active_at_t1;
    const std::size_t upto = std::min<std::size_t>(5, s.states.size());
    for (std::size_t i = 0; i < upto; ++i)
      if (s.states[i].a_a > 0.0) {
        ++r.active_by_t5;
        break;
      }
    if (!s.opened) continue;
    ++r.opened;
    std::size_t first = 0;
    while (s.open_patches[first] == 0) ++first;
    const int step = static_cast<int>(first + 1);
    if (r.first_open_step == 0 || step < r.first_open_step) r.first_open_step = step;
    for (std::size_t i = first; i + 1 < s.states.size(); ++i)
      if (s.states[i + 1].a_a < s.states[i].a_a) {
        ++r.opened_and_decreasing;
        break;
      }
  }
  return r;
}

inline io::Json to_json(const PhenomenologyReport& r) {
  return io::Json{{"n_points", r.n_points},
                  {"active_at_t1", r.active_at_t1},
                  {"fraction_active_by_t5", r.fraction_active_by_t5()},
                  {"fraction_opened", r.fraction_opened()},
                  {"first_open_step", r.first_open_step},
                  {"opened_and_decreasing", r.opened_and_decreasing},
                  {"criteria",
                   {{"inactive_at_t1", r.inactive_first_step()},
                    {"active_by_t5_at_least_half", r.mostly_active_by_t5()},
                    {"opening_fraction_in_range", r.opening_fraction_ok()},
                    {"first_opening_not_before_t5", r.late_opening()}}},
                  {"passed", r.passed()}};
}

struct CalibrationResult {
  bool success = false;
  OracleConfig config;
  PhenomenologyReport report;
  std::size_t tried = 0;
  std::vector<io::Json> trials;  // constants + report per tried set
};

/// Sweeps the candidate sets in order (first list varies slowest) and stops
/// at the first set that passes all four phenomenology criteria on the
/// Gauss grid of `cube`.
inline CalibrationResult calibrate(const OracleConfig& base, const CalibrationCandidates& cand,
                                   const ParameterCube& cube = {}) {
  const auto grid = dataset::tensor_grid(cube);
  CalibrationResult out;
  for (double c_tau : cand.shear_load_coeff)
    for (double c_n : cand.normal_unload_coeff)
      for (double k_s : cand.patch_shear_stiffness)
        for (double lambda : cand.decay_length)
          for (double cap : cand.pressure_cap)
            for (double gamma_v : cand.vertical_stress_gradient)
              for (double stor : cand.storativity) {
                OracleConfig cfg = base;
                cfg.shear_load_coeff = c_tau;
                cfg.normal_unload_coeff = c_n;
                cfg.patch_shear_stiffness = k_s;
                cfg.decay_length = lambda;
                cfg.pressure_cap = cap;
                cfg.vertical_stress_gradient = gamma_v;
                cfg.storativity = stor;
                const PhenomenologyReport rep = assess(FaultModel(cfg), grid);
                ++out.tried;
                out.trials.push_back(io::Json{{"shear_load_coeff", c_tau},
                                              {"normal_unload_coeff", c_n},
                                              {"patch_shear_stiffness", k_s},
                                              {"decay_length", lambda},
                                              {"pressure_cap", cap},
                                              {"vertical_stress_gradient", gamma_v},
                                              {"storativity", stor},
                                              {"report", to_json(rep)}});
                if (rep.passed()) {
                  out.success = true;
                  out.config = cfg;
                  out.report = rep;
                  return out;
                }
              }
  return out;
}

}  // namespace surmodel::oracle
