#pragma once

#include <optional>
#include <string>
#include <vector>

#include "surmodel/sensitivity/indices.hpp"
#include "surmodel/surrogate/models.hpp"

namespace surmodel::sensitivity {

inline const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> n{"tau0", "phi", "m2"};
  return n;
}

struct StepIndices {
  int step = 0;
  std::optional<SobolIndices> a_a;      // empty when the output has zero variance
  std::optional<SobolIndices> delta_s;
};

struct SensitivityReport {
  std::vector<StepIndices> steps;
  std::vector<IndexRow> rows;
  std::vector<std::string> notes;
};

/// Runs the design through the model at every step and estimates the
/// indices of both outputs.
template <surrogate::Surrogate M>
SensitivityReport analyze(const M& model, const SaltelliDesign& design, int n_steps) {
  const auto pvs = parameter_rows(design);
  SensitivityReport rep;
  for (int t = 1; t <= n_steps; ++t) {
    const auto ys = model.predict_batch(pvs, t);
    std::vector<double> a(ys.size()), d(ys.size());
    for (std::size_t k = 0; k < ys.size(); ++k) {
      a[k] = ys[k].a_a;
      d[k] = ys[k].delta_s;
    }
    StepIndices si;
    si.step = t;
    auto run = [&](const std::vector<double>& y, const char* name, std::optional<SobolIndices>& slot) {
      try {
        slot = analyze_outputs(design, y);
        append_rows(rep.rows, name, t, *slot, parameter_names());
      } catch (const std::invalid_argument& e) {
        rep.notes.push_back(std::string(name) + " step " + std::to_string(t) + ": " + e.what());
      }
    };
    run(a, "a_a", si.a_a);
    run(d, "delta_s", si.delta_s);
    rep.steps.push_back(std::move(si));
  }
  return rep;
}

}  // namespace surmodel::sensitivity
