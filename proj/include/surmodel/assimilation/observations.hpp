#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "surmodel/core/random.hpp"
#include "surmodel/core/types.hpp"
#include "surmodel/io/csv.hpp"
#include "surmodel/oracle/fault_model.hpp"

namespace surmodel::assimilation {

inline constexpr double kDefaultNoiseSigma = 5.0e9;  // N m

struct ObservationSet {
  std::vector<int> steps;
  std::vector<double> m0;         // noisy seismic moments, N m
  std::vector<double> noiseless;  // oracle M0 at the truth
  double sigma = kDefaultNoiseSigma;
  ParameterVector truth;

  /// The observations restricted to steps <= last_step.
  [[nodiscard]] ObservationSet window(int last_step) const {
    ObservationSet w;
    w.sigma = sigma;
    w.truth = truth;
    for (std::size_t k = 0; k < steps.size(); ++k)
      if (steps[k] <= last_step) {
        w.steps.push_back(steps[k]);
        w.m0.push_back(m0[k]);
        if (k < noiseless.size()) w.noiseless.push_back(noiseless[k]);
      }
    return w;
  }
};

/// Oracle seismic moments at the truth plus i.i.d. Gaussian noise drawn in
/// step order, so a shorter window is a prefix of a longer one.
inline ObservationSet synthesize_observations(const ParameterVector& truth, const std::vector<int>& steps,
                                              double sigma, const oracle::FaultModel& model, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  ObservationSet o;
  o.steps = steps;
  o.sigma = sigma;
  o.truth = truth;
  Rng rng(seed);
  for (int t : steps) {
    const double clean = model.seismic_moment(model.evaluate(truth, t));
    o.noiseless.push_back(clean);
    o.m0.push_back(clean + sigma * standard_normal(rng));
  }
  return o;
}

inline void write_observations_csv(const std::filesystem::path& path, const ObservationSet& o) {
  io::CsvWriter w(path);
  w.header({"step", "m0_nm", "m0_noiseless_nm", "sigma_nm"});
  for (std::size_t k = 0; k < o.steps.size(); ++k)
    w.row({io::CsvWriter::num(o.steps[k]), io::CsvWriter::num(o.m0[k]), io::CsvWriter::num(o.noiseless[k]),
           io::CsvWriter::num(o.sigma)});
}

}  // namespace surmodel::assimilation
