#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "surmodel/assimilation/mcmc.hpp"
#include "surmodel/assimilation/observations.hpp"
#include "surmodel/core/statistics.hpp"
#include "surmodel/core/types.hpp"
#include "surmodel/io/csv.hpp"
#include "surmodel/io/files.hpp"
#include "surmodel/surrogate/models.hpp"

namespace surmodel::assimilation {

/// 0 inside the closed cube, -inf outside.
inline double log_prior(const ParameterVector& p, const ParameterCube& cube) {
  return p.finite() && cube.contains(p) ? 0.0 : -std::numeric_limits<double>::infinity();
}

/// Gaussian log-likelihood without the normalizing constant; M0 predicted
/// as G * A_a * delta_S from the model.
template <surrogate::Surrogate M>
double log_likelihood(const ParameterVector& p, const ObservationSet& obs, const M& model, double shear_modulus) {
  const std::vector<ParameterVector> one{p};
  double ll = 0.0;
  for (std::size_t k = 0; k < obs.steps.size(); ++k) {
    const StateVector y = model.predict_batch(one, obs.steps[k]).front();
    const double r = (obs.m0[k] - shear_modulus * y.a_a * y.delta_s) / obs.sigma;
    ll -= 0.5 * r * r;
  }
  return ll;
}

inline State to_state(const ParameterVector& p) { return {p.tau0, p.phi, p.m2}; }
inline ParameterVector to_parameters(const State& s) { return {s[0], s[1], s[2]}; }

struct AssimilationConfig {
  std::size_t n_iterations = 5000;
  double scale_fraction = 0.05;  // proposal sd as a fraction of each prior range
  std::uint64_t seed = 0;
};

inline std::vector<double> default_scales(const ParameterCube& cube, double fraction) {
  return {fraction * cube.tau0.width(), fraction * cube.phi.width(), fraction * cube.m2.width()};
}

/// Posterior chain from the cube center.
template <surrogate::Surrogate M>
Chain assimilate(const ObservationSet& obs, const M& model, double shear_modulus, const ParameterCube& cube,
                 const AssimilationConfig& cfg) {
  auto logpost = [&](const State& s) {
    const ParameterVector p = to_parameters(s);
    const double lp = log_prior(p, cube);
    if (!std::isfinite(lp)) return lp;
    return lp + log_likelihood(p, obs, model, shear_modulus);
  };
  return run_chain(to_state(cube.center()), cfg.n_iterations, default_scales(cube, cfg.scale_fraction), cfg.seed,
                   logpost);
}

inline constexpr std::size_t kHistogramBins = 40;

struct MarginalSummary {
  std::string name;
  double lo = 0.0, hi = 0.0;  // histogram range (prior support)
  std::vector<std::size_t> counts;
  double mean = 0.0, median = 0.0, q25 = 0.0, q75 = 0.0, q025 = 0.0, q975 = 0.0;

  [[nodiscard]] double iqr() const { return q75 - q25; }
};

inline MarginalSummary summarize_marginal(const std::string& name, std::vector<double> v, const Interval& range) {
  if (v.empty()) throw std::invalid_argument("posterior summary of an empty chain");
  MarginalSummary m;
  m.name = name;
  m.lo = range.lo;
  m.hi = range.hi;
  m.counts.assign(kHistogramBins, 0);
  const double w = range.width() / static_cast<double>(kHistogramBins);
  for (double x : v) {
    auto b = w > 0.0 ? static_cast<long long>(std::floor((x - range.lo) / w)) : 0;
    b = std::clamp<long long>(b, 0, static_cast<long long>(kHistogramBins) - 1);
    ++m.counts[static_cast<std::size_t>(b)];
  }
  m.mean = stats::mean(v);
  std::sort(v.begin(), v.end());
  m.median = stats::quantile_sorted(v, 0.5);
  m.q25 = stats::quantile_sorted(v, 0.25);
  m.q75 = stats::quantile_sorted(v, 0.75);
  m.q025 = stats::quantile_sorted(v, 0.025);
  m.q975 = stats::quantile_sorted(v, 0.975);
  return m;
}

struct PosteriorSummary {
  std::array<MarginalSummary, 3> marginals;
  double acceptance_rate = 0.0;
  std::size_t n_samples = 0;
};

inline PosteriorSummary posterior_summary(const Chain& c, const ParameterCube& cube) {
  PosteriorSummary s;
  static const std::array<const char*, 3> names{"tau0_pa", "phi_deg", "m2"};
  for (std::size_t i = 0; i < 3; ++i) s.marginals[i] = summarize_marginal(names[i], c.marginal(i), cube.axis(i));
  s.acceptance_rate = c.acceptance_rate();
  s.n_samples = c.samples.size();
  return s;
}

inline io::Json to_json(const PosteriorSummary& s, const Chain& c) {
  io::Json j;
  j["n_iterations"] = c.n_iterations;
  j["burn_in"] = c.burn_in;
  j["n_samples"] = s.n_samples;
  j["seed"] = c.seed;
  j["proposal_scales"] = c.scales;
  j["acceptance_rate"] = s.acceptance_rate;
  j["warnings"] = c.warnings;
  io::Json params = io::Json::object();
  for (const auto& m : s.marginals)
    params[m.name] = {{"mean", m.mean}, {"median", m.median}, {"q25", m.q25},   {"q75", m.q75},
                      {"iqr", m.iqr()}, {"q025", m.q025},     {"q975", m.q975}, {"histogram_range", {m.lo, m.hi}},
                      {"histogram_counts", m.counts}};
  j["parameters"] = std::move(params);
  return j;
}

inline void write_chain_csv(const std::filesystem::path& path, const Chain& c) {
  io::CsvWriter w(path);
  w.header({"sample_index", "tau0_pa", "phi_deg", "m2", "log_posterior", "accepted"});
  using io::CsvWriter;
  for (std::size_t k = 0; k < c.samples.size(); ++k)
    w.row({CsvWriter::num(k), CsvWriter::num(c.samples[k][0]), CsvWriter::num(c.samples[k][1]),
           CsvWriter::num(c.samples[k][2]), CsvWriter::num(c.log_posterior[k]),
           CsvWriter::num(static_cast<int>(c.accepted[k]))});
}

/// Long-format histogram rows: parameter, bin_lo, bin_hi, count, density.
inline void write_histogram_csv(const std::filesystem::path& path, const PosteriorSummary& s) {
  io::CsvWriter w(path);
  w.header({"parameter", "bin_lo", "bin_hi", "count", "density"});
  using io::CsvWriter;
  for (const auto& m : s.marginals) {
    const double bw = (m.hi - m.lo) / static_cast<double>(m.counts.size());
    for (std::size_t b = 0; b < m.counts.size(); ++b) {
      const double dens = bw > 0.0 && s.n_samples
                              ? static_cast<double>(m.counts[b]) / (static_cast<double>(s.n_samples) * bw)
                              : 0.0;
      w.row({m.name, CsvWriter::num(m.lo + bw * static_cast<double>(b)),
             CsvWriter::num(m.lo + bw * static_cast<double>(b + 1)), CsvWriter::num(m.counts[b]), CsvWriter::num(dens)});
    }
  }
}

}  // namespace surmodel::assimilation
