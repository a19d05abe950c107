#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "surmodel/core/random.hpp"

namespace surmodel::assimilation {

using State = std::vector<double>;

struct StepResult {
  State next;
  double log_posterior = 0.0;
  bool accepted = false;
};

/// One random-walk Metropolis step with a diagonal Gaussian kernel. A
/// uniform variate is drawn on every step so the generator stream does not
/// depend on the outcome.
template <typename LogPost>
StepResult mh_step(const State& current, double current_lp, const std::vector<double>& scales, Rng& rng,
                   LogPost&& log_posterior) {
  if (scales.size() != current.size()) throw std::invalid_argument("mh_step: one scale per coordinate");
  State prop(current.size());
  for (std::size_t i = 0; i < current.size(); ++i) prop[i] = current[i] + scales[i] * standard_normal(rng);
  const double lp = log_posterior(prop);
  const double u = uniform01(rng);
  const bool accept = lp != -std::numeric_limits<double>::infinity() && std::log(u) < lp - current_lp;
  if (accept) return {std::move(prop), lp, true};
  return {current, current_lp, false};
}

struct Chain {
  std::vector<State> samples;  // post burn-in
  std::vector<double> log_posterior;
  std::vector<char> accepted;
  std::vector<double> scales;
  std::uint64_t seed = 0;
  std::size_t n_iterations = 0;
  std::size_t burn_in = 0;
  std::vector<std::string> warnings;

  [[nodiscard]] double acceptance_rate() const {
    if (accepted.empty()) return 0.0;
    std::size_t n = 0;
    for (char a : accepted) n += a ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(accepted.size());
  }

  /// Values of one coordinate.
  [[nodiscard]] std::vector<double> marginal(std::size_t i) const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s[i]);
    return out;
  }
};

inline constexpr double kBurnInFraction = 0.2;

/// n_iterations Metropolis steps from `start`; the first 20% are discarded.
template <typename LogPost>
Chain run_chain(const State& start, std::size_t n_iterations, const std::vector<double>& scales, std::uint64_t seed,
                LogPost&& log_posterior) {
  Chain c;
  c.scales = scales;
  c.seed = seed;
  c.n_iterations = n_iterations;
  c.burn_in = static_cast<std::size_t>(std::floor(kBurnInFraction * static_cast<double>(n_iterations)));
  Rng rng(seed);
  State cur = start;
  double lp = log_posterior(cur);
  if (!std::isfinite(lp)) throw std::invalid_argument("run_chain: start state has zero posterior density");
  c.samples.reserve(n_iterations - c.burn_in);
  for (std::size_t k = 0; k < n_iterations; ++k) {
    StepResult r = mh_step(cur, lp, scales, rng, log_posterior);
    cur = std::move(r.next);
    lp = r.log_posterior;
    if (k >= c.burn_in) {
      c.samples.push_back(cur);
      c.log_posterior.push_back(lp);
      c.accepted.push_back(r.accepted ? 1 : 0);
    }
  }
  const double rate = c.acceptance_rate();
  if (!c.accepted.empty() && (rate < 0.01 || rate > 0.99))
    c.warnings.push_back("acceptance rate " + std::to_string(rate) + " outside [0.01, 0.99]");
  return c;
}

}  // namespace surmodel::assimilation
