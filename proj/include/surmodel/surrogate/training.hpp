#pragma once

#include <string>
#include <vector>

#include "surmodel/core/errors.hpp"
#include "surmodel/dataset/dataset.hpp"
#include "surmodel/nn/train.hpp"
#include "surmodel/surrogate/models.hpp"

namespace surmodel::surrogate {

/// Minimum number of samples each partition of the pair must have.
inline constexpr std::size_t kMinPartitionSamples = 50;

/// Regression design matrix; `extra` (one value per sample) becomes a fifth
/// input when given.
inline nn::TrainData regression_data(const std::vector<dataset::Sample>& samples, const Normalization& norm,
                                     const std::vector<double>* extra = nullptr) {
  nn::TrainData d;
  const auto n = static_cast<Eigen::Index>(samples.size());
  d.X.resize(extra ? 5 : 4, n);
  d.Y.resize(2, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto& s = samples[static_cast<std::size_t>(c)];
    const auto x = dataset::base_inputs(s);
    for (std::size_t i = 0; i < x.size(); ++i)
      d.X(static_cast<Eigen::Index>(i), c) = norm.normalize_input(i, x[i]);
    if (extra) d.X(4, c) = (*extra)[static_cast<std::size_t>(c)];
    d.Y(0, c) = norm.normalize_output(0, s.y.a_a);
    d.Y(1, c) = norm.normalize_output(1, s.y.delta_s);
  }
  return d;
}

/// Classifier design: (tau0, phi, m2) per sample with the trajectory label.
inline nn::TrainData classifier_data(const std::vector<dataset::Sample>& samples, const Normalization& norm) {
  nn::TrainData d;
  const auto n = static_cast<Eigen::Index>(samples.size());
  d.X.resize(3, n);
  d.Y.resize(1, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto& s = samples[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < 3; ++i) d.X(static_cast<Eigen::Index>(i), c) = norm.normalize_input(i, s.p[i]);
    d.Y(0, c) = s.f_o;
  }
  return d;
}

inline Normalization classifier_normalization(const Normalization& n) {
  Normalization c;
  c.input_min.assign(n.input_min.begin(), n.input_min.begin() + 3);
  c.input_max.assign(n.input_max.begin(), n.input_max.begin() + 3);
  return c;
}

inline std::vector<ParameterVector> parameters_of(const std::vector<dataset::Sample>& samples) {
  std::vector<ParameterVector> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.p);
  return out;
}

template <typename Model>
struct Trained {
  Model model;
  nn::TrainResult run;
};

inline nn::ModelFile wrap(std::string role, const nn::TrainResult& run, Normalization norm, std::uint64_t seed) {
  return nn::ModelFile{std::move(role), run.network, std::move(norm), seed};
}

inline Trained<SurrogateBaseline> train_baseline(const dataset::SplitDataset& ds, const nn::NetworkSpec& spec,
                                                 const nn::TrainConfig& cfg) {
  if (spec.n0 != 4 || spec.n_out() != 2) throw ConfigError("baseline network must be 4 -> 2");
  const auto& norm = ds.normalization;
  auto run = nn::train(spec, regression_data(ds.train, norm), regression_data(ds.validation, norm), cfg);
  SurrogateBaseline m{wrap("baseline", run, norm, cfg.seed)};
  return {std::move(m), std::move(run)};
}

inline Trained<ModelClass> train_classifier(const dataset::SplitDataset& ds, const nn::NetworkSpec& spec,
                                            nn::TrainConfig cfg, double threshold = 0.5) {
  if (spec.n0 != 3 || spec.n_out() != 1 || spec.output != nn::Activation::Sigmoid)
    throw ConfigError("classifier network must be 3 -> 1 with a sigmoid head");
  cfg.loss = nn::Loss::BCE;
  const auto norm = classifier_normalization(ds.normalization);
  auto run = nn::train(spec, classifier_data(ds.train, norm), classifier_data(ds.validation, norm), cfg);
  ModelClass m{wrap("classifier", run, norm, cfg.seed), threshold};
  return {std::move(m), std::move(run)};
}

/// Labels from the classifier (not the oracle) feed the fifth input, both in
/// training and in validation.
inline Trained<SurrogateII> train_surrogate_ii(const dataset::SplitDataset& ds, const ModelClass& classifier,
                                               const nn::NetworkSpec& spec, const nn::TrainConfig& cfg) {
  if (spec.n0 != 5 || spec.n_out() != 2) throw ConfigError("SurMoDeL II network must be 5 -> 2");
  auto labels = [&](const std::vector<dataset::Sample>& s) {
    std::vector<double> out;
    for (int f : classifier.classify_batch(parameters_of(s))) out.push_back(f);
    return out;
  };
  const auto lt = labels(ds.train), lv = labels(ds.validation);
  Normalization norm = ds.normalization;
  norm.input_min.push_back(0.0);
  norm.input_max.push_back(1.0);
  auto run = nn::train(spec, regression_data(ds.train, norm, &lt), regression_data(ds.validation, norm, &lv), cfg);
  SurrogateII m{wrap("surmodel2", run, norm, cfg.seed), classifier};
  return {std::move(m), std::move(run)};
}

struct TrainedPair {
  SurrogatePair model;
  nn::TrainResult run0, run1;
};

/// Partitions by the oracle opening label; each half trains its own net.
inline TrainedPair train_pair(const dataset::SplitDataset& ds, const ModelClass& classifier,
                              const nn::NetworkSpec& spec, const nn::TrainConfig& cfg) {
  if (spec.n0 != 4 || spec.n_out() != 2) throw ConfigError("pair networks must be 4 -> 2");
  auto part = [](const std::vector<dataset::Sample>& v, int label) {
    std::vector<dataset::Sample> out;
    for (const auto& s : v)
      if (s.f_o == label) out.push_back(s);
    return out;
  };
  const auto t0 = part(ds.train, 0), t1 = part(ds.train, 1);
  if (t0.size() < kMinPartitionSamples || t1.size() < kMinPartitionSamples)
    throw ConfigError("pair training needs >= " + std::to_string(kMinPartitionSamples) +
                      " samples per opening class; got " + std::to_string(t0.size()) + " (F_o=0) and " +
                      std::to_string(t1.size()) + " (F_o=1)");
  const auto& norm = ds.normalization;
  nn::TrainConfig c0 = cfg, c1 = cfg;
  c0.seed = derive_seed(cfg.seed, "pair0");
  c1.seed = derive_seed(cfg.seed, "pair1");
  auto r0 = nn::train(spec, regression_data(t0, norm), regression_data(part(ds.validation, 0), norm), c0);
  auto r1 = nn::train(spec, regression_data(t1, norm), regression_data(part(ds.validation, 1), norm), c1);
  SurrogatePair m{wrap("pair0", r0, norm, c0.seed), wrap("pair1", r1, norm, c1.seed), classifier};
  return {std::move(m), std::move(r0), std::move(r1)};
}

}  // namespace surmodel::surrogate
