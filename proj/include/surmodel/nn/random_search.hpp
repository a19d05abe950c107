#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "surmodel/core/parallel.hpp"
#include "surmodel/core/random.hpp"
#include "surmodel/nn/train.hpp"

namespace surmodel::nn {

struct HyperparameterSpace {
  std::vector<std::size_t> layers{4, 8, 12, 16, 20, 24, 28, 32, 36, 40};
  std::vector<std::size_t> widths{4, 12, 20, 28, 36, 44, 52, 60, 68, 76, 84, 92, 100};
  std::vector<Activation> hidden{Activation::ReLU, Activation::Tanh, Activation::Softplus};
  std::vector<Activation> output{Activation::ReLU, Activation::Softplus};

  void validate() const {
    if (layers.empty() || widths.empty() || hidden.empty() || output.empty())
      throw ConfigError("hyperparameter space has an empty axis");
  }
};

struct SearchArm {
  NetworkSpec spec;
  double val_loss = 0.0;
  std::size_t epochs = 0;
};

struct SearchResult {
  std::vector<SearchArm> arms;  // in sampling order
  std::size_t best = 0;
  TrainResult best_run;
};

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[static_cast<std::size_t>(rng() % v.size())];
}

/// Samples `budget` specs uniformly from the product space (one width and
/// activation shared by all hidden layers), trains each and keeps the one
/// with the lowest validation loss, ties going to the smaller network.
inline SearchResult random_search(const HyperparameterSpace& space, std::size_t budget, std::size_t n0,
                                  std::size_t n_out, const TrainData& train_set, const TrainData& val_set,
                                  const TrainConfig& cfg) {
  space.validate();
  if (budget < 1) throw ConfigError("search budget must be >= 1");
  Rng rng(derive_seed(cfg.seed, "search"));
  std::vector<NetworkSpec> specs;
  for (std::size_t k = 0; k < budget; ++k) {
    const std::size_t L = pick(space.layers, rng);
    const std::size_t w = pick(space.widths, rng);
    const Activation h = pick(space.hidden, rng);
    const Activation o = pick(space.output, rng);
    specs.push_back(NetworkSpec::uniform(n0, L, w, n_out, h, o));
  }
  std::vector<TrainResult> runs(budget);
  parallel_for(budget, [&](std::size_t k) {
    TrainConfig c = cfg;
    c.seed = derive_seed(cfg.seed, "arm" + std::to_string(k));
    runs[k] = train(specs[k], train_set, val_set, c);
  });
  SearchResult out;
  for (std::size_t k = 0; k < budget; ++k) {
    out.arms.push_back({specs[k], runs[k].best_val_loss, runs[k].val_loss.size()});
    const auto& cur = out.arms[k];
    const auto& inc = out.arms[out.best];
    if (cur.val_loss < inc.val_loss ||
        (cur.val_loss == inc.val_loss && cur.spec.parameter_count() < inc.spec.parameter_count()))
      out.best = k;
  }
  out.best_run = std::move(runs[out.best]);
  return out;
}

}  // namespace surmodel::nn
