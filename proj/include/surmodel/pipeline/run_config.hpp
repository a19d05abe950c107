#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "surmodel/core/errors.hpp"
#include "surmodel/core/types.hpp"
#include "surmodel/io/files.hpp"
#include "surmodel/nn/train.hpp"
#include "surmodel/oracle/calibration.hpp"
#include "surmodel/oracle/config.hpp"

namespace surmodel::pipeline {

namespace fs = std::filesystem;
using io::Json;

inline constexpr double kPaPerMPa = 1.0e6;

/// One network family: uniform hidden block plus training overrides.
struct NetConfig {
  std::size_t layers = 8;
  std::size_t width = 76;
  nn::Activation hidden = nn::Activation::ReLU;
  nn::Activation output = nn::Activation::Softplus;
  std::size_t batch_size = 32;
  std::optional<std::size_t> max_epochs;
  std::optional<std::size_t> patience;

  [[nodiscard]] nn::NetworkSpec spec(std::size_t n0, std::size_t n_out) const {
    return nn::NetworkSpec::uniform(n0, layers, width, n_out, hidden, output);
  }
};

struct RunConfig {
  fs::path base_dir;  // relative paths resolve against this
  std::optional<std::uint64_t> seed;
  fs::path output_dir = "runs/default";
  std::optional<fs::path> oracle_config;
  ParameterCube cube;

  std::string design = "gauss";  // gauss | mc
  std::size_t n_p = 125;

  nn::TrainConfig train;
  NetConfig baseline{8, 76, nn::Activation::ReLU, nn::Activation::Softplus, 32, {}, {}};
  NetConfig classifier{16, 84, nn::Activation::Tanh, nn::Activation::Sigmoid, 32, {}, {}};
  NetConfig surmodel2{8, 76, nn::Activation::ReLU, nn::Activation::Softplus, 32, {}, {}};
  NetConfig pair{4, 38, nn::Activation::ReLU, nn::Activation::Softplus, 16, {}, {}};
  std::size_t search_budget = 0;  // > 0 replaces the fixed baseline spec by a random search
  double threshold = 0.5;

  std::size_t eval_n_mc = 125;
  std::vector<std::size_t> np_subsets{125, 100, 75, 50};
  std::size_t eval_repeats = 1;

  std::size_t sobol_base = 4096;
  bool sobol_second_order = true;
  bool sobol_scramble = false;
  std::string sobol_model = "surmodel2";

  ParameterVector truth{9.2e4, 27.1, 0.45};
  double sigma = 5.0e9;
  std::size_t mcmc_iterations = 5000;
  std::vector<int> windows{5, 10};
  double scale_fraction = 0.05;
  std::string assim_model = "surmodel2";
  std::string likelihood = "surrogate";  // surrogate | oracle

  oracle::CalibrationCandidates candidates;

  Json source;  // effective config, for fingerprints

  [[nodiscard]] fs::path resolve(const fs::path& p) const { return p.is_absolute() ? p : base_dir / p; }

  [[nodiscard]] std::uint64_t require_seed() const {
    if (!seed) throw ConfigError("this subcommand needs a \"seed\" in the run config");
    return *seed;
  }

  [[nodiscard]] oracle::OracleConfig load_oracle() const {
    if (!oracle_config) return oracle::OracleConfig{};
    const fs::path p = resolve(*oracle_config);
    if (!fs::exists(p)) throw MissingArtifact(p.string());
    return oracle::load_oracle_config(p);
  }

  /// Training settings for one network family.
  [[nodiscard]] nn::TrainConfig train_config(const NetConfig& net, std::uint64_t seed_value) const {
    nn::TrainConfig c = train;
    c.batch_size = net.batch_size;
    if (net.max_epochs) c.max_epochs = *net.max_epochs;
    if (net.patience) c.patience = *net.patience;
    c.seed = seed_value;
    return c;
  }

  /// Hash of the effective configuration without the output directory.
  [[nodiscard]] std::string fingerprint() const {
    Json j = source;
    j.erase("output_dir");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
    return buf;
  }
};

namespace detail {

inline void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <typename T>
void get(const Json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

inline Interval interval(const Json& j, const std::string& where, double scale = 1.0) {
  std::vector<double> v;
  try {
    v = j.get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
  if (v.size() != 2 || !(v[0] <= v[1])) throw ConfigError(where + " must be [lo, hi] with lo <= hi");
  return {v[0] * scale, v[1] * scale};
}

inline void net(const Json& j, NetConfig& n, const std::string& where) {
  check_keys(j, {"layers", "width", "hidden", "output", "batch_size", "max_epochs", "patience"}, where);
  get(j, "layers", n.layers, where);
  get(j, "width", n.width, where);
  try {
    if (j.contains("hidden")) n.hidden = nn::parse_activation(j.at("hidden").get<std::string>());
    if (j.contains("output")) n.output = nn::parse_activation(j.at("output").get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
  get(j, "batch_size", n.batch_size, where);
  std::size_t v = 0;
  if (j.contains("max_epochs")) {
    get(j, "max_epochs", v, where);
    n.max_epochs = v;
  }
  if (j.contains("patience")) {
    get(j, "patience", v, where);
    n.patience = v;
  }
  if (n.width < 1 || n.batch_size < 1) throw ConfigError(where + ": width and batch_size must be >= 1");
}

inline void one_of(const std::string& v, std::initializer_list<const char*> options, const std::string& where) {
  for (const char* o : options)
    if (v == o) return;
  throw ConfigError(where + ": unsupported value '" + v + "'");
}

}  // namespace detail

/// Parses a run config; `base_dir` anchors relative paths.
inline RunConfig run_config_from_json(const Json& j, const fs::path& base_dir) {
  using detail::get;
  detail::check_keys(j,
                     {"seed", "output_dir", "oracle_config", "cube", "dataset", "train", "baseline", "classifier",
                      "surmodel2", "pair", "evaluate", "sensitivity", "assimilate", "calibrate"},
                     "run config");
  RunConfig c;
  c.base_dir = base_dir;
  c.source = j;
  if (j.contains("seed")) {
    try {
      c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const Json::exception& e) {
      throw ConfigError(std::string("seed: ") + e.what());
    }
  }
  std::string path;
  get(j, "output_dir", path, "run config");
  if (!path.empty()) c.output_dir = path;
  if (j.contains("oracle_config")) {
    path.clear();
    get(j, "oracle_config", path, "run config");
    c.oracle_config = fs::path(path);
  }

  if (j.contains("cube")) {
    const Json& q = j.at("cube");
    detail::check_keys(q, {"tau0_mpa", "phi_deg", "m2"}, "cube");
    if (q.contains("tau0_mpa")) c.cube.tau0 = detail::interval(q.at("tau0_mpa"), "cube.tau0_mpa", kPaPerMPa);
    if (q.contains("phi_deg")) c.cube.phi = detail::interval(q.at("phi_deg"), "cube.phi_deg");
    if (q.contains("m2")) c.cube.m2 = detail::interval(q.at("m2"), "cube.m2");
  }
  if (j.contains("dataset")) {
    const Json& q = j.at("dataset");
    detail::check_keys(q, {"design", "n_p"}, "dataset");
    get(q, "design", c.design, "dataset");
    get(q, "n_p", c.n_p, "dataset");
    detail::one_of(c.design, {"gauss", "mc"}, "dataset.design");
  }
  if (j.contains("train")) {
    const Json& q = j.at("train");
    detail::check_keys(q, {"learning_rate", "batch_size", "max_epochs", "patience", "search_budget", "threshold"},
                       "train");
    get(q, "learning_rate", c.train.adam.learning_rate, "train");
    get(q, "batch_size", c.train.batch_size, "train");
    get(q, "max_epochs", c.train.max_epochs, "train");
    get(q, "patience", c.train.patience, "train");
    get(q, "search_budget", c.search_budget, "train");
    get(q, "threshold", c.threshold, "train");
    c.baseline.batch_size = c.surmodel2.batch_size = c.classifier.batch_size = c.train.batch_size;
  }
  if (j.contains("baseline")) detail::net(j.at("baseline"), c.baseline, "baseline");
  if (j.contains("classifier")) detail::net(j.at("classifier"), c.classifier, "classifier");
  if (j.contains("surmodel2")) detail::net(j.at("surmodel2"), c.surmodel2, "surmodel2");
  if (j.contains("pair")) detail::net(j.at("pair"), c.pair, "pair");
  if (j.contains("evaluate")) {
    const Json& q = j.at("evaluate");
    detail::check_keys(q, {"n_mc", "np_subsets", "repeats"}, "evaluate");
    get(q, "n_mc", c.eval_n_mc, "evaluate");
    get(q, "np_subsets", c.np_subsets, "evaluate");
    get(q, "repeats", c.eval_repeats, "evaluate");
    if (c.eval_repeats < 1) throw ConfigError("evaluate.repeats must be >= 1");
  }
  if (j.contains("sensitivity")) {
    const Json& q = j.at("sensitivity");
    detail::check_keys(q, {"base_count", "second_order", "scramble", "model"}, "sensitivity");
    get(q, "base_count", c.sobol_base, "sensitivity");
    get(q, "second_order", c.sobol_second_order, "sensitivity");
    get(q, "scramble", c.sobol_scramble, "sensitivity");
    get(q, "model", c.sobol_model, "sensitivity");
    detail::one_of(c.sobol_model, {"baseline", "surmodel2", "pair", "oracle"}, "sensitivity.model");
  }
  if (j.contains("assimilate")) {
    const Json& q = j.at("assimilate");
    detail::check_keys(q, {"truth", "sigma_nm", "n_iterations", "windows", "scale_fraction", "model", "likelihood"},
                       "assimilate");
    if (q.contains("truth")) {
      const Json& t = q.at("truth");
      detail::check_keys(t, {"tau0_mpa", "phi_deg", "m2"}, "assimilate.truth");
      double tau_mpa = c.truth.tau0 / kPaPerMPa;
      get(t, "tau0_mpa", tau_mpa, "assimilate.truth");
      c.truth.tau0 = tau_mpa * kPaPerMPa;
      get(t, "phi_deg", c.truth.phi, "assimilate.truth");
      get(t, "m2", c.truth.m2, "assimilate.truth");
    }
    get(q, "sigma_nm", c.sigma, "assimilate");
    get(q, "n_iterations", c.mcmc_iterations, "assimilate");
    get(q, "windows", c.windows, "assimilate");
    get(q, "scale_fraction", c.scale_fraction, "assimilate");
    get(q, "model", c.assim_model, "assimilate");
    get(q, "likelihood", c.likelihood, "assimilate");
    detail::one_of(c.assim_model, {"baseline", "surmodel2", "pair"}, "assimilate.model");
    detail::one_of(c.likelihood, {"surrogate", "oracle"}, "assimilate.likelihood");
    if (!(c.sigma > 0.0)) throw ConfigError("assimilate.sigma_nm must be > 0");
  }
  if (j.contains("calibrate")) {
    const Json& q = j.at("calibrate");
    detail::check_keys(q,
                       {"shear_load_coeff", "normal_unload_coeff", "patch_shear_stiffness", "decay_length",
                        "pressure_cap", "vertical_stress_gradient", "storativity"},
                       "calibrate");
    auto& k = c.candidates;
    get(q, "shear_load_coeff", k.shear_load_coeff, "calibrate");
    get(q, "normal_unload_coeff", k.normal_unload_coeff, "calibrate");
    get(q, "patch_shear_stiffness", k.patch_shear_stiffness, "calibrate");
    get(q, "decay_length", k.decay_length, "calibrate");
    get(q, "pressure_cap", k.pressure_cap, "calibrate");
    get(q, "vertical_stress_gradient", k.vertical_stress_gradient, "calibrate");
    get(q, "storativity", k.storativity, "calibrate");
    if (k.size() == 0) throw ConfigError("calibrate: every candidate list needs at least one value");
  }
  c.train.validate();
  for (int w : c.windows)
    if (w < 1) throw ConfigError("assimilate.windows entries must be >= 1");
  if (c.n_p < 10) throw ConfigError("dataset.n_p must be >= 10");
  return c;
}

inline RunConfig load_run_config(const fs::path& path) {
  if (!fs::exists(path)) throw MissingArtifact(path.string());
  Json j;
  try {
    j = io::read_json(path);
  } catch (const FormatError& e) {
    throw ConfigError(e.what());
  }
  return run_config_from_json(j, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

}  // namespace surmodel::pipeline
