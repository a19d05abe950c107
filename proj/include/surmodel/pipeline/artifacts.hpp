#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "surmodel/core/errors.hpp"
#include "surmodel/dataset/dataset.hpp"
#include "surmodel/io/csv.hpp"
#include "surmodel/nn/model_io.hpp"
#include "surmodel/oracle/config.hpp"
#include "surmodel/pipeline/run_config.hpp"
#include "surmodel/surrogate/models.hpp"

namespace surmodel::pipeline {

/// Fixed layout of a run directory.
struct RunLayout {
  fs::path root;

  [[nodiscard]] fs::path calibrate() const { return root / "calibrate"; }
  [[nodiscard]] fs::path dataset() const { return root / "dataset"; }
  [[nodiscard]] fs::path models() const { return root / "models"; }
  [[nodiscard]] fs::path evaluate() const { return root / "evaluate"; }
  [[nodiscard]] fs::path sensitivity() const { return root / "sensitivity"; }
  [[nodiscard]] fs::path assimilate() const { return root / "assimilate"; }
  [[nodiscard]] fs::path plotdata() const { return root / "plotdata"; }

  [[nodiscard]] fs::path dataset_csv() const { return dataset() / "dataset.csv"; }
  [[nodiscard]] fs::path dataset_json() const { return dataset() / "dataset.json"; }
  [[nodiscard]] fs::path dataset_oracle() const { return dataset() / "oracle_config.json"; }
  [[nodiscard]] fs::path model(const std::string& name) const { return models() / (name + ".json"); }
  [[nodiscard]] fs::path history(const std::string& name) const { return models() / (name + "_history.csv"); }
};

inline void require(const fs::path& p) {
  if (!fs::exists(p)) throw MissingArtifact(p.string());
}

inline dataset::SplitDataset load_run_dataset(const RunLayout& L) {
  require(L.dataset_csv());
  require(L.dataset_json());
  return dataset::load_dataset(L.dataset_csv(), L.dataset_json());
}

/// The oracle that produced the dataset of this run.
inline oracle::OracleConfig load_run_oracle(const RunLayout& L) {
  require(L.dataset_oracle());
  return oracle::load_oracle_config(L.dataset_oracle());
}

inline nn::ModelFile load_run_model(const RunLayout& L, const std::string& name) {
  require(L.model(name));
  return nn::load_model(L.model(name));
}

inline surrogate::ModelClass load_classifier(const RunLayout& L, const RunConfig& c) {
  return {load_run_model(L, "classifier"), c.threshold};
}

inline surrogate::SurrogateBaseline load_baseline(const RunLayout& L) { return {load_run_model(L, "baseline")}; }

inline surrogate::SurrogateII load_surmodel2(const RunLayout& L, const RunConfig& c) {
  return {load_run_model(L, "surmodel2"), load_classifier(L, c)};
}

inline surrogate::SurrogatePair load_pair(const RunLayout& L, const RunConfig& c) {
  return {load_run_model(L, "pair0"), load_run_model(L, "pair1"), load_classifier(L, c)};
}

/// Artifact files behind a named surrogate, for manifests.
inline std::vector<fs::path> model_files(const RunLayout& L, const std::string& name) {
  if (name == "baseline") return {L.model("baseline")};
  if (name == "surmodel2") return {L.model("surmodel2"), L.model("classifier")};
  if (name == "pair") return {L.model("pair0"), L.model("pair1"), L.model("classifier")};
  return {};
}

/// Calls fn with the named surrogate loaded.
template <typename Fn>
decltype(auto) with_surrogate(const RunLayout& L, const RunConfig& c, const std::string& name, Fn&& fn) {
  if (name == "baseline") return fn(load_baseline(L));
  if (name == "surmodel2") return fn(load_surmodel2(L, c));
  if (name == "pair") return fn(load_pair(L, c));
  throw ConfigError("unknown surrogate '" + name + "'");
}

inline void write_history_csv(const fs::path& path, const nn::TrainResult& r) {
  io::CsvWriter w(path);
  w.header({"epoch", "train_loss", "val_loss"});
  for (std::size_t e = 0; e < r.train_loss.size(); ++e)
    w.row({io::CsvWriter::num(e + 1), io::CsvWriter::num(r.train_loss[e]), io::CsvWriter::num(r.val_loss[e])});
}

}  // namespace surmodel::pipeline
