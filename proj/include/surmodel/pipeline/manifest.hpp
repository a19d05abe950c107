#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "surmodel/io/files.hpp"
#include "surmodel/pipeline/run_config.hpp"

namespace surmodel::pipeline {

inline constexpr const char* kToolName = "surmodel";
inline constexpr int kManifestVersion = 1;

/// Per-stage provenance record. Paths inside the run directory are stored
/// relative to it so that reruns into another directory compare equal.
/// Wall time goes to a separate text file to keep the JSON reproducible.
class Manifest {
 public:
  Manifest(std::string stage, const RunConfig& cfg, fs::path run_dir, std::optional<std::uint64_t> stage_seed)
      : stage_(std::move(stage)), run_dir_(std::move(run_dir)), start_(std::chrono::steady_clock::now()) {
    j_["tool"] = kToolName;
    j_["manifest_version"] = kManifestVersion;
    j_["stage"] = stage_;
    j_["config_fingerprint"] = cfg.fingerprint();
    if (cfg.seed) j_["seed"] = *cfg.seed;
    if (stage_seed) j_["stage_seed"] = *stage_seed;
    j_["inputs"] = Json::array();
    j_["outputs"] = Json::array();
    j_["notes"] = Json::array();
  }

  void input(const fs::path& p) { j_["inputs"].push_back(entry(p)); }
  void output(const fs::path& p) { j_["outputs"].push_back(entry(p)); }
  void note(const std::string& s) { j_["notes"].push_back(s); }
  void set(const std::string& key, Json value) { j_[key] = std::move(value); }

  /// Writes `<dir>/manifest_<name>.json` and the wall-time sidecar.
  fs::path write(const fs::path& dir, const std::string& name) const {
    const fs::path path = dir / ("manifest_" + name + ".json");
    io::write_json(path, j_);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    io::write_text(dir / ("walltime_" + name + ".txt"), io::format_double(secs) + "\n");
    return path;
  }

  [[nodiscard]] const Json& json() const { return j_; }

 private:
  [[nodiscard]] Json entry(const fs::path& p) const { return Json{{"path", display(p)}, {"fnv1a64", io::file_hash(p)}}; }

  [[nodiscard]] std::string display(const fs::path& p) const {
    const fs::path rel = fs::absolute(p).lexically_normal().lexically_relative(fs::absolute(run_dir_).lexically_normal());
    if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
    return p.filename().generic_string();
  }

  std::string stage_;
  fs::path run_dir_;
  std::chrono::steady_clock::time_point start_;
  Json j_;
};

}  // namespace surmodel::pipeline
