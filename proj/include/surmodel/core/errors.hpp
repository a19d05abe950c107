#pragma once

#include <stdexcept>
#include <string>

namespace surmodel {

/// Base of the errors that map onto a process exit code.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, int exit_code) : std::runtime_error(what), exit_code_(exit_code) {}
  [[nodiscard]] int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config error: " + what, 2) {}
};

/// Malformed or incompatible artifact (model file, dataset sidecar).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error("format error: " + what, 2) {}
};

class MissingArtifact : public Error {
 public:
  explicit MissingArtifact(const std::string& path)
      : Error("missing artifact: " + path, 3), path_(path) {}
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class CalibrationFailure : public Error {
 public:
  explicit CalibrationFailure(const std::string& what) : Error("calibration failed: " + what, 4) {}
};

class NumericalDivergence : public Error {
 public:
  explicit NumericalDivergence(const std::string& what)
      : Error("numerical divergence: " + what, 5) {}
};

}  // namespace surmodel
