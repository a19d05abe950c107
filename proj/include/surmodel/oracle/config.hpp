#pragma once

#include <filesystem>
#include <string>

#include "surmodel/core/errors.hpp"
#include "surmodel/io/files.hpp"

namespace surmodel::oracle {

/// Physical and phenomenological constants of the stand-in forward model.
/// SI units throughout. The defaults below are the calibrated set shipped in
/// config/oracle_default.json.
struct OracleConfig {
  double well_rate = 0.01;          // m^3/s (~864 m^3/day)
  double well_offset = 300.0;       // m, well-to-fault distance
  double fault_length = 5000.0;     // m
  double fault_depth = 2300.0;      // m
  double aquifer_top = -1100.0;     // m
  double aquifer_bottom = -1200.0;  // m
  double transmissivity = 1.0e-5;   // m^2/s
  double storativity = 1.0e-2;
  double vertical_stress_gradient = 4.0e3;  // Pa/m
  double biot_b = 1.0;                      // reserved, unused by the patch model
  double shear_load_coeff = 0.9;
  double normal_unload_coeff = 1.22;
  double patch_shear_stiffness = 1.0e9;  // Pa/m
  double decay_length = 45.0;            // m
  double pressure_cap = 3.0e6;           // Pa
  int grid_ny = 100;
  int grid_nz = 460;
  double young_E = 1.0e9;  // Pa
  double poisson_nu = 0.30;
  int n_steps = 10;

  [[nodiscard]] double shear_modulus() const { return young_E / (2.0 * (1.0 + poisson_nu)); }
  [[nodiscard]] double aquifer_mid() const { return 0.5 * (aquifer_top + aquifer_bottom); }

  /// Throws ConfigError when an invariant is violated.
  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
    };
    positive(well_rate, "well_rate");
    positive(well_offset, "well_offset");
    positive(fault_length, "fault_length");
    positive(fault_depth, "fault_depth");
    positive(transmissivity, "transmissivity");
    positive(storativity, "storativity");
    positive(vertical_stress_gradient, "vertical_stress_gradient");
    positive(biot_b, "biot_b");
    positive(shear_load_coeff, "shear_load_coeff");
    positive(normal_unload_coeff, "normal_unload_coeff");
    positive(patch_shear_stiffness, "patch_shear_stiffness");
    positive(decay_length, "decay_length");
    positive(pressure_cap, "pressure_cap");
    positive(young_E, "young_E");
    if (!(poisson_nu > -1.0 && poisson_nu < 0.5)) throw ConfigError("poisson_nu must be in (-1, 0.5)");
    if (grid_ny < 1 || grid_nz < 1) throw ConfigError("grid_ny and grid_nz must be >= 1");
    if (n_steps < 1) throw ConfigError("n_steps must be >= 1");
    if (!(aquifer_bottom < aquifer_top && aquifer_top < 0.0))
      throw ConfigError("require aquifer_bottom < aquifer_top < 0");
    if (aquifer_bottom < -fault_depth) throw ConfigError("aquifer below the fault");
    if (!(shear_modulus() > 0.0)) throw ConfigError("shear modulus must be > 0");
  }
};

#define SURMODEL_ORACLE_FIELDS(X)                                                              \
  X(well_rate) X(well_offset) X(fault_length) X(fault_depth) X(aquifer_top) X(aquifer_bottom)  \
  X(transmissivity) X(storativity) X(vertical_stress_gradient) X(biot_b) X(shear_load_coeff)   \
  X(normal_unload_coeff) X(patch_shear_stiffness) X(decay_length) X(pressure_cap) X(grid_ny)   \
  X(grid_nz) X(young_E) X(poisson_nu) X(n_steps)

inline io::Json to_json(const OracleConfig& c) {
  io::Json j;
#define SURMODEL_PUT(name) j[#name] = c.name;
  SURMODEL_ORACLE_FIELDS(SURMODEL_PUT)
#undef SURMODEL_PUT
  return j;
}

/// Flat keys matching the field names; missing keys keep their defaults,
/// unknown keys are rejected.
inline OracleConfig oracle_config_from_json(const io::Json& j) {
  if (!j.is_object()) throw ConfigError("oracle config must be a JSON object");
  OracleConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    bool known = false;
    try {
#define SURMODEL_GET(name)                                   \
  if (key == #name) {                                        \
    c.name = it.value().get<decltype(OracleConfig::name)>(); \
    known = true;                                            \
  }
      SURMODEL_ORACLE_FIELDS(SURMODEL_GET)
#undef SURMODEL_GET
    } catch (const io::Json::exception& e) {
      throw ConfigError("oracle config key '" + key + "': " + e.what());
    }
    if (!known) throw ConfigError("unknown oracle config key '" + key + "'");
  }
  c.validate();
  return c;
}

inline OracleConfig load_oracle_config(const std::filesystem::path& path) {
  return oracle_config_from_json(io::read_json(path));
}

inline void save_oracle_config(const std::filesystem::path& path, const OracleConfig& c) {
  io::write_json(path, to_json(c));
}

}  // namespace surmodel::oracle
