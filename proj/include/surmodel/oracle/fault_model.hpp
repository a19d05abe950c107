#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "surmodel/core/types.hpp"
#include "surmodel/io/csv.hpp"
#include "surmodel/oracle/config.hpp"
#include "surmodel/oracle/theis.hpp"

namespace surmodel::oracle {

/// Uniform patch discretization of the vertical fault plane
/// [0, fault_length] x [-fault_depth, 0].
struct FaultGrid {
  std::vector<double> s;  // along-strike patch centers, m
  std::vector<double> z;  // depth patch centers (negative), m
  double patch_area = 0.0;

  explicit FaultGrid(const OracleConfig& cfg) {
    const double ds = cfg.fault_length / cfg.grid_ny;
    const double dz = cfg.fault_depth / cfg.grid_nz;
    s.resize(static_cast<std::size_t>(cfg.grid_ny));
    z.resize(static_cast<std::size_t>(cfg.grid_nz));
    for (int j = 0; j < cfg.grid_ny; ++j) s[static_cast<std::size_t>(j)] = (j + 0.5) * ds;
    for (int k = 0; k < cfg.grid_nz; ++k) z[static_cast<std::size_t>(k)] = -(k + 0.5) * dz;
    patch_area = ds * dz;
  }
  [[nodiscard]] std::size_t size() const { return s.size() * z.size(); }
};

/// Distance from a fault point to the well, which sits well_offset off the
/// fault plane in front of its midpoint.
inline double well_distance(double s_coord, const OracleConfig& cfg) {
  const double ds = s_coord - 0.5 * cfg.fault_length;
  return std::sqrt(ds * ds + cfg.well_offset * cfg.well_offset);
}

/// Vertical attenuation of the aquifer drawdown: 1 inside the aquifer band,
/// exponential decay with distance outside it.
inline double vertical_attenuation(double z, const OracleConfig& cfg) {
  double dist = 0.0;
  if (z > cfg.aquifer_top) dist = z - cfg.aquifer_top;
  else if (z < cfg.aquifer_bottom) dist = cfg.aquifer_bottom - z;
  return dist == 0.0 ? 1.0 : std::exp(-dist / cfg.decay_length);
}

/// Pore-pressure change (Pa, <= 0) at fault point (s, z) and time t (s).
inline double pressure_change(double s_coord, double z, double t, const OracleConfig& cfg) {
  if (z < -cfg.fault_depth || z > 0.0) throw std::domain_error("pressure_change: z outside fault");
  const double head = theis_drawdown(well_distance(s_coord, cfg), t, cfg);
  const double dp = std::min(kWaterDensity * kGravity * head, cfg.pressure_cap);
  return -dp * vertical_attenuation(z, cfg);
}

/// Sum of two unit-height Gaussian bumps of width decay_length centred on
/// the aquifer top and bottom. Compaction loads concentrate there.
inline double edge_profile(double z, const OracleConfig& cfg) {
  const double lam = cfg.decay_length;
  const double a = (z - cfg.aquifer_top) / lam;
  const double b = (z - cfg.aquifer_bottom) / lam;
  return std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b);
}

/// Mohr-Coulomb shear strength tau0 - t_N tan(phi); compression negative.
inline double tau_max(double tau0, double phi_deg, double t_n) {
  if (!(phi_deg > 0.0 && phi_deg < 90.0)) throw std::domain_error("tau_max: phi outside (0, 90) deg");
  return tau0 - t_n * std::tan(phi_deg * kPi / 180.0);
}

struct PatchLoads {
  double t_n = 0.0;  // normal traction, Pa (compression negative)
  double tau = 0.0;  // shear load magnitude, Pa
};

/// Loads on a patch at depth z given the aquifer drawdown magnitude there and
/// the precomputed edge profile value.
inline PatchLoads loads_from_drawdown(double z, double dp_abs, double profile,
                                      const ParameterVector& p, const OracleConfig& cfg) {
  PatchLoads l;
  l.t_n = p.m2 * cfg.vertical_stress_gradient * z + cfg.normal_unload_coeff * dp_abs * profile;
  l.tau = cfg.shear_load_coeff * dp_abs * profile;
  return l;
}

inline PatchLoads patch_loads(double s_coord, double z, double t, const ParameterVector& p,
                              const OracleConfig& cfg) {
  const double dp_abs = std::abs(pressure_change(s_coord, cfg.aquifer_mid(), t, cfg));
  return loads_from_drawdown(z, dp_abs, edge_profile(z, cfg), p, cfg);
}

enum class PatchMode { Stick, Slip, Open };

struct PatchState {
  PatchMode mode = PatchMode::Stick;
  double slip = 0.0;  // m
  double t_n = 0.0;
  double tau = 0.0;
};

inline PatchState classify_patch(double t_n, double tau, const ParameterVector& p,
                                 const OracleConfig& cfg) {
  PatchState st{PatchMode::Stick, 0.0, t_n, tau};
  if (t_n >= 0.0) {
    st.mode = PatchMode::Open;
    return st;
  }
  const double strength = tau_max(p.tau0, p.phi, t_n);
  if (tau > strength) {
    st.mode = PatchMode::Slip;
    st.slip = (tau - strength) / cfg.patch_shear_stiffness;
  }
  return st;
}

/// Seismic moment M0 = G A_a delta_S (N m).
inline double seismic_moment(const StateVector& state, const OracleConfig& cfg) {
  return cfg.shear_modulus() * state.a_a * state.delta_s;
}

struct SeriesResult {
  std::vector<StateVector> states;  // one per step t_1..t_N
  std::vector<int> open_patches;    // Open count per step
  bool opened = false;              // F_o
};

/// The stand-in forward model. Construction tabulates everything that does
/// not depend on the parameter vector; evaluation is then pure arithmetic
/// and safe to call concurrently.
class FaultModel {
 public:
  explicit FaultModel(OracleConfig cfg) : cfg_(std::move(cfg)), grid_(cfg_) {
    cfg_.validate();
    profile_.resize(grid_.z.size());
    for (std::size_t k = 0; k < grid_.z.size(); ++k) profile_[k] = edge_profile(grid_.z[k], cfg_);
    drawdown_.assign(static_cast<std::size_t>(cfg_.n_steps), std::vector<double>(grid_.s.size()));
    for (int i = 1; i <= cfg_.n_steps; ++i) {
      const double t = step_time(i);
      for (std::size_t j = 0; j < grid_.s.size(); ++j)
        drawdown_[static_cast<std::size_t>(i - 1)][j] =
            std::abs(pressure_change(grid_.s[j], cfg_.aquifer_mid(), t, cfg_));
    }
  }

  [[nodiscard]] const OracleConfig& config() const { return cfg_; }
  [[nodiscard]] const FaultGrid& grid() const { return grid_; }
  [[nodiscard]] int n_steps() const { return cfg_.n_steps; }
  /// t_i = i years.
  [[nodiscard]] static double step_time(int t_index) { return t_index * kSecondsPerYear; }

  [[nodiscard]] StateVector evaluate(const ParameterVector& p, int t_index) const {
    int n_open = 0;
    return evaluate_counting(p, t_index, n_open);
  }

  [[nodiscard]] SeriesResult run_series(const ParameterVector& p) const {
    SeriesResult r;
    r.states.reserve(static_cast<std::size_t>(cfg_.n_steps));
    for (int i = 1; i <= cfg_.n_steps; ++i) {
      int n_open = 0;
      r.states.push_back(evaluate_counting(p, i, n_open));
      r.open_patches.push_back(n_open);
      if (n_open > 0) r.opened = true;
    }
    return r;
  }

  [[nodiscard]] double seismic_moment(const StateVector& s) const {
    return oracle::seismic_moment(s, cfg_);
  }

  /// Per-patch states at one step, s-major (j outer, k inner).
  [[nodiscard]] std::vector<PatchState> patch_states(const ParameterVector& p, int t_index) const {
    check_step(t_index);
    std::vector<PatchState> out;
    out.reserve(grid_.size());
    const auto& dd = drawdown_[static_cast<std::size_t>(t_index - 1)];
    for (std::size_t j = 0; j < grid_.s.size(); ++j)
      for (std::size_t k = 0; k < grid_.z.size(); ++k) {
        const PatchLoads l = loads_from_drawdown(grid_.z[k], dd[j], profile_[k], p, cfg_);
        out.push_back(classify_patch(l.t_n, l.tau, p, cfg_));
      }
    return out;
  }

 private:
  void check_step(int t_index) const {
    if (t_index < 1 || t_index > cfg_.n_steps)
      throw std::out_of_range("time step index outside 1.." + std::to_string(cfg_.n_steps));
  }

  StateVector evaluate_counting(const ParameterVector& p, int t_index, int& n_open) const {
    check_step(t_index);
    if (!(p.phi > 0.0 && p.phi < 90.0)) throw std::domain_error("phi outside (0, 90) deg");
    const auto& dd = drawdown_[static_cast<std::size_t>(t_index - 1)];
    const double area = grid_.patch_area;
    double a_a = 0.0;
    double weighted = 0.0;
    n_open = 0;
    for (std::size_t j = 0; j < grid_.s.size(); ++j) {
      const double dp_abs = dd[j];
      for (std::size_t k = 0; k < grid_.z.size(); ++k) {
        const PatchLoads l = loads_from_drawdown(grid_.z[k], dp_abs, profile_[k], p, cfg_);
        const PatchState st = classify_patch(l.t_n, l.tau, p, cfg_);
        if (st.mode == PatchMode::Slip) {
          a_a += area;
          weighted += st.slip * area;
        } else if (st.mode == PatchMode::Open) {
          ++n_open;
        }
      }
    }
    return {a_a, a_a > 0.0 ? weighted / a_a : 0.0};
  }

  OracleConfig cfg_;
  FaultGrid grid_;
  std::vector<double> profile_;                // edge_profile(z_k)
  std::vector<std::vector<double>> drawdown_;  // |dp| at aquifer mid-depth, [step][j]
};

inline StateVector evaluate(const ParameterVector& p, int t_index, const OracleConfig& cfg) {
  return FaultModel(cfg).evaluate(p, t_index);
}

inline SeriesResult run_series(const ParameterVector& p, const OracleConfig& cfg) {
  return FaultModel(cfg).run_series(p);
}

inline const std::vector<std::string>& series_csv_header() {
  static const std::vector<std::string> h{"tau0_pa", "phi_deg", "m2", "t",
                                          "a_a_m2", "delta_s_m", "f_o"};
  return h;
}

/// Writes run_series results, one row per (p, t).
inline void write_series_csv(const std::filesystem::path& path,
                             const std::vector<ParameterVector>& pvs,
                             const std::vector<SeriesResult>& results) {
  if (pvs.size() != results.size()) throw std::invalid_argument("write_series_csv: size mismatch");
  io::CsvWriter w(path);
  w.header(series_csv_header());
  using io::CsvWriter;
  for (std::size_t n = 0; n < pvs.size(); ++n)
    for (std::size_t i = 0; i < results[n].states.size(); ++i) {
      const auto& s = results[n].states[i];
      w.row({CsvWriter::num(pvs[n].tau0), CsvWriter::num(pvs[n].phi), CsvWriter::num(pvs[n].m2),
             CsvWriter::num(static_cast<int>(i + 1)), CsvWriter::num(s.a_a),
             CsvWriter::num(s.delta_s), CsvWriter::num(results[n].opened ? 1 : 0)});
    }
}

}  // namespace surmodel::oracle
