#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace surmodel {

inline constexpr double kSecondsPerYear = 3.1536e7;
inline constexpr double kWaterDensity = 1000.0;  // kg/m^3
inline constexpr double kGravity = 9.81;         // m/s^2
inline constexpr double kPi = 3.14159265358979323846;

/// Uncertain fault parameters. SI units: tau0 in Pa, phi in degrees.
struct ParameterVector {
  double tau0 = 0.0;
  double phi = 0.0;
  double m2 = 0.0;

  static constexpr std::size_t kSize = 3;

  [[nodiscard]] bool finite() const {
    return std::isfinite(tau0) && std::isfinite(phi) && std::isfinite(m2);
  }
  [[nodiscard]] std::array<double, 3> as_array() const { return {tau0, phi, m2}; }
  static ParameterVector from_array(const std::array<double, 3>& a) {
    return {a[0], a[1], a[2]};
  }
  double operator[](std::size_t i) const {
    switch (i) {
      case 0: return tau0;
      case 1: return phi;
      case 2: return m2;
      default: throw std::out_of_range("ParameterVector index");
    }
  }
  friend bool operator==(const ParameterVector&, const ParameterVector&) = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] double mid() const { return 0.5 * (lo + hi); }
  [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }
  /// Maps u in [0,1] onto the interval.
  [[nodiscard]] double from_unit(double u) const { return lo + (hi - lo) * u; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Prior support of the parameters (closed cube).
struct ParameterCube {
  Interval tau0{0.0, 2.0e5};
  Interval phi{20.0, 40.0};
  Interval m2{0.4286, 1.0};

  [[nodiscard]] const Interval& axis(std::size_t i) const {
    switch (i) {
      case 0: return tau0;
      case 1: return phi;
      case 2: return m2;
      default: throw std::out_of_range("ParameterCube axis");
    }
  }
  [[nodiscard]] bool contains(const ParameterVector& p) const {
    return tau0.contains(p.tau0) && phi.contains(p.phi) && m2.contains(p.m2);
  }
  [[nodiscard]] ParameterVector from_unit(const std::array<double, 3>& u) const {
    return {tau0.from_unit(u[0]), phi.from_unit(u[1]), m2.from_unit(u[2])};
  }
  [[nodiscard]] ParameterVector center() const { return {tau0.mid(), phi.mid(), m2.mid()}; }
  friend bool operator==(const ParameterCube&, const ParameterCube&) = default;
};

/// Oracle / surrogate output at one time step.
struct StateVector {
  double a_a = 0.0;      // activated area, m^2
  double delta_s = 0.0;  // average slip, m
  friend bool operator==(const StateVector&, const StateVector&) = default;
};

}  // namespace surmodel
