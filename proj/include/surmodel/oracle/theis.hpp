#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "surmodel/core/types.hpp"
#include "surmodel/oracle/config.hpp"

namespace surmodel::oracle {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Theis well function W(u) = E1(u).
///
/// For u <= 1 the alternating series -gamma - ln u + sum (-1)^{k+1} u^k/(k k!)
/// is summed until the term drops below 1e-12. Above 1 the series loses
/// digits to cancellation, so the continued fraction of E1 (modified Lentz)
/// is used instead.
inline double well_function(double u) {
  if (!(u > 0.0)) throw std::domain_error("well_function: u must be > 0");
  if (u <= 1.0) {
    double sum = -kEulerGamma - std::log(u);
    double power_over_fact = 1.0;  // u^k / k!
    for (int k = 1; k < 1000; ++k) {
      power_over_fact *= u / k;
      const double term = power_over_fact / k;
      sum += (k % 2 == 1) ? term : -term;
      if (term < 1e-12) break;
    }
    return sum;
  }
  if (u > 700.0) return 0.0;
  constexpr double kTiny = 1e-300;
  double b = u + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-u);
}

/// Head drawdown (m) at distance r (m) and time t (s) from the pumping well.
inline double theis_drawdown(double r, double t, const OracleConfig& cfg) {
  if (!(r > 0.0)) throw std::domain_error("theis_drawdown: r must be > 0");
  if (!(t > 0.0)) throw std::domain_error("theis_drawdown: t must be > 0");
  const double u = r * r * cfg.storativity / (4.0 * cfg.transmissivity * t);
  return cfg.well_rate / (4.0 * kPi * cfg.transmissivity) * well_function(u);
}

}  // namespace surmodel::oracle
