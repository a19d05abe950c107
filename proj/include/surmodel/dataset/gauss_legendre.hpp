#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

namespace surmodel::dataset {

/// Legendre polynomial P_n(x) by the three-term recurrence.
inline double legendre(int n, double x) {
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return p1;
}

/// Roots of P_n in ascending order: sign changes are bracketed on a fine
/// scan of [-1, 1] and refined by bisection to 1e-15.
inline std::vector<double> gauss_legendre_nodes(int n) {
  std::vector<double> roots;
  constexpr int kScan = 4096;
  double a = -1.0;
  double fa = legendre(n, a);
  for (int i = 1; i <= kScan; ++i) {
    double b = -1.0 + 2.0 * i / kScan;
    double fb = legendre(n, b);
    if (fb == 0.0) {
      roots.push_back(b);
    } else if (fa * fb < 0.0) {
      double lo = a, hi = b, flo = fa;
      while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        const double fm = legendre(n, mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; } else { hi = mid; }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  return roots;
}

inline std::array<double, 5> gauss_nodes_5() {
  const auto r = gauss_legendre_nodes(5);
  std::array<double, 5> out{};
  for (std::size_t i = 0; i < 5; ++i) out[i] = r.at(i);
  out[2] = 0.0;  // exact by symmetry
  return out;
}

}  // namespace surmodel::dataset
