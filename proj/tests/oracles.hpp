#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical code.

#include <cmath>
#include <vector>

namespace oracle {

inline double phi(double x, double rho, double theta) {
  const double a = 32.0 * (1.0 - rho) * theta * theta * std::max(std::sqrt(x / 2.0), x);
  return a + (1.0 - rho) * theta * theta * x + rho * theta * std::sqrt(x);
}

// Bisection on the monotone phi; 200 halvings reach double resolution.
inline double phi_inverse(double v, double rho, double theta) {
  double lo = 0.0, hi = 1.0;
  while (phi(hi, rho, theta) < v) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (phi(mid, rho, theta) < v ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double mean(const std::vector<double>& x) {
  long double s = 0;
  for (double v : x) s += v;
  return static_cast<double>(s / static_cast<long double>(x.size()));
}

inline double population_variance(const std::vector<double>& x) {
  const long double m = mean(x);
  long double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return static_cast<double>(s / static_cast<long double>(x.size()));
}

inline double mv(const std::vector<double>& x, double rho) {
  return (1.0 - rho) * population_variance(x) - rho * mean(x);
}

}  // namespace oracle
