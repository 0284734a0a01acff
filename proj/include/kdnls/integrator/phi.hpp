#pragma once

#include <cmath>
#include <complex>

namespace kdnls::phi {

using cplx = std::complex<double>;

/// phi_k(z) = sum_{m>=0} z^m/(m+k)!, Kahan-compensated; meant for |z| < 1.
inline cplx series(int k, cplx z) {
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  cplx term = 1.0 / fact, sum = 0.0, comp = 0.0;
  for (int m = 0; m < 40; ++m) {
    const cplx y = term - comp;
    const cplx t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    term *= z / static_cast<double>(m + k + 1);
    if (std::abs(term) < 1e-20 * std::abs(sum)) break;
  }
  return sum;
}

inline cplx phi1(cplx z) {
  if (std::abs(z) < 1.0) return series(1, z);
  return (std::exp(z) - 1.0) / z;
}
inline cplx phi2(cplx z) {
  if (std::abs(z) < 1.0) return series(2, z);
  return (std::exp(z) - 1.0 - z) / (z * z);
}
inline cplx phi3(cplx z) {
  if (std::abs(z) < 1.0) return series(3, z);
  return (std::exp(z) - 1.0 - z - 0.5 * z * z) / (z * z * z);
}

}  // namespace kdnls::phi
