#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>

#include "kdnls/spectral/grid.hpp"

namespace kdnls {

/// Spectral coefficients of a complex function on a grid, with a time tag.
struct ComplexField {
  SpectralGrid grid;
  CVec coeffs;
  double t = 0.0;

  ComplexField() = default;
  ComplexField(SpectralGrid g, CVec c, double time = 0.0)
      : grid(std::move(g)), coeffs(std::move(c)), t(time) {
    if (coeffs.size() != grid.size()) throw GridMismatch();
  }

  static ComplexField zeros(const SpectralGrid& g, double time = 0.0) {
    return ComplexField(g, CVec(g.size()), time);
  }
  static ComplexField from_physical(const SpectralGrid& g, std::span<const cplx> values,
                                    double time = 0.0) {
    if (values.size() != g.size()) throw GridMismatch();
    return ComplexField(g, g.to_spectral(values), time);
  }
  static ComplexField from_function(const SpectralGrid& g, const std::function<cplx(double)>& f,
                                    double time = 0.0) {
    CVec v(g.size());
    auto x = g.coordinates();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(x[i]);
    return from_physical(g, v, time);
  }

  std::size_t size() const { return coeffs.size(); }
  CVec physical() const { return grid.to_physical(coeffs); }

  ComplexField& operator+=(const ComplexField& o) {
    check(o);
    for (std::size_t i = 0; i < size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
  }
  ComplexField& operator-=(const ComplexField& o) {
    check(o);
    for (std::size_t i = 0; i < size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
  }
  ComplexField& operator*=(cplx s) {
    for (auto& c : coeffs) c *= s;
    return *this;
  }

  void check(const ComplexField& o) const {
    if (!(grid == o.grid)) throw GridMismatch();
  }
};

inline ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
inline ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
inline ComplexField operator*(cplx s, ComplexField a) { return a *= s; }
inline ComplexField operator*(ComplexField a, cplx s) { return a *= s; }

/// Zeroes |j| > n/3 and the Nyquist slot, in place on raw FFT-order coefficients.
inline void dealias_in_place(const SpectralGrid& g, std::span<cplx> c) {
  const long cut = g.dealias_cutoff();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (std::abs(g.mode(i)) > cut) c[i] = 0.0;
  c[g.nyquist_slot()] = 0.0;
}

inline ComplexField dealias(ComplexField f) {
  dealias_in_place(f.grid, f.coeffs);
  return f;
}

/// Largest coefficient magnitude outside the 2/3 band.
inline double dealias_leak(const ComplexField& f) {
  const long cut = f.grid.dealias_cutoff();
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f.grid.mode(i)) > cut || i == f.grid.nyquist_slot())
      m = std::max(m, std::abs(f.coeffs[i]));
  return m;
}

inline bool is_dealiased(const ComplexField& f) { return dealias_leak(f) == 0.0; }

/// Pointwise map applied in physical space.
inline ComplexField map_physical(const ComplexField& f, const std::function<cplx(double, cplx)>& op) {
  CVec v = f.physical();
  auto x = f.grid.coordinates();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(x[i], v[i]);
  return ComplexField::from_physical(f.grid, v, f.t);
}

/// Same function sampled on another grid with an identical half-length and
/// band; modes outside the smaller grid's band are dropped.
inline ComplexField resample(const ComplexField& f, const SpectralGrid& target) {
  if (f.grid.half_length() != target.half_length()) throw GridMismatch();
  ComplexField out = ComplexField::zeros(target, f.t);
  const long lim = static_cast<long>(std::min(f.size(), target.size()) / 2) - 1;
  for (long j = -lim; j <= lim; ++j) out.coeffs[target.slot(j)] = f.coeffs[f.grid.slot(j)];
  return out;
}

}  // namespace kdnls
