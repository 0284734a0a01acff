#pragma once

#include <cmath>
#include <complex>

#include "kdnls/spectral/multiplier.hpp"

namespace kdnls {

/// sqrt(dxi * sum |c_j|^2 w(xi_j))
template <class W>
double spectral_weighted_l2(const ComplexField& f, W&& weight) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f.coeffs[i]) * weight(f.grid.wavenumber(i));
  return std::sqrt(f.grid.dxi() * s);
}

inline double l2_norm(const ComplexField& f) {
  return spectral_weighted_l2(f, [](double) { return 1.0; });
}

/// Physical-space L2 norm h * sum |v_k|^2 of grid values.
inline double l2_norm_physical(const SpectralGrid& g, std::span<const cplx> v) {
  double s = 0.0;
  for (auto z : v) s += std::norm(z);
  return std::sqrt(g.dx() * s);
}

/// ||<d>^s f||
inline double sobolev_norm(const ComplexField& f, double s) {
  if (s == 0.0) return l2_norm(f);
  return spectral_weighted_l2(f, [s](double xi) { return std::pow(1.0 + xi * xi, s); });
}

/// ||D^s f|| with D = |d|
inline double homogeneous_norm(const ComplexField& f, double s) {
  if (s == 0.0) return l2_norm(f);
  return spectral_weighted_l2(f, [s](double xi) { return xi == 0.0 ? 0.0 : std::pow(std::abs(xi), 2.0 * s); });
}

/// ||<x>^m <d>^s f|| with x taken from the grid coordinates.
inline double weighted_norm(const ComplexField& f, double s, double m) {
  if (m == 0.0) return sobolev_norm(f, s);
  ComplexField g = s == 0.0 ? f : fractional_derivative(f, s, DerivativeKind::inhomogeneous);
  CVec v = g.physical();
  auto x = f.grid.coordinates();
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += std::pow(1.0 + x[i] * x[i], m) * std::norm(v[i]);
  return std::sqrt(f.grid.dx() * acc);
}

/// Fraction of L2 mass on |x| > L/2.
inline double boundary_mass_fraction(const SpectralGrid& g, std::span<const cplx> values) {
  const double half = 0.5 * g.half_length();
  auto x = g.coordinates();
  double outer = 0.0, total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double m = std::norm(values[i]);
    total += m;
    if (std::abs(x[i]) > half) outer += m;
  }
  return total > 0.0 ? outer / total : 0.0;
}

inline double boundary_mass_fraction(const ComplexField& f) {
  return boundary_mass_fraction(f.grid, f.physical());
}

inline constexpr double kDefaultBoundaryThreshold = 1e-6;

/// J(t) u = x u + 2 i t u_x
inline ComplexField apply_J(const ComplexField& u, double t) {
  const SpectralGrid& g = u.grid;
  CVec v = u.physical();
  auto x = g.coordinates();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= x[i];
  CVec out = g.to_spectral(v);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += cplx(0.0, 2.0 * t) * cplx(0.0, g.wavenumber(i)) * u.coeffs[i];
  out[g.nyquist_slot()] = 0.0;
  return ComplexField(g, std::move(out), u.t);
}

struct CheckedJ {
  ComplexField value;
  double boundary_fraction;
  bool warning;
};

inline CheckedJ apply_J_checked(const ComplexField& u, double t,
                                double threshold = kDefaultBoundaryThreshold) {
  const double frac = boundary_mass_fraction(u);
  return {apply_J(u, t), frac, frac > threshold};
}

}  // namespace kdnls
