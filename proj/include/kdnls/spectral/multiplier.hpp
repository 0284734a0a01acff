#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "kdnls/spectral/field.hpp"

namespace kdnls {

enum class Sign { plus, minus };
enum class Projection { P, Q };
enum class DerivativeKind { homogeneous, inhomogeneous };

inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

namespace cutoff {

inline double psi(double r) { return r > 0.0 ? std::exp(-1.0 / r) : 0.0; }

/// Smooth bump: 1 on |xi| <= 1, 0 on |xi| >= 2.
inline double rho(double xi) {
  const double a = std::abs(xi);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double p = psi(2.0 - a), q = psi(a - 1.0);
  return p / (p + q);
}

/// Dyadic piece rho(xi/N) - rho(2 xi/N), supported in N/2 <= |xi| <= 2N.
inline double rho_dyadic(double xi, double N) { return rho(xi / N) - rho(2.0 * xi / N); }
inline double rho_low(double xi, double N) { return rho(xi / N); }
inline double rho_high(double xi, double N) { return 1.0 - rho(xi / N); }

inline double chi(Sign s, double xi) { return s == Sign::plus ? (xi > 0.0) : (xi < 0.0); }

inline double sgn(double xi) { return xi > 0.0 ? 1.0 : (xi < 0.0 ? -1.0 : 0.0); }

}  // namespace cutoff

/// A Fourier symbol sampled on a grid's wavenumbers.
struct MultiplierSymbol {
  SpectralGrid grid;
  CVec values;  // FFT order
  std::string tag;
};

/// Samples `fn` at every nonzero wavenumber; slot 0 takes `at_zero`.
inline MultiplierSymbol make_symbol(const SpectralGrid& g, const std::function<cplx(double)>& fn,
                                    cplx at_zero, std::string tag) {
  MultiplierSymbol s{g, CVec(g.size()), std::move(tag)};
  for (std::size_t i = 0; i < g.size(); ++i) {
    s.values[i] = i == 0 ? at_zero : fn(g.wavenumber(i));
    if (!std::isfinite(s.values[i].real()) || !std::isfinite(s.values[i].imag()))
      throw Error("symbol '" + s.tag + "' not finite at xi=" + std::to_string(g.wavenumber(i)));
  }
  return s;
}

inline void apply_symbol_in_place(const MultiplierSymbol& s, std::span<cplx> c) {
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= s.values[i];
  c[s.grid.nyquist_slot()] = 0.0;
}

inline ComplexField apply_multiplier(ComplexField f, const MultiplierSymbol& s) {
  if (!(f.grid == s.grid)) throw GridMismatch();
  apply_symbol_in_place(s, f.coeffs);
  return f;
}

// Symbol factories.

inline MultiplierSymbol hilbert_symbol(const SpectralGrid& g) {
  return make_symbol(g, [](double xi) { return cplx(0.0, -cutoff::sgn(xi)); }, 0.0, "hilbert");
}

inline MultiplierSymbol derivative_symbol(const SpectralGrid& g, int k) {
  return make_symbol(g, [k](double xi) { return std::pow(cplx(0.0, xi), k); }, k == 0 ? 1.0 : 0.0,
                     "d^" + std::to_string(k));
}

inline MultiplierSymbol projection_symbol(const SpectralGrid& g, Sign s, Projection p) {
  return make_symbol(
      g,
      [s, p](double xi) {
        const double c = cutoff::chi(s, xi);
        return cplx(p == Projection::P ? c : c * cutoff::rho_high(xi, 1.0));
      },
      0.0, std::string(p == Projection::P ? "P" : "Q") + (s == Sign::plus ? "+" : "-"));
}

inline MultiplierSymbol littlewood_paley_symbol(const SpectralGrid& g, double N) {
  return make_symbol(g, [N](double xi) { return cplx(cutoff::rho_dyadic(xi, N)); }, 0.0,
                     "lp_" + std::to_string(N));
}

inline MultiplierSymbol low_pass_symbol(const SpectralGrid& g, double N) {
  return make_symbol(g, [N](double xi) { return cplx(cutoff::rho_low(xi, N)); }, 1.0,
                     "low_" + std::to_string(N));
}

inline MultiplierSymbol high_pass_symbol(const SpectralGrid& g, double N) {
  return make_symbol(g, [N](double xi) { return cplx(cutoff::rho_high(xi, N)); }, 0.0,
                     "high_" + std::to_string(N));
}

inline MultiplierSymbol fractional_symbol(const SpectralGrid& g, double s, DerivativeKind kind) {
  if (kind == DerivativeKind::inhomogeneous)
    return make_symbol(g, [s](double xi) { return cplx(std::pow(1.0 + xi * xi, 0.5 * s)); }, 1.0,
                       "bracket^" + std::to_string(s));
  return make_symbol(g, [s](double xi) { return cplx(std::pow(std::abs(xi), s)); },
                     s == 0.0 ? 1.0 : 0.0, "D^" + std::to_string(s));
}

// Field operators.

inline ComplexField hilbert(const ComplexField& f) { return apply_multiplier(f, hilbert_symbol(f.grid)); }

inline ComplexField derivative(const ComplexField& f, int k = 1) {
  return apply_multiplier(f, derivative_symbol(f.grid, k));
}

inline ComplexField project(const ComplexField& f, Sign s, Projection p) {
  return apply_multiplier(f, projection_symbol(f.grid, s, p));
}

inline ComplexField littlewood_paley(const ComplexField& f, double N) {
  return apply_multiplier(f, littlewood_paley_symbol(f.grid, N));
}
inline ComplexField low_pass(const ComplexField& f, double N) {
  return apply_multiplier(f, low_pass_symbol(f.grid, N));
}
inline ComplexField high_pass(const ComplexField& f, double N) {
  return apply_multiplier(f, high_pass_symbol(f.grid, N));
}

/// |xi|^s (homogeneous) or <xi>^s (inhomogeneous). Homogeneous with s < 0
/// requires a zero mean (to roundoff).
inline ComplexField fractional_derivative(const ComplexField& f, double s,
                                          DerivativeKind kind = DerivativeKind::homogeneous) {
  double scale = 0.0;
  for (auto c : f.coeffs) scale = std::max(scale, std::abs(c));
  if (kind == DerivativeKind::homogeneous && s < 0.0 && std::abs(f.coeffs[0]) > 1e-13 * scale)
    throw Error("negative-order homogeneous derivative of a field with nonzero mean");
  return apply_multiplier(f, fractional_symbol(f.grid, s, kind));
}

/// alpha f + beta H f
inline ComplexField h_alpha_beta(const ComplexField& f, double alpha, double beta) {
  return apply_multiplier(
      f, make_symbol(f.grid, [=](double xi) { return cplx(alpha, -beta * cutoff::sgn(xi)); }, alpha,
                     "H_ab"));
}

}  // namespace kdnls
