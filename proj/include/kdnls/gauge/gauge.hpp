#pragma once

// Gauge phases rho_pm[u](x) = -/+ (beta/2) int_{-L}^x |u|^2 and their weights.

#include <cmath>
#include <complex>

#include "kdnls/model/model.hpp"

namespace kdnls {

enum class CumulativeRule { trapezoid, spectral };
enum class BoundaryPolicy { abort, warn, ignore };

struct GaugeOptions {
  CumulativeRule rule = CumulativeRule::trapezoid;
  BoundaryPolicy boundary = BoundaryPolicy::abort;
  double boundary_threshold = kDefaultBoundaryThreshold;
};

inline void enforce_boundary(const SpectralGrid& g, std::span<const cplx> values, const GaugeOptions& o) {
  if (o.boundary != BoundaryPolicy::abort) return;
  const double frac = boundary_mass_fraction(g, values);
  if (frac > o.boundary_threshold) throw BoundaryMassError(frac, o.boundary_threshold);
}

/// int_{-L}^{x_k} f for real grid values f. Trapezoid, or spectral
/// (exact ramp for the mean plus the antiderivative of the rest).
inline RVec cumulative_integral(const SpectralGrid& g, std::span<const double> f,
                                CumulativeRule rule = CumulativeRule::trapezoid) {
  const std::size_t n = g.size();
  RVec out(n, 0.0);
  if (rule == CumulativeRule::trapezoid) {
    const double h = g.dx();
    for (std::size_t k = 1; k < n; ++k) out[k] = out[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
    return out;
  }
  CVec c(f.begin(), f.end());
  g.to_spectral(c, c);
  const double norm = g.dxi() / std::sqrt(2.0 * std::numbers::pi);
  const double mean = norm * c[0].real();
  c[0] = 0.0;
  c[g.nyquist_slot()] = 0.0;
  for (std::size_t i = 1; i < n; ++i) c[i] /= cplx(0.0, g.wavenumber(i));
  g.to_physical(c, c);
  auto x = g.coordinates();
  for (std::size_t k = 0; k < n; ++k) out[k] = mean * (x[k] + g.half_length()) + (c[k].real() - c[0].real());
  return out;
}

/// Full-period integral h * sum f.
inline double period_integral(const SpectralGrid& g, std::span<const double> f) {
  double s = 0.0;
  for (double v : f) s += v;
  return g.dx() * s;
}

inline RVec antiderivative_density(const ComplexField& u, const GaugeOptions& o = {}) {
  CVec v = u.physical();
  enforce_boundary(u.grid, v, o);
  RVec d(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d[i] = std::norm(v[i]);
  return cumulative_integral(u.grid, d, o.rule);
}

struct GaugeState {
  RVec rho_plus, rho_minus;
  RVec weight_plus, weight_minus;
  double source_norm = 0.0;  // ||u||^2

  const RVec& rho(Sign s) const { return s == Sign::plus ? rho_plus : rho_minus; }
  const RVec& weight(Sign s) const { return s == Sign::plus ? weight_plus : weight_minus; }
};

/// Phases from grid values of u.
inline GaugeState gauge_state_from_values(const SpectralGrid& g, std::span<const cplx> v,
                                          const ModelParams& p, const GaugeOptions& o = {}) {
  enforce_boundary(g, v, o);
  const std::size_t n = v.size();
  RVec d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = std::norm(v[i]);
  RVec a = cumulative_integral(g, d, o.rule);
  GaugeState s;
  s.rho_plus.resize(n);
  s.rho_minus.resize(n);
  s.weight_plus.resize(n);
  s.weight_minus.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.rho_plus[i] = -0.5 * p.beta * a[i];
    s.rho_minus[i] = -s.rho_plus[i];
    s.weight_plus[i] = std::exp(s.rho_plus[i]);
    s.weight_minus[i] = std::exp(s.rho_minus[i]);
  }
  s.source_norm = period_integral(g, d);
  return s;
}

inline GaugeState gauge_state(const ComplexField& u, const ModelParams& p, const GaugeOptions& o = {}) {
  return gauge_state_from_values(u.grid, u.physical(), p, o);
}

inline constexpr int kMaxGaugedOrder = 4;

/// Grid values of e^{rho_pm} Q_pm d^k u.
inline CVec gauged_derivative_values(const ComplexField& u, Sign s, int k, const GaugeState& gs) {
  if (k < 0 || k > kMaxGaugedOrder)
    throw ResolutionError("gauged derivative order " + std::to_string(k) + " outside [0,4]");
  CVec v = derivative(project(u, s, Projection::Q), k).physical();
  const RVec& w = gs.weight(s);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= w[i];
  return v;
}

inline ComplexField gauged_derivative(const ComplexField& u, Sign s, int k, const ModelParams& p,
                                      const GaugeOptions& o = {}) {
  if (k < 0 || k > kMaxGaugedOrder)
    throw ResolutionError("gauged derivative order " + std::to_string(k) + " outside [0,4]");
  GaugeState gs = gauge_state(u, p, o);
  return ComplexField::from_physical(u.grid, gauged_derivative_values(u, s, k, gs), u.t);
}

/// Closed form of d_t rho_pm along the flow, on the periodic box (flux at -L
/// subtracted):
///   -/+ (beta/2) [F(x) - F(-L) - 2 eps int |u_x|^2 - beta int H(|u|^2) d_x|u|^2]
///   F = eps d_x|u|^2 + 2 Re(i conj(u) u_x) + (3/2) alpha |u|^4 + 2 beta H(|u|^2)|u|^2
inline RVec rho_time_derivative(const ComplexField& u, const ModelParams& p, Sign s = Sign::plus,
                                const GaugeOptions& o = {}) {
  const SpectralGrid& g = u.grid;
  const std::size_t n = g.size();
  CVec v = u.physical();
  enforce_boundary(g, v, o);
  CVec vx = derivative(u, 1).physical();
  CVec dv(n);
  for (std::size_t i = 0; i < n; ++i) dv[i] = std::norm(v[i]);
  ComplexField dens = ComplexField::from_physical(g, dv);
  if (p.dealias) dealias_in_place(g, dens.coeffs);
  CVec hd = hilbert(dens).physical();
  CVec ddx = derivative(dens, 1).physical();
  RVec flux(n), src(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = dv[i].real();
    const double hdr = hd[i].real();
    const double dx_d = 2.0 * std::real(std::conj(v[i]) * vx[i]);
    flux[i] = p.epsilon * dx_d + 2.0 * std::real(cplx(0.0, 1.0) * std::conj(v[i]) * vx[i]) +
              1.5 * p.alpha * d * d + 2.0 * p.beta * hdr * d;
    src[i] = -2.0 * p.epsilon * std::norm(vx[i]) - p.beta * hdr * ddx[i].real();
  }
  RVec cum = cumulative_integral(g, src, o.rule);
  RVec out(n);
  const double pref = -0.5 * p.beta * sign_value(s);
  for (std::size_t i = 0; i < n; ++i) out[i] = pref * (flux[i] - flux[0] + cum[i]);
  return out;
}

}  // namespace kdnls
