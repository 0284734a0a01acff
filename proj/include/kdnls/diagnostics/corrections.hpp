#pragma once

// Normal-form corrections I_2, I_{1,1} and the modified H^2 energy.

#include <cmath>
#include <limits>
#include <vector>

#include "kdnls/diagnostics/time_series.hpp"
#include "kdnls/gauge/gauge.hpp"

namespace kdnls {

/// physical_space: sum_pm 2Re[(2i)^{-1} int F_pm conj(G_pm) dx] as computed.
/// fourier_display: the same trilinear sum without the transform constant,
/// i.e. 2Re of sum m (2i)^{-1} (...) f f f h dxi^3 over grid modes, recovered
/// exactly from the complex pairing.
enum class CorrectionConvention { physical_space, fourier_display };

namespace detail {

/// Q_s(H_ab(a conj(b)) c) on the grid of a, alias free (products on a 4x
/// padded grid), truncated back to the original modes.
inline ComplexField trilinear_Q(const ComplexField& a, const ComplexField& b, const ComplexField& c,
                                const ModelParams& p, Sign s) {
  const SpectralGrid& g = a.grid;
  const SpectralGrid big = make_grid(4 * g.size(), g.half_length());
  ComplexField A = resample(a, big), B = resample(b, big), C = resample(c, big);
  ComplexField q = h_alpha_beta(product(A, B, true), p.alpha, p.beta);
  ComplexField f = resample(product(q, C), g);
  return project(f, s, Projection::Q);
}

/// sum_pm 2Re[(2i)^{-1} <Q_pm(H_ab(u conj(b)) u), e^{2 rho_pm} Q_pm d^k c>] and
/// the complex pairings it is built from.
inline double trilinear_pairing(const ComplexField& u, const ComplexField& b, const ComplexField& c, int k,
                                const ModelParams& p, const GaugeOptions& o, cplx convention_scale) {
  const SpectralGrid& g = u.grid;
  GaugeState gs = gauge_state(u, p, o);
  double total = 0.0;
  for (Sign s : {Sign::plus, Sign::minus}) {
    ComplexField F = trilinear_Q(u, b, u, p, s);
    CVec G = derivative(project(c, s, Projection::Q), k).physical();
    const RVec& w = gs.weight(s);
    for (std::size_t i = 0; i < G.size(); ++i) G[i] *= w[i] * w[i];
    g.to_spectral(G, G);
    cplx K = 0.0;
    for (std::size_t i = 0; i < G.size(); ++i) K += F.coeffs[i] * std::conj(G[i]);
    K *= g.dxi();
    total += 2.0 * std::real(convention_scale * K / cplx(0.0, 2.0));
  }
  return total;
}

}  // namespace detail

/// I_2 with b = u_x, h = e^{2 rho} Q u_xx. The physical-space form is free of
/// the interaction-picture phase, so t only labels the sample.
inline double correction_I2(const ComplexField& u, double t, const ModelParams& p,
                            CorrectionConvention conv = CorrectionConvention::physical_space,
                            const GaugeOptions& o = {}) {
  (void)t;
  const cplx scale = conv == CorrectionConvention::physical_space ? cplx(1.0) : cplx(0.0, 2.0 * std::numbers::pi);
  return detail::trilinear_pairing(u, derivative(u, 1), u, 2, p, o, scale);
}

/// I_{1,1} with b = Ju, h = e^{2 rho} Q d_x Ju.
inline double correction_I11(const ComplexField& u, const ComplexField& Ju, double t, const ModelParams& p,
                             CorrectionConvention conv = CorrectionConvention::physical_space,
                             const GaugeOptions& o = {}) {
  (void)t;
  u.check(Ju);
  const cplx scale = conv == CorrectionConvention::physical_space ? cplx(1.0) : cplx(2.0 * std::numbers::pi);
  return detail::trilinear_pairing(u, Ju, Ju, 1, p, o, scale);
}

/// sum_pm ||e^{rho_pm} Q_pm d^k u||^2
inline double gauged_energy(const ComplexField& u, int k, const ModelParams& p, const GaugeOptions& o = {}) {
  GaugeState gs = gauge_state(u, p, o);
  double s = 0.0;
  for (Sign sg : {Sign::plus, Sign::minus}) s += std::pow(l2_norm_physical(u.grid, gauged_derivative_values(u, sg, k, gs)), 2);
  return s;
}

struct ModifiedEnergy {
  double C1 = 0.0;
  double X = 0.0, X_tilde = 0.0, I2 = 0.0;
  double gauged = 0.0;  // sum_pm ||e^{rho} Q u_xx||^2
  double h2_squared = 0.0;
  bool sandwich = false;  // X/2 <= X~ <= 3X/2
  bool h2_bound = false;  // ||u||_{H^2}^2 <= min(X, X~)
};

/// X = C1 e^{C1 M}(G + M + C1 e^{C1 M} ||u||_{H^1}^6), X~ = X - C1 e^{C1 M} I_2,
/// with M = ||u||^2 and G the gauged second-derivative energy.
inline ModifiedEnergy modified_energy_X(const ComplexField& u, double t, const ModelParams& p, double C1,
                                        const GaugeOptions& o = {}) {
  if (!(C1 > 0.0)) throw ConfigError("C1 must be positive");
  ModifiedEnergy e;
  e.C1 = C1;
  const double M = std::pow(l2_norm(u), 2);
  const double h1 = sobolev_norm(u, 1.0);
  e.gauged = gauged_energy(u, 2, p, o);
  e.I2 = correction_I2(u, t, p, CorrectionConvention::physical_space, o);
  e.h2_squared = std::pow(sobolev_norm(u, 2.0), 2);
  const double w = C1 * std::exp(C1 * M);
  e.X = w * (e.gauged + M + w * std::pow(h1, 6));
  e.X_tilde = e.X - w * e.I2;
  const bool finite = std::isfinite(e.X) && std::isfinite(e.X_tilde);
  e.sandwich = finite && 0.5 * e.X <= e.X_tilde && e.X_tilde <= 1.5 * e.X;
  e.h2_bound = finite && e.h2_squared <= std::min(e.X, e.X_tilde);
  return e;
}

struct C1Escalation {
  double C1 = 0.0;
  int doublings = 0;
  bool ok = false;
  std::vector<ModifiedEnergy> samples;
};

/// Smallest C1 = C1_0 2^k for which both assertions hold at every sample.
inline C1Escalation escalate_C1(const std::vector<ComplexField>& states, const ModelParams& p, double C1_0 = 1.0,
                                int max_doublings = 40, const GaugeOptions& o = {}) {
  C1Escalation r;
  double C1 = C1_0;
  for (int k = 0; k <= max_doublings; ++k, C1 *= 2.0) {
    r.C1 = C1;
    r.doublings = k;
    r.samples.clear();
    bool all = true, finite = true;
    for (const auto& u : states) {
      r.samples.push_back(modified_energy_X(u, u.t, p, C1, o));
      const auto& e = r.samples.back();
      all = all && e.sandwich && e.h2_bound;
      finite = finite && std::isfinite(e.X);
    }
    if (all) {
      r.ok = true;
      return r;
    }
    if (!finite) break;
  }
  return r;
}

}  // namespace kdnls
