#pragma once

// Residuals of the exact differential identities along a trajectory. Every
// left side is a 5-point time derivative of a stored functional; every right
// side is evaluated on the snapshot itself.

#include <array>
#include <cmath>
#include <map>
#include <string>

#include "kdnls/diagnostics/time_series.hpp"
#include "kdnls/gauge/gauge.hpp"
#include "kdnls/integrator/phi.hpp"

namespace kdnls {

/// |u|^2 as a field, dealiased when the model dealiases.
inline ComplexField density(const ComplexField& u, const ModelParams& p) {
  CVec v = u.physical();
  for (auto& z : v) z = std::norm(z);
  ComplexField d = ComplexField::from_physical(u.grid, v, u.t);
  detail::maybe_dealias(p, d);
  return d;
}

/// Real part of int f over the period by the rectangle rule.
inline double integrate(const SpectralGrid& g, std::span<const cplx> f) {
  double s = 0.0;
  for (auto z : f) s += z.real();
  return g.dx() * s;
}

inline double squared(double x) { return x * x; }

/// ||D^{1/2} psi||^2, the mass-law dissipation density.
inline double mass_dissipation(const ComplexField& u, const ModelParams& p) {
  return squared(homogeneous_norm(density(u, p), 0.5));
}

inline RVec mass_law_residual(const TrajectoryRecord& rec, const ModelParams& p) {
  const double D = sample_spacing(rec);
  const std::size_t m = rec.snapshots.size();
  RVec mass(m), rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& u = rec.snapshots[i];
    mass[i] = squared(l2_norm(u));
    rhs[i] = -2.0 * p.epsilon * squared(homogeneous_norm(u, 1.0)) + p.beta * mass_dissipation(u, p);
  }
  RVec dm = time_derivative(mass, D);
  for (std::size_t i = 0; i < m; ++i) dm[i] = std::abs(dm[i] - rhs[i]);
  return dm;
}

/// |(||u||^2 + |beta| int_0^t ||D^{1/2} psi||^2) - ||phi||^2|, relative to
/// ||phi||^2 when that is nonzero.
inline RVec h1_cumulative_identity(const TrajectoryRecord& rec, const ModelParams& p) {
  if (!(p.beta < 0.0) || p.epsilon != 0.0)
    throw ConfigError("cumulative mass identity needs beta < 0 and eps = 0");
  const std::size_t m = rec.snapshots.size();
  if (m < 2) throw Error("cumulative mass identity needs at least two samples");
  const double D = sample_spacing(rec);
  RVec mass(m), diss(m);
  for (std::size_t i = 0; i < m; ++i) {
    mass[i] = squared(l2_norm(rec.snapshots[i]));
    diss[i] = mass_dissipation(rec.snapshots[i], p);
  }
  RVec I = cumulative_simpson(diss, D);
  const double m0 = mass[0];
  RVec dev(m);
  for (std::size_t i = 0; i < m; ++i) {
    dev[i] = std::abs(mass[i] + std::abs(p.beta) * I[i] - m0);
    if (m0 > 0.0) dev[i] /= m0;
  }
  return dev;
}

/// Right side of d/dt ||u_xx||^2 for eps = 0.
inline double uxx_identity_rhs(const ComplexField& u, const ModelParams& p) {
  const SpectralGrid& g = u.grid;
  ComplexField psi = density(u, p);
  CVec h2 = h_alpha_beta(derivative(psi, 2), p).physical();
  CVec h1 = h_alpha_beta(derivative(psi, 1), p).physical();
  CVec ux = derivative(u, 1).physical(), uxx = derivative(u, 2).physical();
  CVec f(g.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double dq = 2.0 * std::real(std::conj(ux[i]) * uxx[i]);  // d_x |u_x|^2
    f[i] = 5.0 * (h2[i].real() * dq + h1[i].real() * std::norm(uxx[i]));
  }
  return p.beta * squared(homogeneous_norm(psi, 2.5)) + integrate(g, f);
}

inline RVec uxx_identity_residual(const TrajectoryRecord& rec, const ModelParams& p) {
  if (p.epsilon != 0.0) throw ConfigError("u_xx identity is stated for eps = 0");
  const double D = sample_spacing(rec);
  const std::size_t m = rec.snapshots.size();
  RVec F(m), rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    F[i] = squared(homogeneous_norm(rec.snapshots[i], 2.0));
    rhs[i] = uxx_identity_rhs(rec.snapshots[i], p);
  }
  RVec dF = time_derivative(F, D);
  for (std::size_t i = 0; i < m; ++i) dF[i] = std::abs(dF[i] - rhs[i]);
  return dF;
}

/// max_x |d_t rho_s (finite difference) - closed form| per sample.
inline RVec rho_rate_residual(const TrajectoryRecord& rec, const ModelParams& p, Sign s = Sign::plus,
                              GaugeOptions o = {CumulativeRule::spectral}) {
  const double D = sample_spacing(rec);
  const std::size_t m = rec.snapshots.size();
  if (m < kMinStencilSamples) throw Error("rho rate residual needs at least 5 samples");
  const std::size_t n = rec.snapshots.front().size();
  std::vector<RVec> rho(m), closed(m);
  for (std::size_t i = 0; i < m; ++i) {
    GaugeState gs = gauge_state(rec.snapshots[i], p, o);
    rho[i] = gs.rho(s);
    closed[i] = rho_time_derivative(rec.snapshots[i], p, s, o);
  }
  RVec res(m, 0.0), col(m);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < m; ++i) col[i] = rho[i][k];
    RVec d = time_derivative(col, D);
    for (std::size_t i = 0; i < m; ++i) res[i] = std::max(res[i], std::abs(d[i] - closed[i][k]));
  }
  return res;
}

/// Integrals of e^{kappa (x+L)} q(x) and (x+L) e^{kappa (x+L)} q(x) over
/// [-L, L] for periodic grid values q, exact on the trigonometric interpolant
/// of q (the Nyquist mode is split evenly between +-xi).
struct RampIntegrals {
  cplx plain, moment;
};

inline RampIntegrals ramp_integrals(const SpectralGrid& g, double kappa, CVec q) {
  g.to_spectral(q, q);
  const double S = 2.0 * g.half_length();
  const double norm = g.dxi() / std::sqrt(2.0 * std::numbers::pi);
  RampIntegrals r{0.0, 0.0};
  auto add = [&](cplx c, double xi) {
    const cplx w = S * cplx(kappa, xi);
    const cplx ph = std::exp(cplx(0.0, -xi * g.half_length()));
    const cplx p1 = phi::phi1(w);
    r.plain += c * ph * S * p1;
    r.moment += c * ph * S * S * (p1 - phi::phi2(w));
  };
  const std::size_t ny = g.nyquist_slot();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == ny) {
      add(0.5 * q[i], g.wavenumber(i));
      add(0.5 * q[i], -g.wavenumber(i));
    } else {
      add(q[i], g.wavenumber(i));
    }
  }
  r.plain *= norm;
  r.moment *= norm;
  return r;
}

/// Terms of the exact decomposition of d/dt ||e^{rho} Q d_x^2 u||^2 for one
/// sign, with w = Q d_x^2 u and E = e^{2 rho}:
///   T1 = int d_t(E) |w|^2
///   T2 = -2 Re (-/+ i beta) int E |u|^2 w_x conj(w)
///   T3 = eps int d_x^2(E) |w|^2
///   T4 = -2 eps int E |w_x|^2
///   T5 = 2 Re int E Q d_x^3 N[u] conj(w)
///   B  = [E 2Re((i+eps) w_x conj(w)) - eps d_x(E) |w|^2] from -L to L,
/// the boundary flux left by integrating by parts on the box.
struct GaugedRateTerms {
  double energy = 0.0;  // ||e^{rho} Q d_x^2 u||^2
  double T1 = 0, T2 = 0, T3 = 0, T4 = 0, T5 = 0, B = 0;
  double direct_linear = 0.0;  // 2 Re int E Q d_x^2 ((i+eps) u_xx) conj(w)
  double sum() const { return T1 + T2 + T3 + T4 + T5 + B; }
};

inline GaugedRateTerms gauged_rate_terms(const ComplexField& u, const ModelParams& p, Sign s,
                                         const GaugeOptions& o = {}) {
  const SpectralGrid& g = u.grid;
  const std::size_t n = g.size();
  const double L = g.half_length();
  const double sv = sign_value(s);
  CVec v = u.physical();
  enforce_boundary(g, v, o);
  auto x = g.coordinates();

  // 2 rho = -s beta A, A = int_{-L}^x |u|^2 = mean (x+L) + P(x), P periodic.
  auto split = [&](const RVec& f, RVec& per) {
    RVec A = cumulative_integral(g, f, CumulativeRule::spectral);
    const double mean = period_integral(g, f) / (2.0 * L);
    per.resize(n);
    for (std::size_t k = 0; k < n; ++k) per[k] = A[k] - mean * (x[k] + L);
    return mean;
  };
  RVec d(n), P;
  for (std::size_t k = 0; k < n; ++k) d[k] = std::norm(v[k]);
  const double mean = split(d, P);
  const double kappa = -sv * p.beta * mean;
  RVec eper(n);
  for (std::size_t k = 0; k < n; ++k) eper[k] = std::exp(-sv * p.beta * P[k]);

  ComplexField q = project(u, s, Projection::Q);
  CVec w = derivative(q, 2).physical(), w1 = derivative(q, 3).physical(), w4 = derivative(q, 4).physical();
  CVec n3 = derivative(project(nonlinearity(u, p), s, Projection::Q), 3).physical();
  CVec ut = rhs_regularized(u, p).physical();
  CVec dd = derivative(ComplexField::from_physical(g, CVec(d.begin(), d.end())), 1).physical();

  RVec dtd(n), Pt;
  for (std::size_t k = 0; k < n; ++k) dtd[k] = 2.0 * std::real(std::conj(v[k]) * ut[k]);
  const double mean_t = split(dtd, Pt);

  const cplx lin(p.epsilon, 1.0);
  CVec fe(n), f1(n), f2(n), f3(n), f4(n), f5(n), fl(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double e = eper[k], ww = std::norm(w[k]);
    fe[k] = e * ww;
    f1[k] = -sv * p.beta * Pt[k] * e * ww;
    f2[k] = e * d[k] * w1[k] * std::conj(w[k]);
    f3[k] = e * (-sv * p.beta * dd[k].real() + p.beta * p.beta * d[k] * d[k]) * ww;
    f4[k] = e * std::norm(w1[k]);
    f5[k] = e * n3[k] * std::conj(w[k]);
    fl[k] = e * lin * w4[k] * std::conj(w[k]);
  }
  GaugedRateTerms t;
  const RampIntegrals re = ramp_integrals(g, kappa, fe);
  t.energy = re.plain.real();
  t.T1 = -sv * p.beta * mean_t * re.moment.real() + ramp_integrals(g, kappa, f1).plain.real();
  t.T2 = -2.0 * std::real(cplx(0.0, -sv * p.beta) * ramp_integrals(g, kappa, f2).plain);
  t.T3 = p.epsilon * ramp_integrals(g, kappa, f3).plain.real();
  t.T4 = -2.0 * p.epsilon * ramp_integrals(g, kappa, f4).plain.real();
  t.T5 = 2.0 * ramp_integrals(g, kappa, f5).plain.real();
  t.direct_linear = 2.0 * ramp_integrals(g, kappa, fl).plain.real();
  const double dE = std::exp(kappa * 2.0 * L) - 1.0;  // E(L) - E(-L), E(-L) = 1
  t.B = dE * 2.0 * std::real(lin * w1[0] * std::conj(w[0])) -
        p.epsilon * (-sv * p.beta * d[0]) * dE * std::norm(w[0]);
  return t;
}

struct GaugedRateReport {
  RVec times;
  std::array<RVec, 2> residual;  // indexed plus, minus
  RVec max_residual;
  std::map<std::string, RVec> terms;  // "plus.T1", ..., "minus.ibp_defect"
};

inline GaugedRateReport gauged_energy_rate_check(const TrajectoryRecord& rec, const ModelParams& p,
                                                 const GaugeOptions& o = {}) {
  const double D = sample_spacing(rec);
  const std::size_t m = rec.snapshots.size();
  if (m < kMinStencilSamples) throw Error("gauged energy rate check needs at least 5 samples");
  GaugedRateReport r;
  r.times = rec.times();
  r.max_residual.assign(m, 0.0);
  for (int si = 0; si < 2; ++si) {
    const Sign s = si == 0 ? Sign::plus : Sign::minus;
    const std::string pre = si == 0 ? "plus." : "minus.";
    RVec energy(m), sum(m);
    std::array<RVec, 7> cols;
    for (auto& c : cols) c.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      GaugedRateTerms t = gauged_rate_terms(rec.snapshots[i], p, s, o);
      energy[i] = t.energy;
      sum[i] = t.sum();
      cols[0][i] = t.T1;
      cols[1][i] = t.T2;
      cols[2][i] = t.T3;
      cols[3][i] = t.T4;
      cols[4][i] = t.T5;
      cols[5][i] = t.B;
      cols[6][i] = t.direct_linear - (t.T2 + t.T3 + t.T4 + t.B);
    }
    RVec dE = time_derivative(energy, D);
    r.residual[si].resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      r.residual[si][i] = std::abs(dE[i] - sum[i]);
      r.max_residual[i] = std::max(r.max_residual[i], r.residual[si][i]);
    }
    const char* names[] = {"T1", "T2", "T3", "T4", "T5", "B", "ibp_defect"};
    for (int k = 0; k < 7; ++k) r.terms[pre + names[k]] = std::move(cols[k]);
    r.terms[pre + "energy"] = std::move(energy);
  }
  return r;
}

}  // namespace kdnls
