#pragma once

// KDNLS vector fields
//   u_t = (i + eps) u_xx + d_x N[u],   N[u] = H_ab(|u|^2) u,   H_ab = alpha + beta H

#include <algorithm>
#include <cmath>
#include <complex>

#include "kdnls/spectral/norms.hpp"

namespace kdnls {

struct ModelParams {
  double alpha = 1.0;
  double beta = -1.0;
  double epsilon = 0.0;
  bool dealias = true;

  void validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) throw ConfigError("alpha, beta must be finite");
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in [0,1)");
  }
  bool kdnls_proper() const { return epsilon == 0.0; }
};

inline ComplexField h_alpha_beta(const ComplexField& f, const ModelParams& p) {
  return h_alpha_beta(f, p.alpha, p.beta);
}

namespace detail {

/// Reusable buffers and symbols for repeated evaluation of d_x N on one grid.
class NonlinearEvaluator {
 public:
  NonlinearEvaluator(SpectralGrid g, ModelParams p) : grid_(std::move(g)), params_(p) {
    const std::size_t n = grid_.size();
    hab_.resize(n);
    keep_.assign(n, 1.0);
    ik_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = grid_.wavenumber(i);
      hab_[i] = cplx(p.alpha, -p.beta * cutoff::sgn(xi));
      ik_[i] = cplx(0.0, xi);
      if (p.dealias && std::abs(grid_.mode(i)) > grid_.dealias_cutoff()) keep_[i] = 0.0;
    }
    keep_[grid_.nyquist_slot()] = 0.0;
    phys_.resize(n);
    dens_.resize(n);
  }

  const SpectralGrid& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }

  /// out = P(H_ab(P|u|^2) u) in coefficients; optionally reports sup |u|^2.
  void nonlinearity(std::span<const cplx> u_hat, std::span<cplx> out, double* sup_density = nullptr) {
    grid_.to_physical(u_hat, phys_);
    double sup = 0.0;
    for (std::size_t i = 0; i < phys_.size(); ++i) {
      const double d = std::norm(phys_[i]);
      sup = std::max(sup, d);
      dens_[i] = d;
    }
    if (sup_density) *sup_density = sup;
    grid_.to_spectral(dens_, dens_);
    for (std::size_t i = 0; i < dens_.size(); ++i) dens_[i] *= keep_[i] * hab_[i];
    grid_.to_physical(dens_, dens_);
    for (std::size_t i = 0; i < phys_.size(); ++i) phys_[i] *= dens_[i].real();
    grid_.to_spectral(phys_, out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= keep_[i];
  }

  /// out = d_x P(N[u])
  void dx_nonlinearity(std::span<const cplx> u_hat, std::span<cplx> out, double* sup_density = nullptr) {
    nonlinearity(u_hat, out, sup_density);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= ik_[i];
  }

 private:
  SpectralGrid grid_;
  ModelParams params_;
  CVec hab_, ik_;
  RVec keep_;
  CVec phys_, dens_;
};

inline void maybe_dealias(const ModelParams& p, ComplexField& f) {
  if (p.dealias)
    dealias_in_place(f.grid, f.coeffs);
  else
    f.coeffs[f.grid.nyquist_slot()] = 0.0;
}

/// Pointwise product of two fields formed in physical space.
inline ComplexField product(const ComplexField& a, const ComplexField& b, bool conj_b = false) {
  a.check(b);
  CVec va = a.physical(), vb = b.physical();
  for (std::size_t i = 0; i < va.size(); ++i) va[i] *= conj_b ? std::conj(vb[i]) : vb[i];
  return ComplexField::from_physical(a.grid, va, a.t);
}

}  // namespace detail

/// H_ab(|u|^2) u, dealiased after each product when enabled.
inline ComplexField nonlinearity(const ComplexField& u, const ModelParams& p) {
  detail::NonlinearEvaluator ev(u.grid, p);
  ComplexField out = ComplexField::zeros(u.grid, u.t);
  ev.nonlinearity(u.coeffs, out.coeffs);
  return out;
}

/// (i + eps) u_xx + d_x N[u]
inline ComplexField rhs_regularized(const ComplexField& u, const ModelParams& p) {
  detail::NonlinearEvaluator ev(u.grid, p);
  ComplexField out = ComplexField::zeros(u.grid, u.t);
  ev.dx_nonlinearity(u.coeffs, out.coeffs);
  const cplx lin(p.epsilon, 1.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double xi = u.grid.wavenumber(i);
    out.coeffs[i] -= lin * xi * xi * u.coeffs[i];
  }
  out.coeffs[u.grid.nyquist_slot()] = 0.0;
  return out;
}

/// N[u1] - N[u1 - w], evaluated as written.
inline ComplexField difference_nonlinearity(const ComplexField& u1, const ComplexField& w,
                                            const ModelParams& p) {
  return nonlinearity(u1, p) - nonlinearity(u1 - w, p);
}

/// Right-hand side for w = u1 - u2 where u1 runs at eps1 = p1.epsilon and
/// u2 at eps2 = p2.epsilon <= eps1; alpha, beta are taken from p1.
inline ComplexField rhs_difference(const ComplexField& w, const ComplexField& u1, const ModelParams& p1,
                                   const ModelParams& p2) {
  if (p2.epsilon > p1.epsilon) throw ConfigError("rhs_difference requires eps2 <= eps1");
  w.check(u1);
  ComplexField nt = difference_nonlinearity(u1, w, p1);
  ComplexField out = ComplexField::zeros(w.grid, w.t);
  const double e1 = p1.epsilon, e2 = p2.epsilon;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double xi = w.grid.wavenumber(i);
    out.coeffs[i] = -cplx(e2, 1.0) * xi * xi * w.coeffs[i] - (e1 - e2) * xi * xi * u1.coeffs[i] +
                    cplx(0.0, xi) * nt.coeffs[i];
  }
  out.coeffs[w.grid.nyquist_slot()] = 0.0;
  return out;
}

/// (i + eps) d_x^2 Ju + d_x (J N[u]) - 2 eps u_x - N[u], with
/// J N[u] = H_ab(Ju conj u) u - H_ab(u conj Ju) u + H_ab(|u|^2) Ju.
inline ComplexField rhs_J(const ComplexField& u, const ComplexField& Ju, const ModelParams& p,
                          double /*t*/) {
  u.check(Ju);
  const SpectralGrid& g = u.grid;
  CVec vu = u.physical(), vj = Ju.physical();
  const std::size_t n = g.size();
  CVec cross(n), dens(n);
  for (std::size_t i = 0; i < n; ++i) {
    cross[i] = vj[i] * std::conj(vu[i]) - vu[i] * std::conj(vj[i]);
    dens[i] = std::norm(vu[i]);
  }
  ComplexField fc = ComplexField::from_physical(g, cross), fd = ComplexField::from_physical(g, dens);
  detail::maybe_dealias(p, fc);
  detail::maybe_dealias(p, fd);
  CVec hc = h_alpha_beta(fc, p).physical(), hd = h_alpha_beta(fd, p).physical();
  CVec jn(n), nn(n);
  for (std::size_t i = 0; i < n; ++i) {
    jn[i] = hc[i] * vu[i] + hd[i].real() * vj[i];
    nn[i] = hd[i].real() * vu[i];
  }
  ComplexField fjn = ComplexField::from_physical(g, jn), fn = ComplexField::from_physical(g, nn);
  detail::maybe_dealias(p, fjn);
  detail::maybe_dealias(p, fn);
  ComplexField out = ComplexField::zeros(g, u.t);
  const cplx lin(p.epsilon, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = g.wavenumber(i);
    const cplx ik(0.0, xi);
    out.coeffs[i] = -lin * xi * xi * Ju.coeffs[i] + ik * fjn.coeffs[i] - 2.0 * p.epsilon * ik * u.coeffs[i] -
                    fn.coeffs[i];
  }
  out.coeffs[g.nyquist_slot()] = 0.0;
  return out;
}

/// u(x) -> conj(u(-x)); in coefficients, conjugation at the same wavenumber.
inline ComplexField time_reflect(const ComplexField& u) {
  ComplexField r = u;
  for (auto& c : r.coeffs) c = std::conj(c);
  r.coeffs[u.grid.nyquist_slot()] = 0.0;
  return r;
}

}  // namespace kdnls
