#pragma once

// Brute-force O(n^3) evaluation of the trilinear corrections by summing over
// grid modes, with no FFTs. Used as the oracle for the physical-space forms.

#include <cmath>
#include <complex>
#include <numbers>

#include "kdnls/diagnostics/corrections.hpp"

namespace kdnls::reference {

/// c_j = h/sqrt(2pi) sum_k e^{-i xi_j x_k} f_k by direct summation.
inline CVec direct_forward(const SpectralGrid& g, const CVec& f) {
  const std::size_t n = g.size();
  CVec c(n);
  auto x = g.coordinates();
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += std::exp(cplx(0.0, -g.wavenumber(i) * x[k])) * f[k];
    c[i] = s * g.dx() / std::sqrt(2.0 * std::numbers::pi);
  }
  return c;
}

/// Value at arbitrary x of the trigonometric interpolant with coefficients c.
inline cplx evaluate(const SpectralGrid& g, const CVec& c, double x) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += c[i] * std::exp(cplx(0.0, g.wavenumber(i) * x));
  return s * g.dxi() / std::sqrt(2.0 * std::numbers::pi);
}

// Fourier display of the corrections, summed over grid modes a, b, c with
// xi = a - b + c, sigma = a - b, eta = c - b:
//   2Re sum_pm scale * e^{2it eta sigma} m_pm(xi, sigma) (2i)^{-1} kernel
//          f(a) conj(g(b)) f(c) conj(h_pm(xi)) dxi^3,
// f = e^{it xi^2} u^, g = e^{it xi^2} b^, h = e^{it xi^2} (e^{2 rho} Q d^k c)^.
inline double triple_sum(const ComplexField& u, const ComplexField& b, const ComplexField& c, int k,
                         bool derivative_b, const ModelParams& p, double t, cplx scale) {
  const auto& g = u.grid;
  const long half = static_cast<long>(g.size() / 2) - 1;
  GaugeOptions o;
  o.boundary = BoundaryPolicy::ignore;
  GaugeState gs = gauge_state(u, p, o);
  auto fhat = [&](const ComplexField& f, long j) {
    const double xi = static_cast<double>(j) * g.dxi();
    return std::exp(cplx(0.0, t * xi * xi)) * f.coeffs[g.slot(j)];
  };
  double total = 0.0;
  for (Sign s : {Sign::plus, Sign::minus}) {
    // h by modes -> physical by direct evaluation -> weight -> direct DFT
    CVec hc(g.size(), 0.0);
    for (long j = -half; j <= half; ++j) {
      const double xi = static_cast<double>(j) * g.dxi();
      hc[g.slot(j)] = cutoff::chi(s, xi) * cutoff::rho_high(xi, 1.0) * std::pow(cplx(0.0, xi), k) * c.coeffs[g.slot(j)];
    }
    CVec hv(g.size());
    auto x = g.coordinates();
    const RVec& w = gs.weight(s);
    for (std::size_t i = 0; i < hv.size(); ++i) hv[i] = evaluate(g, hc, x[i]) * w[i] * w[i];
    CVec hh = direct_forward(g, hv);
    cplx acc = 0.0;
    for (long a = -half; a <= half; ++a)
      for (long bb = -half; bb <= half; ++bb)
        for (long cc = -half; cc <= half; ++cc) {
          const long j = a - bb + cc;
          if (std::abs(j) > half) continue;
          const double xi = static_cast<double>(j) * g.dxi();
          const double sigma = static_cast<double>(a - bb) * g.dxi(), eta = static_cast<double>(cc - bb) * g.dxi();
          const cplx m = cutoff::chi(s, xi) * cutoff::rho_high(xi, 1.0) * cplx(p.alpha, -p.beta * cutoff::sgn(sigma));
          const double kernel = derivative_b ? static_cast<double>(bb) * g.dxi() : 1.0;  // xi - eta - sigma = b
          const cplx hx = std::exp(cplx(0.0, t * xi * xi)) * hh[g.slot(j)];
          acc += std::exp(cplx(0.0, 2.0 * t * eta * sigma)) * m / cplx(0.0, 2.0) * kernel * fhat(u, a) *
                 std::conj(fhat(b, bb)) * fhat(u, cc) * std::conj(hx);
        }
    total += 2.0 * std::real(scale * acc * std::pow(g.dxi(), 3));
  }
  return total;
}

/// I_2 through the mode sum, in the given convention.
inline double correction_I2_reference(const ComplexField& u, double t, const ModelParams& p,
                                      CorrectionConvention conv) {
  const cplx scale = conv == CorrectionConvention::physical_space ? cplx(0.0, -0.5 / std::numbers::pi) : cplx(1.0);
  return triple_sum(u, u, u, 2, true, p, t, scale);
}

inline double correction_I11_reference(const ComplexField& u, const ComplexField& Ju, double t,
                                       const ModelParams& p, CorrectionConvention conv) {
  const cplx scale = conv == CorrectionConvention::physical_space ? cplx(0.5 / std::numbers::pi) : cplx(1.0);
  return triple_sum(u, Ju, Ju, 1, false, p, t, scale);
}

}  // namespace kdnls::reference
