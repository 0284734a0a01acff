#pragma once

// Ratio tests LHS/RHS (implicit constants set to 1) for the commutator,
// gauge-weight, trilinear and Brezis-Gallouet-Wainger bounds, over seeded
// random band-limited ensembles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "kdnls/gauge/gauge.hpp"
#include "kdnls/util/parallel.hpp"

namespace kdnls {

struct EnsembleSpec {
  std::size_t count = 200;
  double band = 0.0;   // xi_cut; <= 0 means xi_max / 3 of the grid it is resolved on
  double decay = 2.5;  // coefficients damped by <xi>^{-decay}
  std::uint64_t seed = 1;

  void validate() const {
    if (count == 0) throw ConfigError("ensemble must contain at least one sample");
    if (!std::isfinite(band) || !std::isfinite(decay)) throw ConfigError("ensemble band/decay not finite");
  }
  double resolved_band(const SpectralGrid& g) const { return band > 0.0 ? band : g.xi_max() / 3.0; }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Box-Muller on raw mt19937_64 output, so samples do not depend on the
/// standard library's distribution algorithms.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}
  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  double uniform() { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53; }
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace detail

/// Sample k draws its coefficients in mode order 0, 1, -1, 2, -2, ... from a
/// stream seeded by (seed, k), so the same band on a finer grid with the same
/// half-length reproduces the same functions.
inline ComplexField ensemble_sample(const SpectralGrid& g, const EnsembleSpec& spec, std::size_t k) {
  detail::NormalStream ns(detail::splitmix64(spec.seed ^ detail::splitmix64(k)));
  const double band = spec.resolved_band(g);
  const long jmax = std::min(static_cast<long>(std::floor(band / g.dxi() + 1e-9)), static_cast<long>(g.size() / 2) - 1);
  ComplexField f = ComplexField::zeros(g);
  for (long m = 0; m <= 2 * jmax; ++m) {
    const long j = m == 0 ? 0 : (m % 2 ? (m + 1) / 2 : -m / 2);
    const double re = ns.next(), im = ns.next();
    const double xi = j * g.dxi();
    f.coeffs[g.slot(j)] = std::pow(1.0 + xi * xi, -0.5 * spec.decay) * cplx(re, im);
  }
  dealias_in_place(g, f.coeffs);
  const double h2 = sobolev_norm(f, 2.0);
  if (h2 > 0.0) f *= 1.0 / h2;
  return f;
}

inline std::vector<ComplexField> generate_ensemble(const SpectralGrid& g, const EnsembleSpec& spec) {
  spec.validate();
  std::vector<ComplexField> out;
  out.reserve(spec.count);
  for (std::size_t k = 0; k < spec.count; ++k) out.push_back(ensemble_sample(g, spec, k));
  return out;
}

struct RatioReport {
  std::string lemma;
  RVec ratios;
  double max = 0.0, mean = 0.0, q50 = 0.0, q90 = 0.0, q99 = 0.0;
  std::size_t flagged = 0;  // samples whose denominator was floored
  // refinement trend: the same ensemble on a grid with twice the points
  std::size_t n = 0, n_fine = 0;
  double max_fine = 0.0, refinement_change = 0.0;
  bool refined = false;
};

inline double quantile(RVec sorted, double q) {
  if (sorted.empty()) return 0.0;
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline RatioReport summarize(std::string lemma, RVec ratios, std::size_t n = 0, std::size_t flagged = 0) {
  if (ratios.empty()) throw Error("no ratios to summarize for " + lemma);
  RatioReport r;
  r.lemma = std::move(lemma);
  r.n = n;
  r.flagged = flagged;
  double s = 0.0;
  for (double v : ratios) {
    if (!std::isfinite(v) || v < 0.0) throw Error("ratio not finite and nonnegative in " + r.lemma);
    r.max = std::max(r.max, v);
    s += v;
  }
  r.mean = s / static_cast<double>(ratios.size());
  r.q50 = quantile(ratios, 0.5);
  r.q90 = quantile(ratios, 0.9);
  r.q99 = quantile(ratios, 0.99);
  r.ratios = std::move(ratios);
  return r;
}

namespace detail {

inline SpectralGrid padded(const SpectralGrid& g, std::size_t factor) {
  return make_grid(factor * g.size(), g.half_length());
}

}  // namespace detail

/// max_pm ||[Q_pm, f] d_x g|| / (||f||_{H^2} ||g||), products formed alias free.
inline double commutator_ratio(const ComplexField& f, const ComplexField& g) {
  f.check(g);
  const double den = sobolev_norm(f, 2.0) * l2_norm(g);
  if (!(den > 0.0)) throw Error("commutator ratio: zero denominator");
  const SpectralGrid big = detail::padded(f.grid, 2);
  ComplexField F = resample(f, big), G = resample(derivative(g), big);
  ComplexField fg = detail::product(F, G);
  double best = 0.0;
  for (Sign s : {Sign::plus, Sign::minus}) {
    ComplexField c = project(fg, s, Projection::Q) - detail::product(F, project(G, s, Projection::Q));
    best = std::max(best, l2_norm(c));
  }
  return best / den;
}

/// ||f||_inf / (||f||_{H^{1/2}} log^{1/2}(e + ||f_x||) + ||f||_{H^{1/2}}^{1-nu}); the
/// sup is taken on a 4x refined sampling of the interpolant.
inline double bgw_ratio(const ComplexField& f, double nu) {
  if (!(nu > 0.0 && nu < 1.0)) throw ConfigError("bgw ratio needs nu in (0,1)");
  const double h = sobolev_norm(f, 0.5);
  if (!(h > 0.0)) throw Error("bgw ratio: zero field");
  double sup = 0.0;
  for (auto z : resample(f, detail::padded(f.grid, 4)).physical()) sup = std::max(sup, std::abs(z));
  const double rhs = h * std::sqrt(std::log(std::numbers::e + homogeneous_norm(f, 1.0))) + std::pow(h, 1.0 - nu);
  return sup / rhs;
}

inline constexpr double kTrilinearTailTolerance = 1e-12;

/// LHS: ||d^{k+1}N[u] - (2a|u|^2 + bH|u|^2) d^{k+1}u - bH(d^{k+1}u conj u) u
///        - H_ab(u conj d^{k+1}u) u||, RHS: ||u||_{H^1} ||u||_{H^2} ||u||_{H^k}.
/// Every product is exact (4x padding). The exact d^{k+1}N[u] must carry at
/// most 1e-12 of its energy above (2/3) xi_max of u's grid.
inline double trilinear_ratio(const ComplexField& u, int k, const ModelParams& p) {
  if (k != 2 && k != 3) throw ConfigError("trilinear ratio needs k in {2,3}");
  const double den = sobolev_norm(u, 1.0) * sobolev_norm(u, 2.0) * sobolev_norm(u, k);
  if (!(den > 0.0)) throw Error("trilinear ratio: zero denominator");
  const SpectralGrid big = detail::padded(u.grid, 4);
  ComplexField U = resample(u, big);
  ComplexField d = detail::product(U, U, true);
  ComplexField dN = derivative(detail::product(h_alpha_beta(d, p), U), k + 1);
  const double cut = 2.0 / 3.0 * u.grid.xi_max();
  double tail = 0.0, total = 0.0;
  for (std::size_t i = 0; i < dN.size(); ++i) {
    const double e = std::norm(dN.coeffs[i]);
    total += e;
    if (std::abs(big.wavenumber(i)) > cut) tail += e;
  }
  if (total > 0.0 && tail > kTrilinearTailTolerance * total)
    throw ResolutionError("trilinear ratio: d^{k+1}N[u] not resolved (tail fraction " + std::to_string(tail / total) + ")");
  ComplexField Dk = derivative(U, k + 1);
  ComplexField t1 = detail::product(h_alpha_beta(d, 2.0 * p.alpha, p.beta), Dk);
  ComplexField t2 = p.beta * detail::product(hilbert(detail::product(Dk, U, true)), U);
  ComplexField t3 = detail::product(h_alpha_beta(detail::product(U, Dk, true), p), U);
  return l2_norm(dN - t1 - t2 - t3) / den;
}

/// Sup-norm bounds on e^{rho}, d_x e^{rho}, d_x^2 e^{rho} divided by
/// e^{C||u||^2}, e^{C||u||^2}||u||_{H^1}^2 and
/// e^{C||u||^2}(||u||_{H^1}||u||_{H^2} + ||u||_{H^1}^4), C = |beta|/2, max over signs.
struct RhoBoundRatios {
  double sup = 0.0, dx = 0.0, dxx = 0.0;
  bool floored = false;  // some denominator hit machine epsilon
};

inline RhoBoundRatios rho_bound_ratios(const ComplexField& u, const ModelParams& p, const GaugeOptions& o = {}) {
  GaugeState gs = gauge_state(u, p, o);
  CVec v = u.physical(), vx = derivative(u).physical();
  const double M = gs.source_norm, C = 0.5 * std::abs(p.beta);
  const double h1 = sobolev_norm(u, 1.0), h2 = sobolev_norm(u, 2.0);
  const double eps = std::numeric_limits<double>::epsilon();
  const double w = std::exp(C * M);
  double den[3] = {w, w * h1 * h1, w * (h1 * h2 + std::pow(h1, 4))};
  RhoBoundRatios r;
  for (double& d : den)
    if (d < eps) {
      d = eps;
      r.floored = true;
    }
  for (Sign s : {Sign::plus, Sign::minus}) {
    const RVec& e = gs.weight(s);
    const double c = -sign_value(s) * 0.5 * p.beta;
    double s0 = 0, s1 = 0, s2 = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double r1 = c * std::norm(v[i]);
      const double r2 = c * 2.0 * std::real(std::conj(v[i]) * vx[i]);
      s0 = std::max(s0, e[i]);
      s1 = std::max(s1, std::abs(r1 * e[i]));
      s2 = std::max(s2, std::abs((r2 + r1 * r1) * e[i]));
    }
    r.sup = std::max(r.sup, s0 / den[0]);
    r.dx = std::max(r.dx, s1 / den[1]);
    r.dxx = std::max(r.dxx, s2 / den[2]);
  }
  return r;
}

inline const std::vector<double>& bgw_nus() {
  static const std::vector<double> v = {0.1, 0.5, 0.9};
  return v;
}

/// Band used for the trilinear suite: the cubic term must stay below (2/3) xi_max.
inline double trilinear_band(const SpectralGrid& g, double band) { return std::min(band, 2.0 / 9.0 * g.xi_max()); }

/// All suites on one grid. `band` is an absolute xi_cut.
inline std::vector<RatioReport> lemma_suites(const SpectralGrid& g, EnsembleSpec spec, double band,
                                             double tri_band, const ModelParams& p, unsigned threads = 1) {
  spec.validate();
  const std::size_t m = spec.count;
  EnsembleSpec main = spec, tri = spec;
  main.band = band;
  tri.band = tri_band;
  GaugeOptions o;
  o.boundary = BoundaryPolicy::ignore;  // ensemble members fill the box by design
  const std::size_t nb = bgw_nus().size();
  RVec comm(m), t2(m), t3(m), r0(m), r1(m), r2(m), bgw(m * nb);
  std::vector<char> floored(m, 0);
  parallel_for(m, threads, [&](std::size_t i) {
    ComplexField f = ensemble_sample(g, main, i);
    ComplexField h = ensemble_sample(g, main, (i + 1) % m);
    comm[i] = commutator_ratio(f, h);
    for (std::size_t j = 0; j < nb; ++j) bgw[j * m + i] = bgw_ratio(f, bgw_nus()[j]);
    ComplexField u = ensemble_sample(g, tri, i);
    t2[i] = trilinear_ratio(u, 2, p);
    t3[i] = trilinear_ratio(u, 3, p);
    RhoBoundRatios rb = rho_bound_ratios(f, p, o);
    r0[i] = rb.sup;
    r1[i] = rb.dx;
    r2[i] = rb.dxx;
    floored[i] = rb.floored;
  });
  std::size_t nf = 0;
  for (char c : floored) nf += c;
  const std::size_t n = g.size();
  std::vector<RatioReport> out;
  out.push_back(summarize("commutator", comm, n));
  for (std::size_t j = 0; j < nb; ++j) {
    std::string name = "bgw.nu=" + std::to_string(bgw_nus()[j]).substr(0, 3);
    out.push_back(summarize(name, RVec(bgw.begin() + j * m, bgw.begin() + (j + 1) * m), n));
  }
  out.push_back(summarize("trilinear.k=2", t2, n));
  out.push_back(summarize("trilinear.k=3", t3, n));
  out.push_back(summarize("rho.sup", r0, n, nf));
  out.push_back(summarize("rho.dx", r1, n, nf));
  out.push_back(summarize("rho.dxx", r2, n, nf));
  return out;
}

/// Suites at n and 2n (same half-length, seed and absolute band); the fine
/// maxima are folded into the coarse reports.
inline std::vector<RatioReport> lemma_bench(const EnsembleSpec& spec, const ModelParams& p, std::size_t n, double L,
                                            unsigned threads = 1, bool refine = true) {
  const SpectralGrid g = make_grid(n, L);
  const double band = spec.resolved_band(g);
  const double tri = trilinear_band(g, band);
  auto coarse = lemma_suites(g, spec, band, tri, p, threads);
  if (!refine) return coarse;
  auto fine = lemma_suites(make_grid(2 * n, L), spec, band, tri, p, threads);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    auto& c = coarse[i];
    c.refined = true;
    c.n_fine = 2 * n;
    c.max_fine = fine[i].max;
    c.refinement_change = c.max > 0.0 ? std::abs(c.max_fine - c.max) / c.max : (c.max_fine > 0.0 ? 1.0 : 0.0);
  }
  return coarse;
}

}  // namespace kdnls
