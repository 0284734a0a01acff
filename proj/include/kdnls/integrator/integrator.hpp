#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "kdnls/gauge/gauge.hpp"
#include "kdnls/integrator/phi.hpp"

namespace kdnls {

/// e^{tau (i + eps) d_x^2}; unitary when eps = 0.
inline ComplexField semigroup(ComplexField f, double tau, const ModelParams& p) {
  if (tau < 0.0 && p.epsilon > 0.0) throw Error("semigroup: negative time with eps > 0");
  const cplx lin(p.epsilon, 1.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double xi = f.grid.wavenumber(i);
    f.coeffs[i] *= std::exp(-tau * lin * xi * xi);
  }
  f.coeffs[f.grid.nyquist_slot()] = 0.0;
  return f;
}

enum class Scheme { etd_rk4, ifrk4 };

struct IntegratorConfig {
  double dt = 1e-4;
  Scheme scheme = Scheme::etd_rk4;
  double t_end = 1.0;
  int dense_output_stride = 16;
  double dt_safety = 1.0;

  void validate() const {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
    if (dense_output_stride < 1) throw ConfigError("dense_output_stride must be >= 1");
    if (!(dt_safety > 0.0 && dt_safety <= 1.0)) throw ConfigError("dt_safety must lie in (0,1]");
  }
};

/// Largest dt allowed by the advection guard for a state with sup |u|^2 = sup_density.
inline double stable_dt(const SpectralGrid& g, const ModelParams& p, double sup_density, double safety) {
  return safety / (g.xi_max() * (1.0 + sup_density * std::max(std::abs(p.alpha), std::abs(p.beta))));
}

/// Fixed-step exponential integrator for one grid, parameter set and dt.
class Stepper {
 public:
  Stepper(const SpectralGrid& g, const ModelParams& p, double dt, Scheme scheme, double safety = 1.0)
      : ev_(g, p), dt_(dt), scheme_(scheme), safety_(safety) {
    const std::size_t n = g.size();
    E_.resize(n);
    E2_.resize(n);
    Q_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);
    const cplx lin(p.epsilon, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = g.wavenumber(i);
      const cplx z = -dt * lin * xi * xi;
      E_[i] = std::exp(z);
      E2_[i] = std::exp(0.5 * z);
      Q_[i] = 0.5 * dt * phi::phi1(0.5 * z);
      const cplx p1 = phi::phi1(z), p2 = phi::phi2(z), p3 = phi::phi3(z);
      f1_[i] = dt * (p1 - 3.0 * p2 + 4.0 * p3);
      f2_[i] = dt * (p2 - 2.0 * p3);
      f3_[i] = dt * (-p2 + 4.0 * p3);
    }
    for (auto* b : {&Nv_, &Na_, &Nb_, &Nc_, &a_, &b_, &c_}) b->resize(n);
  }

  double dt() const { return dt_; }
  const SpectralGrid& grid() const { return ev_.grid(); }

  /// Advances coefficients in place by dt. Throws StabilityGuardError, leaving
  /// v untouched, when the state at the start of the step violates the guard.
  void step(std::span<cplx> v) {
    const std::size_t n = v.size();
    double sup = 0.0;
    ev_.dx_nonlinearity(v, Nv_, &sup);
    last_sup_density_ = sup;
    const double allowed = stable_dt(grid(), ev_.params(), sup, safety_);
    if (dt_ > allowed) throw StabilityGuardError(dt_, allowed);
    if (scheme_ == Scheme::etd_rk4) {
      for (std::size_t i = 0; i < n; ++i) a_[i] = E2_[i] * v[i] + Q_[i] * Nv_[i];
      ev_.dx_nonlinearity(a_, Na_);
      for (std::size_t i = 0; i < n; ++i) b_[i] = E2_[i] * v[i] + Q_[i] * Na_[i];
      ev_.dx_nonlinearity(b_, Nb_);
      for (std::size_t i = 0; i < n; ++i) c_[i] = E2_[i] * a_[i] + Q_[i] * (2.0 * Nb_[i] - Nv_[i]);
      ev_.dx_nonlinearity(c_, Nc_);
      for (std::size_t i = 0; i < n; ++i)
        v[i] = E_[i] * v[i] + f1_[i] * Nv_[i] + 2.0 * f2_[i] * (Na_[i] + Nb_[i]) + f3_[i] * Nc_[i];
    } else {
      const double h = dt_;
      for (std::size_t i = 0; i < n; ++i) a_[i] = E2_[i] * (v[i] + 0.5 * h * Nv_[i]);
      ev_.dx_nonlinearity(a_, Na_);
      for (std::size_t i = 0; i < n; ++i) b_[i] = E2_[i] * v[i] + 0.5 * h * Na_[i];
      ev_.dx_nonlinearity(b_, Nb_);
      for (std::size_t i = 0; i < n; ++i) c_[i] = E_[i] * v[i] + h * E2_[i] * Nb_[i];
      ev_.dx_nonlinearity(c_, Nc_);
      for (std::size_t i = 0; i < n; ++i)
        v[i] = E_[i] * v[i] + h / 6.0 * (E_[i] * Nv_[i] + 2.0 * E2_[i] * (Na_[i] + Nb_[i]) + Nc_[i]);
    }
    v[grid().nyquist_slot()] = 0.0;
  }

  double last_sup_density() const { return last_sup_density_; }

 private:
  detail::NonlinearEvaluator ev_;
  double dt_;
  Scheme scheme_;
  double safety_;
  double last_sup_density_ = 0.0;
  CVec E_, E2_, Q_, f1_, f2_, f3_;
  CVec Nv_, Na_, Nb_, Nc_, a_, b_, c_;
};

/// One step of the configured scheme.
inline ComplexField step(const ComplexField& u, const ModelParams& p, const IntegratorConfig& ic) {
  Stepper s(u.grid, p, ic.dt, ic.scheme, ic.dt_safety);
  ComplexField out = u;
  s.step(out.coeffs);
  out.t = u.t + ic.dt;
  return out;
}

enum class RunStatus { ok, guard_violation, boundary_mass, non_finite };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::guard_violation: return "guard_violation";
    case RunStatus::boundary_mass: return "boundary_mass";
    case RunStatus::non_finite: return "non_finite";
  }
  return "?";
}

struct TrajectoryRecord {
  std::vector<ComplexField> snapshots;
  std::map<std::string, RVec> diagnostics;
  std::string provenance;
  RunStatus status = RunStatus::ok;
  std::string message;
  double dt_effective = 0.0;
  std::size_t steps = 0;
  std::size_t boundary_warnings = 0;

  bool ok() const { return status == RunStatus::ok; }
  RVec times() const {
    RVec t;
    t.reserve(snapshots.size());
    for (const auto& s : snapshots) t.push_back(s.t);
    return t;
  }
  const ComplexField& final_state() const {
    if (snapshots.empty()) throw Error("empty trajectory (" + std::string(to_string(status)) + "): " + message);
    return snapshots.back();
  }
};

struct SolveSpec {
  ComplexField initial;
  ModelParams params;
  IntegratorConfig integ;
  BoundaryPolicy boundary = BoundaryPolicy::abort;
  double boundary_threshold = kDefaultBoundaryThreshold;
  std::string provenance;
};

/// Number of steps: a multiple of the dense stride that lands exactly on t_end
/// with a step no larger than the requested dt.
inline std::size_t planned_steps(const IntegratorConfig& ic) {
  if (ic.t_end == 0.0) return 0;
  const auto stride = static_cast<std::size_t>(ic.dense_output_stride);
  const double blocks = std::ceil(ic.t_end / (ic.dt * static_cast<double>(stride)) - 1e-12);
  return stride * static_cast<std::size_t>(std::max(1.0, blocks));
}

inline TrajectoryRecord solve(const SolveSpec& spec) {
  spec.params.validate();
  spec.integ.validate();
  TrajectoryRecord rec;
  rec.provenance = spec.provenance;
  ComplexField u = spec.initial;
  detail::maybe_dealias(spec.params, u);
  const SpectralGrid& g = u.grid;
  const double t0 = u.t;
  const std::size_t nsteps = planned_steps(spec.integ);
  const double dt = nsteps ? spec.integ.t_end / static_cast<double>(nsteps) : spec.integ.dt;
  rec.dt_effective = dt;
  auto& mass = rec.diagnostics["mass"];
  auto& bmf = rec.diagnostics["boundary_mass_fraction"];

  auto record = [&](const ComplexField& f) -> bool {
    for (auto c : f.coeffs)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        rec.status = RunStatus::non_finite;
        rec.message = "non-finite coefficient at t=" + std::to_string(f.t);
        return false;
      }
    const double frac = boundary_mass_fraction(f);
    if (frac > spec.boundary_threshold && spec.boundary != BoundaryPolicy::ignore) {
      if (spec.boundary == BoundaryPolicy::abort) {
        rec.status = RunStatus::boundary_mass;
        rec.message = BoundaryMassError(frac, spec.boundary_threshold).what();
        return false;
      }
      ++rec.boundary_warnings;
    }
    rec.snapshots.push_back(f);
    const double l2 = l2_norm(f);
    mass.push_back(l2 * l2);
    bmf.push_back(frac);
    return true;
  };

  if (!record(u)) return rec;
  if (nsteps == 0) return rec;
  Stepper stepper(g, spec.params, dt, spec.integ.scheme, spec.integ.dt_safety);
  const auto stride = static_cast<std::size_t>(spec.integ.dense_output_stride);
  for (std::size_t k = 1; k <= nsteps; ++k) {
    try {
      stepper.step(u.coeffs);
    } catch (const StabilityGuardError& e) {
      rec.status = RunStatus::guard_violation;
      rec.message = e.what();
      return rec;
    }
    rec.steps = k;
    u.t = t0 + dt * static_cast<double>(k);
    if (k % stride == 0 && !record(u)) return rec;
  }
  return rec;
}

// Duhamel / Picard iteration on [0, T].

struct PicardResult {
  std::vector<ComplexField> fixed_point;  // last iterate at nodes s_m = m T / M
  RVec distances;                         // sup_m ||u^{n+1}(s_m) - u^n(s_m)||_{H^s}
  RVec ratios;                            // distances[n] / distances[n-1]
  bool diverged = false;
  bool reached_floor = false;
  std::size_t iterations = 0;
};

/// mult * eps * (1 + ||phi||_{H^2} + ||phi||_{H^{1,1}})^{-4}
inline double lemma_a1_window(const ComplexField& phi, double eps, double mult = 1.0) {
  const double s = 1.0 + sobolev_norm(phi, 2.0) + weighted_norm(phi, 1.0, 1.0);
  return mult * eps * std::pow(s, -4.0);
}

inline PicardResult picard_solve(const ComplexField& phi, const ModelParams& p, double T, int n_iter,
                                 int quad_nodes, double norm_s = 2.0) {
  if (!(p.epsilon > 0.0)) throw ConfigError("picard_solve requires eps > 0");
  if (quad_nodes < 1 || n_iter < 1 || !(T > 0.0)) throw ConfigError("picard_solve: bad T/n_iter/nodes");
  const SpectralGrid& g = phi.grid;
  const std::size_t n = g.size();
  const auto M = static_cast<std::size_t>(quad_nodes);
  const double ds = T / static_cast<double>(M);
  std::vector<CVec> E(M + 1, CVec(n));
  const cplx lin(p.epsilon, 1.0);
  for (std::size_t k = 0; k <= M; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = g.wavenumber(i);
      E[k][i] = std::exp(-static_cast<double>(k) * ds * lin * xi * xi);
    }
  ComplexField phi0 = phi;
  detail::maybe_dealias(p, phi0);

  std::vector<CVec> cur(M + 1, CVec(n)), next(M + 1, CVec(n)), F(M + 1, CVec(n));
  for (std::size_t m = 0; m <= M; ++m)
    for (std::size_t i = 0; i < n; ++i) cur[m][i] = E[m][i] * phi0.coeffs[i];

  detail::NonlinearEvaluator ev(g, p);
  RVec wts(n);
  for (std::size_t i = 0; i < n; ++i) wts[i] = std::pow(1.0 + g.wavenumber(i) * g.wavenumber(i), norm_s);
  auto hs = [&](const CVec& a, const CVec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += wts[i] * std::norm(a[i] - b[i]);
    return std::sqrt(g.dxi() * s);
  };
  auto hs0 = [&](const CVec& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += wts[i] * std::norm(a[i]);
    return std::sqrt(g.dxi() * s);
  };

  PicardResult res;
  int streak = 0;
  for (int it = 0; it < n_iter; ++it) {
    for (std::size_t m = 0; m <= M; ++m) ev.dx_nonlinearity(cur[m], F[m]);
    double dist = 0.0, scale = 0.0;
    for (std::size_t m = 0; m <= M; ++m) {
      CVec& out = next[m];
      for (std::size_t i = 0; i < n; ++i) out[i] = E[m][i] * phi0.coeffs[i];
      for (std::size_t k = 0; k <= m && m > 0; ++k) {
        const double w = (k == 0 || k == m) ? 0.5 * ds : ds;
        const CVec& Ek = E[m - k];
        const CVec& Fk = F[k];
        for (std::size_t i = 0; i < n; ++i) out[i] += w * Ek[i] * Fk[i];
      }
      out[g.nyquist_slot()] = 0.0;
      dist = std::max(dist, hs(out, cur[m]));
      scale = std::max(scale, hs0(out));
    }
    std::swap(cur, next);
    res.iterations = static_cast<std::size_t>(it + 1);
    res.distances.push_back(dist);
    if (res.distances.size() >= 2) {
      const double prev = res.distances[res.distances.size() - 2];
      const double r = prev > 0.0 ? dist / prev : 0.0;
      res.ratios.push_back(r);
      streak = r >= 1.0 ? streak + 1 : 0;
      if (streak >= 3) {
        res.diverged = true;
        break;
      }
    }
    if (dist <= 1e-14 * std::max(scale, 1e-300)) {
      res.reached_floor = true;
      break;
    }
  }
  res.fixed_point.reserve(M + 1);
  for (std::size_t m = 0; m <= M; ++m)
    res.fixed_point.emplace_back(g, cur[m], phi.t + static_cast<double>(m) * ds);
  return res;
}

}  // namespace kdnls
