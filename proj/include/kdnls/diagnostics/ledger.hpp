#pragma once

// Per-sample energy ledger and the H^2 growth envelope fit.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "kdnls/diagnostics/corrections.hpp"
#include "kdnls/diagnostics/identities.hpp"

namespace kdnls {

struct EnergyLedger {
  RVec times;
  std::vector<std::string> columns;  // output order
  std::map<std::string, RVec> values;
  double C1 = 0.0;
  int C1_doublings = 0;
  bool C1_ok = false;

  const RVec& operator[](const std::string& k) const { return values.at(k); }
};

inline const std::vector<std::string>& ledger_columns() {
  static const std::vector<std::string> cols = {
      "l2",      "dx_l2",  "dxx_l2", "d_half_density", "d_three_half_density", "d_five_half_density",
      "gauged_d2", "gauged_d3", "X",   "X_tilde",        "I2",                   "J_l2",
      "dx_J_l2", "I11",    "boundary_mass_fraction"};
  return cols;
}

/// C1 <= 0 selects automatic escalation from 1.
inline EnergyLedger energy_ledger(const TrajectoryRecord& rec, const ModelParams& p, double C1 = 0.0,
                                  const GaugeOptions& o = {}) {
  EnergyLedger L;
  L.times = rec.times();
  L.columns = ledger_columns();
  const std::size_t m = rec.snapshots.size();
  for (const auto& c : L.columns) L.values[c].assign(m, 0.0);
  C1Escalation esc;
  if (C1 > 0.0) {
    for (const auto& u : rec.snapshots) esc.samples.push_back(modified_energy_X(u, u.t, p, C1, o));
    esc.C1 = C1;
    esc.ok = true;
    for (const auto& e : esc.samples) esc.ok = esc.ok && e.sandwich && e.h2_bound;
  } else {
    esc = escalate_C1(rec.snapshots, p, 1.0, 40, o);
  }
  L.C1 = esc.C1;
  L.C1_doublings = esc.doublings;
  L.C1_ok = esc.ok;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& u = rec.snapshots[i];
    ComplexField psi = density(u, p);
    ComplexField ju = apply_J(u, u.t);
    auto set = [&](const char* k, double v) { L.values[k][i] = v; };
    set("l2", l2_norm(u));
    set("dx_l2", homogeneous_norm(u, 1.0));
    set("dxx_l2", homogeneous_norm(u, 2.0));
    set("d_half_density", homogeneous_norm(psi, 0.5));
    set("d_three_half_density", homogeneous_norm(psi, 1.5));
    set("d_five_half_density", homogeneous_norm(psi, 2.5));
    set("gauged_d2", std::sqrt(gauged_energy(u, 2, p, o)));
    set("gauged_d3", std::sqrt(gauged_energy(u, 3, p, o)));
    if (i < esc.samples.size()) {
      set("X", esc.samples[i].X);
      set("X_tilde", esc.samples[i].X_tilde);
      set("I2", esc.samples[i].I2);
    }
    set("J_l2", l2_norm(ju));
    set("dx_J_l2", homogeneous_norm(ju, 1.0));
    set("I11", correction_I11(u, ju, u.t, p, CorrectionConvention::physical_space, o));
    set("boundary_mass_fraction", boundary_mass_fraction(u));
  }
  return L;
}

struct GrowthFit {
  double exponent = 0.0;
  double C1 = 0.0, C2 = 0.0;
  double rms = 0.0;        // least-squares residual of log(LHS)
  double max_ratio = 0.0;  // max LHS / envelope, <= 1 by construction
  bool below_envelope = false;
};

struct H2GrowthReport {
  RVec times, lhs;
  std::vector<GrowthFit> fits;  // exponents 1, 4/3, 2
  const GrowthFit& primary() const { return fits.at(1); }
};

inline constexpr std::size_t kMinGrowthSamples = 20;

/// LHS(t) = ||u_xx(t)||^2 + int_0^t ||D^{5/2}|u|^2||^2. For each exponent p
/// the slope C1 comes from least squares of log LHS against t^p; C2 is then
/// raised until C2 e^{C1 t^p} lies above every sample.
inline H2GrowthReport h2_growth_fit(const TrajectoryRecord& rec, bool dealias = true) {
  const std::size_t m = rec.snapshots.size();
  if (m < kMinGrowthSamples)
    throw Error("h2 growth fit needs at least 20 samples, got " + std::to_string(m));
  const double D = sample_spacing(rec);
  ModelParams p;
  p.dealias = dealias;
  H2GrowthReport r;
  r.times = rec.times();
  RVec diss(m), grad(m);
  for (std::size_t i = 0; i < m; ++i) {
    grad[i] = squared(homogeneous_norm(rec.snapshots[i], 2.0));
    diss[i] = squared(homogeneous_norm(density(rec.snapshots[i], p), 2.5));
  }
  RVec I = cumulative_simpson(diss, D);
  r.lhs.resize(m);
  RVec y(m);
  for (std::size_t i = 0; i < m; ++i) {
    r.lhs[i] = grad[i] + I[i];
    if (!(r.lhs[i] > 0.0)) throw Error("h2 growth fit: left side vanishes");
    y[i] = std::log(r.lhs[i]);
  }
  const double t0 = r.times.front();
  for (double e : {1.0, 4.0 / 3.0, 2.0}) {
    RVec x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = std::pow(r.times[i] - t0, e);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < m; ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
    }
    GrowthFit f;
    f.exponent = e;
    f.C1 = sxy / sxx;
    const double a = my - f.C1 * mx;
    double ss = 0.0, lift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      ss += std::pow(y[i] - a - f.C1 * x[i], 2);
      lift = std::max(lift, y[i] - f.C1 * x[i]);
    }
    f.rms = std::sqrt(ss / m);
    f.C2 = std::exp(lift);
    for (std::size_t i = 0; i < m; ++i) f.max_ratio = std::max(f.max_ratio, r.lhs[i] / (f.C2 * std::exp(f.C1 * x[i])));
    f.below_envelope = f.max_ratio <= 1.0 + 1e-12;
    r.fits.push_back(f);
  }
  return r;
}

}  // namespace kdnls
