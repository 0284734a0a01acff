#pragma once

// Experiment runners. Each is a pure function of its configuration, so a
// report re-run from its embedded config reproduces the same content hash.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "kdnls/diagnostics/diagnostics.hpp"
#include "kdnls/harness/initial_data.hpp"
#include "kdnls/harness/report.hpp"
#include "kdnls/util/parallel.hpp"

namespace kdnls {

struct RunOptions {
  unsigned threads = 1;
};

inline constexpr const char* kTorusCaveat =
    "beta > 0: the periodic box only stands in for the line over short times; boundary mass, high-band "
    "energy and the zero mode are logged, nothing is damped";

inline SolveSpec make_solve_spec(const ExperimentConfig& c, ComplexField init, const ModelParams& p) {
  SolveSpec s;
  s.initial = std::move(init);
  s.params = p;
  s.integ = c.integ;
  s.boundary = c.boundary;
  s.boundary_threshold = c.boundary_threshold;
  s.provenance = config_hash(c);
  return s;
}

/// Solves every spec, fanned out over the worker pool.
inline std::vector<TrajectoryRecord> solve_all(const std::vector<SolveSpec>& specs, const RunOptions& o) {
  std::vector<TrajectoryRecord> out(specs.size());
  parallel_for(specs.size(), o.threads, [&](std::size_t i) { out[i] = solve(specs[i]); });
  return out;
}

/// sup over common dense samples of ||a - b||_{H^s}.
inline double sup_distance(const TrajectoryRecord& a, const TrajectoryRecord& b, double s) {
  const std::size_t m = std::min(a.snapshots.size(), b.snapshots.size());
  double d = 0.0;
  for (std::size_t i = 0; i < m; ++i) d = std::max(d, sobolev_norm(a.snapshots[i] - b.snapshots[i], s));
  return d;
}

/// Share of the energy above xi_max/3.
inline double high_band_fraction(const ComplexField& f) {
  double hi = 0.0, all = 0.0;
  const long cut = static_cast<long>(f.size() / 6);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double e = std::norm(f.coeffs[i]);
    all += e;
    if (std::abs(f.grid.mode(i)) > cut) hi += e;
  }
  return all > 0.0 ? hi / all : 0.0;
}

namespace detail {

inline std::string run_status(const TrajectoryRecord& r) {
  return r.ok() ? "ok" : std::string(to_string(r.status)) + ": " + r.message;
}

inline std::string cell(double v) { return format_double(v); }

inline ComplexField prepared_data(const ExperimentConfig& c) {
  ComplexField phi = initial_data(c);
  if (c.regularize) {
    if (!(c.model.epsilon > 0.0)) throw ConfigError("regularize.apply needs model.epsilon > 0");
    phi = regularize_data(phi, c.model.epsilon, c.lambda);
  }
  return phi;
}

inline double identity_residual(const std::string& line, const TrajectoryRecord& rec, const ExperimentConfig& c) {
  const ModelParams& p = c.model;
  if (line == "mass") return max_of(mass_law_residual(rec, p));
  if (line == "h1") return max_of(h1_cumulative_identity(rec, p));
  if (line == "uxx") return max_of(uxx_identity_residual(rec, p));
  if (line == "rho")
    return std::max(max_of(rho_rate_residual(rec, p, Sign::plus, c.gauge_options(CumulativeRule::spectral))),
                    max_of(rho_rate_residual(rec, p, Sign::minus, c.gauge_options(CumulativeRule::spectral))));
  if (line == "vpm") return max_of(gauged_energy_rate_check(rec, p, c.gauge_options()).max_residual);
  throw ConfigError("unknown identity line " + line);
}

inline void monitors(Report& r, const TrajectoryRecord& rec) {
  Table t{"monitors", {"t", "l2", "boundary_mass_fraction", "high_band_fraction", "zero_mode"}, {}};
  double bmf = 0.0, hb = 0.0;
  for (std::size_t i = 0; i < rec.snapshots.size(); ++i) {
    const auto& u = rec.snapshots[i];
    const double b = rec.diagnostics.at("boundary_mass_fraction")[i], h = high_band_fraction(u);
    bmf = std::max(bmf, b);
    hb = std::max(hb, h);
    t.add(RVec{u.t, l2_norm(u), b, h, std::abs(u.coeffs[0])});
  }
  r.metric("max_boundary_mass_fraction", bmf);
  r.metric("max_high_band_fraction", hb);
  if (!rec.snapshots.empty()) {
    r.metric("zero_mode_initial", std::abs(rec.snapshots.front().coeffs[0]));
    r.metric("zero_mode_final", std::abs(rec.snapshots.back().coeffs[0]));
  }
  r.tables.push_back(std::move(t));
}

inline EnergyLedger ledger_table(Report& r, const TrajectoryRecord& rec, const ExperimentConfig& c) {
  EnergyLedger L = energy_ledger(rec, c.model, c.ledger_C1, c.gauge_options());
  Table t{"ledger", {"t"}, {}};
  for (const auto& col : L.columns) t.columns.push_back(col);
  for (std::size_t i = 0; i < L.times.size(); ++i) {
    RVec row{L.times[i]};
    for (const auto& col : L.columns) row.push_back(L[col][i]);
    t.add(row);
  }
  r.tables.push_back(std::move(t));
  r.metric("ledger.C1", L.C1);
  r.metric("ledger.C1_doublings", static_cast<std::size_t>(L.C1_doublings));
  r.metric("ledger.sandwich_ok", L.C1_ok);
  return L;
}

}  // namespace detail

inline Report run_solve(const ExperimentConfig& c, const RunOptions& o) {
  Report r = start_report(c);
  const ComplexField phi = detail::prepared_data(c);
  std::vector<SolveSpec> specs;
  RVec dts;
  for (int l = 0; l < c.identity_levels; ++l) {
    SolveSpec s = make_solve_spec(c, phi, c.model);
    s.integ.dt = c.integ.dt / std::pow(2.0, l);
    specs.push_back(s);
  }
  auto runs = solve_all(specs, o);
  bool ok = true;
  for (const auto& run : runs) {
    dts.push_back(run.dt_effective);
    ok = ok && run.ok();
  }
  const TrajectoryRecord& fine = runs.back();
  r.metric("status", detail::run_status(fine));
  r.metric("steps", fine.steps);
  r.metric("dt_effective", fine.dt_effective);
  r.metric("samples", fine.snapshots.size());
  if (!fine.snapshots.empty()) {
    const auto& u = fine.snapshots.back();
    r.metric("t_final", u.t);
    r.metric("l2_initial", l2_norm(fine.snapshots.front()));
    r.metric("l2_final", l2_norm(u));
    r.metric("h2_final", sobolev_norm(u, 2.0));
    const std::string snap = snapshot_bytes(u);
    r.metric("final_state_hash", hex64(fnv1a64(snap)));
    if (c.write_snapshot) r.blobs["final.snap"] = snap;
  }
  if (fine.boundary_warnings) r.warnings.push_back("boundary mass above threshold at " +
                                                   std::to_string(fine.boundary_warnings) + " samples");
  detail::monitors(r, fine);
  bool pass = ok;
  if (ok && c.write_ledger) detail::ledger_table(r, fine, c);
  if (ok && !c.identity_lines.empty()) {
    Table t{"identities", {"dt"}, {}};
    for (const auto& l : c.identity_lines) t.columns.push_back(l);
    std::vector<RVec> res(c.identity_lines.size(), RVec(runs.size()));
    for (std::size_t k = 0; k < runs.size(); ++k) {
      RVec row{dts[k]};
      for (std::size_t j = 0; j < c.identity_lines.size(); ++j) {
        res[j][k] = detail::identity_residual(c.identity_lines[j], runs[k], c);
        row.push_back(res[j][k]);
      }
      t.add(row);
    }
    r.tables.push_back(std::move(t));
    for (std::size_t j = 0; j < c.identity_lines.size(); ++j) {
      const std::string& l = c.identity_lines[j];
      r.metric("identity." + l + ".residual", res[j].back());
      if (l == "h1") {
        pass = pass && res[j].back() <= c.h1_tol;
        continue;
      }
      if (runs.size() < 2) continue;
      const bool exact = std::all_of(res[j].begin(), res[j].end(), [](double v) { return v == 0.0; });
      const double order = exact ? std::numeric_limits<double>::infinity() : fit_order(dts, res[j]);
      r.metric("identity." + l + ".order", order);
      pass = pass && order >= c.min_order;
    }
  }
  r.pass = pass;
  return r;
}

inline Report run_picard(const ExperimentConfig& c, const RunOptions&) {
  Report r = start_report(c);
  if (!(c.model.epsilon > 0.0)) throw ConfigError("picard needs model.epsilon > 0");
  const ComplexField phi = detail::prepared_data(c);
  const double window = lemma_a1_window(phi, c.model.epsilon, c.picard_window_mult);
  const double T = c.picard_T > 0.0 ? c.picard_T : window;
  r.metric("window", window);
  r.metric("T", T);
  if (T > window) r.warnings.push_back("picard.T exceeds the existence window");
  PicardResult pr = picard_solve(phi, c.model, T, c.picard_iterations, c.picard_nodes, 2.0);
  Table t{"iterations", {"iteration", "h2_distance", "ratio"}, {}};
  double max_ratio = 0.0;
  for (std::size_t i = 0; i < pr.distances.size(); ++i) {
    const double ratio = i ? pr.ratios[i - 1] : std::numeric_limits<double>::quiet_NaN();
    if (i) max_ratio = std::max(max_ratio, ratio);
    t.add(RVec{static_cast<double>(i + 1), pr.distances[i], ratio});
  }
  r.tables.push_back(std::move(t));
  r.metric("iterations", pr.iterations);
  r.metric("max_ratio", max_ratio);
  r.metric("diverged", pr.diverged);
  r.metric("reached_floor", pr.reached_floor);

  SolveSpec s = make_solve_spec(c, phi, c.model);
  s.integ.t_end = T;
  s.integ.dense_output_stride = c.picard_nodes * c.picard_refine;
  s.integ.dt = T / static_cast<double>(s.integ.dense_output_stride);
  TrajectoryRecord rec = solve(s);
  r.metric("stepped_status", detail::run_status(rec));
  double match = std::numeric_limits<double>::infinity();
  if (rec.ok()) match = sobolev_norm(rec.final_state() - pr.fixed_point.back(), 2.0);
  r.metric("match_h2", match);
  r.pass = !pr.diverged && pr.distances.size() >= 2 && max_ratio <= c.picard_max_ratio && match <= c.picard_match_tol;
  return r;
}

/// decreasing / increasing / constant / non-monotone for an L2 series.
inline std::string monotonicity_verdict(const RVec& l2, double const_tol) {
  if (l2.empty()) return "none";
  const double l0 = l2.front();
  double drift = 0.0;
  for (double v : l2) drift = std::max(drift, std::abs(v - l0));
  if (drift <= const_tol * (l0 > 0.0 ? l0 : 1.0)) return "constant";
  bool dec = true, inc = true;
  for (std::size_t i = 1; i < l2.size(); ++i) {
    dec = dec && l2[i] < l2[i - 1];
    inc = inc && l2[i] > l2[i - 1];
  }
  return dec ? "decreasing" : inc ? "increasing" : "non-monotone";
}

inline Report run_dissipation_study(const ExperimentConfig& c, const RunOptions& o) {
  Report r = start_report(c);
  const ComplexField phi = detail::prepared_data(c);
  const double b0 = std::abs(c.beta0);
  const std::array<double, 3> betas{-b0, 0.0, b0};
  const std::array<const char*, 3> names{"beta_minus", "beta_zero", "beta_plus"};
  const std::array<const char*, 3> expected{"decreasing", "constant", "increasing"};
  std::vector<SolveSpec> specs;
  for (double b : betas) {
    ModelParams p = c.model;
    p.beta = b;
    specs.push_back(make_solve_spec(c, phi, p));
  }
  auto runs = solve_all(specs, o);
  Table t{"l2", {"t", "l2_beta_minus", "l2_beta_zero", "l2_beta_plus"}, {}};
  std::size_t longest = 0;
  for (std::size_t k = 1; k < 3; ++k)
    if (runs[k].snapshots.size() > runs[longest].snapshots.size()) longest = k;
  for (std::size_t i = 0; i < runs[longest].snapshots.size(); ++i) {
    std::vector<std::string> row{detail::cell(runs[longest].snapshots[i].t)};
    for (std::size_t k = 0; k < 3; ++k)
      row.push_back(i < runs[k].snapshots.size() ? detail::cell(l2_norm(runs[k].snapshots[i])) : "");
    t.add(row);
  }
  r.tables.push_back(std::move(t));
  bool pass = true;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& run = runs[k];
    RVec l2;
    for (const auto& u : run.snapshots) l2.push_back(l2_norm(u));
    const std::string pre = names[k];
    r.metric(pre + ".status", detail::run_status(run));
    const std::string v = run.ok() ? monotonicity_verdict(l2, c.const_tol) : "failed";
    r.metric(pre + ".verdict", v);
    std::size_t probe = 0;
    while (probe + 1 < run.snapshots.size() && run.snapshots[probe].t < c.probe_time - 1e-12) ++probe;
    const double margin = l2.empty() ? 0.0 : std::abs(l2[probe] - l2.front());
    double drift = 0.0;
    for (double x : l2) drift = std::max(drift, std::abs(x - l2.front()));
    if (!l2.empty() && l2.front() > 0.0) drift /= l2.front();
    r.metric(pre + ".probe_time", run.snapshots.empty() ? 0.0 : run.snapshots[probe].t);
    r.metric(pre + ".margin", margin);
    r.metric(pre + ".relative_drift", drift);
    const bool consistent = v == expected[k] || v == "constant";
    const bool strict = betas[k] == 0.0 || v == "constant" || margin >= c.margin;
    pass = pass && run.ok() && consistent && strict;
  }
  r.pass = pass;
  return r;
}

inline Report run_eps_convergence(const ExperimentConfig& c, const RunOptions& o) {
  Report r = start_report(c);
  const ComplexField phi = initial_data(c);
  RVec eps = c.eps_ladder;
  eps.push_back(c.eps_reference);
  std::vector<SolveSpec> specs;
  for (double e : eps) {
    ModelParams p = c.model;
    p.epsilon = e;
    specs.push_back(make_solve_spec(c, e > 0.0 ? regularize_data(phi, e, c.lambda) : phi, p));
  }
  auto runs = solve_all(specs, o);
  const TrajectoryRecord& ref = runs.back();
  const double gamma = 1.0 - 2.0 * c.lambda;
  r.metric("reference_eps", c.eps_reference);
  r.metric("reference_status", detail::run_status(ref));
  r.metric("gamma", gamma);
  if (!ref.ok()) {
    r.pass = false;
    return r;
  }
  Table t{"distances", {"eps", "l2_distance", "h2_distance", "status"}, {}};
  RVec d0, d2;
  bool ok = true;
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    ok = ok && runs[i].ok();
    d0.push_back(sup_distance(runs[i], ref, 0.0));
    d2.push_back(sup_distance(runs[i], ref, 2.0));
    t.add({detail::cell(eps[i]), detail::cell(d0.back()), detail::cell(d2.back()), detail::run_status(runs[i])});
  }
  r.tables.push_back(std::move(t));
  RVec ladder(eps.begin(), eps.end() - 1);
  const double s0 = fit_order(ladder, d0), s2 = fit_order(ladder, d2);
  bool monotone = true;
  for (std::size_t i = 1; i < d0.size(); ++i)
    monotone = monotone && d0[i] <= d0[i - 1] * (1.0 + c.eps_monotone_slack) &&
               d2[i] <= d2[i - 1] * (1.0 + c.eps_monotone_slack);
  if (!monotone) r.warnings.push_back("distances are not monotone down the eps ladder");
  r.metric("slope_l2", s0);
  r.metric("slope_h2", s2);
  r.metric("monotone", monotone);
  r.pass = ok && s0 >= 1.0 - c.eps_l2_tol && s2 >= gamma - c.eps_h2_tol;
  return r;
}

inline Report run_lipschitz(const ExperimentConfig& c, const RunOptions& o) {
  Report r = start_report(c);
  const ComplexField phi = detail::prepared_data(c);
  const ComplexField psi = gaussian_field(phi.grid, c.perturbation, std::polar(1.0, c.perturbation_phase));
  const double psi_norm = l2_norm(psi);
  if (!(psi_norm > 0.0)) throw ConfigError("lipschitz perturbation vanishes");
  std::vector<SolveSpec> specs{make_solve_spec(c, phi, c.model)};
  for (double d : c.deltas) specs.push_back(make_solve_spec(c, phi + cplx(d) * psi, c.model));
  auto runs = solve_all(specs, o);
  bool ok = true;
  for (const auto& run : runs) ok = ok && run.ok();
  r.metric("base_status", detail::run_status(runs[0]));
  Table t{"distances", {"delta", "data_l2", "l2_distance", "ratio", "status"}, {}};
  RVec ds, dist;
  double lip = 0.0;
  for (std::size_t i = 0; i < c.deltas.size(); ++i) {
    const double d = c.deltas[i], dd = sup_distance(runs[i + 1], runs[0], 0.0);
    const double ratio = d > 0.0 ? dd / (d * psi_norm) : 0.0;
    t.add({detail::cell(d), detail::cell(d * psi_norm), detail::cell(dd), detail::cell(ratio),
           detail::run_status(runs[i + 1])});
    if (d > 0.0) {
      ds.push_back(d);
      dist.push_back(dd);
      lip = std::max(lip, ratio);
    }
  }
  r.tables.push_back(std::move(t));
  const double slope = fit_order(ds, dist);
  r.metric("slope", slope);
  r.metric("lipschitz_constant", lip);
  r.pass = ok && std::abs(slope - 1.0) <= c.lipschitz_tol;
  return r;
}

inline Report run_h2_growth(const ExperimentConfig& c, const RunOptions&) {
  if (!(c.model.beta < 0.0) || c.model.epsilon != 0.0) throw ConfigError("h2-growth needs beta < 0 and eps = 0");
  Report r = start_report(c);
  TrajectoryRecord rec = solve(make_solve_spec(c, detail::prepared_data(c), c.model));
  r.metric("status", detail::run_status(rec));
  r.metric("samples", rec.snapshots.size());
  if (!rec.ok()) {
    r.pass = false;
    return r;
  }
  detail::monitors(r, rec);
  if (c.write_ledger) detail::ledger_table(r, rec, c);
  H2GrowthReport g = h2_growth_fit(rec, c.model.dealias);
  Table fits{"fits", {"exponent", "C1", "C2", "rms", "max_ratio", "below_envelope"}, {}};
  for (const auto& f : g.fits)
    fits.add({detail::cell(f.exponent), detail::cell(f.C1), detail::cell(f.C2), detail::cell(f.rms),
              detail::cell(f.max_ratio), f.below_envelope ? "true" : "false"});
  r.tables.push_back(std::move(fits));
  Table s{"growth", {"t", "lhs", "envelope_1", "envelope_4_3", "envelope_2"}, {}};
  for (std::size_t i = 0; i < g.times.size(); ++i) {
    RVec row{g.times[i], g.lhs[i]};
    for (const auto& f : g.fits) row.push_back(f.C2 * std::exp(f.C1 * std::pow(g.times[i] - g.times.front(), f.exponent)));
    s.add(row);
  }
  r.tables.push_back(std::move(s));
  const auto& p = g.primary();
  r.metric("C1_fit", p.C1);
  r.metric("C2_fit", p.C2);
  r.metric("fit_exponent", p.exponent);
  r.metric("max_ratio", p.max_ratio);
  r.metric("below_envelope", p.below_envelope);
  r.pass = p.below_envelope;
  return r;
}

inline Report run_lemma_bench(const ExperimentConfig& c, const RunOptions& o) {
  Report r = start_report(c);
  auto reports = lemma_bench(c.seeded_ensemble(), c.model, c.n, c.L, o.threads, c.bench_refine);
  Table t{"lemmas",
          {"lemma", "n", "max", "mean", "q50", "q90", "q99", "flagged", "n_fine", "max_fine", "refinement_change"},
          {}};
  Table s{"ratios", {"sample"}, {}};
  bool pass = true;
  for (const auto& rep : reports) {
    t.add({rep.lemma, std::to_string(rep.n), detail::cell(rep.max), detail::cell(rep.mean), detail::cell(rep.q50),
           detail::cell(rep.q90), detail::cell(rep.q99), std::to_string(rep.flagged), std::to_string(rep.n_fine),
           detail::cell(rep.max_fine), detail::cell(rep.refinement_change)});
    s.columns.push_back(rep.lemma);
    r.metric(rep.lemma + ".max", rep.max);
    if (rep.refined) r.metric(rep.lemma + ".refinement_change", rep.refinement_change);
    pass = pass && std::isfinite(rep.max) && (!rep.refined || rep.refinement_change <= c.bench_max_change);
    if (rep.flagged) r.notes.push_back(rep.lemma + ": " + std::to_string(rep.flagged) + " floored denominators");
  }
  for (std::size_t i = 0; i < c.ensemble.count; ++i) {
    RVec row{static_cast<double>(i)};
    for (const auto& rep : reports) row.push_back(rep.ratios[i]);
    s.add(row);
  }
  r.tables.push_back(std::move(t));
  r.tables.push_back(std::move(s));
  r.pass = pass;
  return r;
}

/// Physical-space corrections against the mode-sum reference on random data.
inline Report run_corrections_check(const ExperimentConfig& c, const RunOptions& o) {
  Report r = start_report(c);
  const SpectralGrid g = c.grid();
  const EnsembleSpec spec = c.seeded_ensemble();
  GaugeOptions go = c.gauge_options();
  go.boundary = BoundaryPolicy::ignore;
  const auto count = static_cast<std::size_t>(c.corrections_instances);
  std::vector<RVec> rows(count);
  parallel_for(count, o.threads, [&](std::size_t k) {
    ComplexField u = ensemble_sample(g, spec, k), ju = ensemble_sample(g, spec, count + k);
    u *= c.data.gaussian.a;
    const double t = 0.05 * static_cast<double>(k + 1);
    RVec row{static_cast<double>(k), t};
    for (auto conv : {CorrectionConvention::physical_space, CorrectionConvention::fourier_display}) {
      row.push_back(correction_I2(u, t, c.model, conv, go));
      row.push_back(reference::correction_I2_reference(u, t, c.model, conv));
      row.push_back(correction_I11(u, ju, t, c.model, conv, go));
      row.push_back(reference::correction_I11_reference(u, ju, t, c.model, conv));
    }
    rows[k] = row;
  });
  Table t{"instances",
          {"instance", "t", "I2", "I2_ref", "I11", "I11_ref", "I2_fourier", "I2_fourier_ref", "I11_fourier",
           "I11_fourier_ref"},
          {}};
  double worst = 0.0;
  for (const auto& row : rows) {
    t.add(row);
    for (std::size_t j = 2; j < row.size(); j += 2) {
      const double ref = row[j + 1];
      const double e = ref != 0.0 ? std::abs(row[j] - ref) / std::abs(ref) : std::abs(row[j]);
      worst = std::max(worst, e);
    }
  }
  r.tables.push_back(std::move(t));
  r.metric("instances", count);
  r.metric("max_relative_error", worst);
  r.pass = worst <= c.corrections_tol;
  return r;
}

/// Validates, runs and wraps numerical failures into a failed report.
/// Configuration errors propagate.
inline Report run_experiment(const ExperimentConfig& c, const RunOptions& o = {}) {
  validate(c);
  Report r;
  try {
    switch (c.kind) {
      case ExperimentKind::solve: r = run_solve(c, o); break;
      case ExperimentKind::picard: r = run_picard(c, o); break;
      case ExperimentKind::dissipation_study: r = run_dissipation_study(c, o); break;
      case ExperimentKind::eps_convergence: r = run_eps_convergence(c, o); break;
      case ExperimentKind::lipschitz: r = run_lipschitz(c, o); break;
      case ExperimentKind::h2_growth: r = run_h2_growth(c, o); break;
      case ExperimentKind::lemma_bench: r = run_lemma_bench(c, o); break;
      case ExperimentKind::corrections_check: r = run_corrections_check(c, o); break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    r = start_report(c);
    r.metric("error", e.what());
    r.pass = false;
  }
  const bool positive = c.model.beta > 0.0 || (c.kind == ExperimentKind::dissipation_study && c.beta0 != 0.0);
  if (positive && c.kind != ExperimentKind::lemma_bench && c.kind != ExperimentKind::corrections_check)
    r.notes.insert(r.notes.begin(), kTorusCaveat);
  return r;
}

/// Re-runs the config embedded in a rendered report; true when the content
/// hash matches.
inline bool reproduces(std::string_view rendered, const RunOptions& o = {}, Report* rerun = nullptr) {
  const ExperimentConfig c = parse_config(embedded_config(rendered));
  Report r = run_experiment(c, o);
  const bool same = r.content_hash() == embedded_value(rendered, "content_hash") &&
                    r.config_hash() == embedded_value(rendered, "config_hash");
  if (rerun) *rerun = std::move(r);
  return same;
}

}  // namespace kdnls
