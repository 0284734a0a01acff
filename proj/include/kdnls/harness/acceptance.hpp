#pragma once

// The acceptance suite: twelve criteria, each backed by one or more
// experiment reports. Shared by the `acceptance` binary and `kdnls_cli verify`.

#include <chrono>
#include <filesystem>
#include <functional>
#include <sstream>

#include "kdnls/harness/experiments.hpp"

namespace kdnls {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  std::vector<Report> reports;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  RunOptions run;
  bool strict = false;
  std::filesystem::path out;  // empty: do not write reports
  std::function<void(const CriterionResult&)> on_result;
};

namespace acceptance {

inline ExperimentConfig gaussian_run(double t_end, double dt, int stride) {
  ExperimentConfig c;
  c.kind = ExperimentKind::solve;
  c.model.beta = -1.0;
  c.integ.t_end = t_end;
  c.integ.dt = dt;
  c.integ.dense_output_stride = stride;
  c.write_ledger = false;
  c.write_snapshot = false;
  return c;
}

inline std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

inline std::string line_detail(const Report& r, const std::string& line) {
  std::string d = line + " residual " + fmt(r.number("identity." + line + ".residual"));
  if (r.has("identity." + line + ".order")) d += " order " + fmt(r.number("identity." + line + ".order"));
  return d;
}

/// Criterion configurations, in order. Each entry yields the configs its
/// check consumes.
inline std::vector<ExperimentConfig> configs(int id) {
  using std::numbers::pi;
  switch (id) {
    case 1: {
      auto c = gaussian_run(0.2048, 4e-4, 16);
      c.identity_levels = 3;
      c.identity_lines = {"mass"};
      return {c};
    }
    case 2: {
      auto c = gaussian_run(0.5, 1e-4, 50);
      c.kind = ExperimentKind::dissipation_study;
      return {c};
    }
    case 3: {
      auto c = gaussian_run(1.0, 1e-4, 16);
      c.identity_lines = {"h1"};
      return {c};
    }
    case 4: {
      auto c = gaussian_run(0.2048, 4e-4, 16);
      c.n = 2048;
      c.identity_levels = 3;
      c.identity_lines = {"uxx", "rho", "vpm"};
      std::vector<ExperimentConfig> out{c};
      for (double beta : {-1.0, 1.0}) {
        auto w = gaussian_run(0.1, 1e-3, 10);
        w.model.beta = beta;
        w.data.family = DataFamily::plane_wave;
        w.boundary = BoundaryPolicy::ignore;
        w.identity_lines = {"uxx", "vpm"};
        out.push_back(w);
      }
      return out;
    }
    case 5: {
      ExperimentConfig c;
      c.kind = ExperimentKind::corrections_check;
      c.n = 16;
      c.L = 4.0;
      c.model.alpha = 0.7;
      c.model.beta = -0.8;
      c.data.gaussian.a = 0.4;
      c.ensemble.band = 2.0 * pi;
      c.ensemble.decay = 1.0;
      c.corrections_instances = 20;
      return {c};
    }
    case 6: {
      auto c = gaussian_run(1.0, 1e-3, 25);
      c.write_ledger = true;
      return {c};
    }
    case 7: {
      auto c = gaussian_run(0.0, 1e-3, 1);
      c.kind = ExperimentKind::picard;
      c.model.epsilon = 0.5;
      c.data.gaussian.a = 0.1;
      return {c};
    }
    case 8: {
      auto c = gaussian_run(1.0, 1e-3, 10);
      c.kind = ExperimentKind::eps_convergence;
      return {c};
    }
    case 9: {
      auto a = gaussian_run(1.0, 1e-4, 50);
      a.kind = ExperimentKind::lipschitz;
      auto b = a;
      b.model.beta = 1.0;
      b.integ.t_end = 0.1;
      b.integ.dense_output_stride = 10;
      return {a, b};
    }
    case 10: {
      auto c = gaussian_run(2.0, 1e-3, 50);
      c.kind = ExperimentKind::h2_growth;
      c.write_ledger = true;
      return {c};
    }
    case 11: {
      ExperimentConfig c;
      c.kind = ExperimentKind::lemma_bench;
      c.n = 256;
      c.ensemble.count = 200;
      return {c};
    }
    default:
      return {};
  }
}

inline const char* title(int id) {
  static const char* t[] = {"",
                            "mass law converges at fourth order",
                            "sign trichotomy of the L2 norm",
                            "cumulative mass identity",
                            "u_xx and gauged energy identity lines",
                            "normal-form corrections match the mode sum",
                            "modified-energy sandwich",
                            "Picard contraction",
                            "eps-convergence rates",
                            "Lipschitz dependence on data",
                            "H2 growth envelope",
                            "lemma bench stable under refinement",
                            "determinism from embedded configs"};
  return t[id];
}

/// Verdict and one-line detail from the reports of criterion `id`.
inline std::pair<bool, std::string> judge(int id, const std::vector<Report>& rs) {
  auto failed = [&]() -> std::pair<bool, std::string> {
    for (const auto& r : rs)
      if (r.has("error")) return {false, "error: " + r.value("error")};
    return {false, ""};
  };
  if (auto f = failed(); !f.second.empty()) return f;
  const Report& r = rs.front();
  switch (id) {
    case 1: {
      const double res = r.number("identity.mass.residual");
      return {r.pass && res <= 1e-8, line_detail(r, "mass") + " at dt " + fmt(r.number("dt_effective"))};
    }
    case 2: {
      bool ok = r.value("beta_minus.verdict") == "decreasing" && r.value("beta_zero.verdict") == "constant" &&
                r.value("beta_plus.verdict") == "increasing" && r.number("beta_minus.margin") >= 1e-8 &&
                r.number("beta_plus.margin") >= 1e-8 && r.number("beta_zero.relative_drift") <= 1e-10;
      return {ok && r.pass, r.value("beta_minus.verdict") + "/" + r.value("beta_zero.verdict") + "/" +
                                r.value("beta_plus.verdict") + ", margins " + fmt(r.number("beta_minus.margin")) +
                                " " + fmt(r.number("beta_plus.margin")) + ", drift " +
                                fmt(r.number("beta_zero.relative_drift"))};
    }
    case 3: {
      const double d = r.number("identity.h1.residual");
      return {r.pass && d <= 1e-6, "relative deviation " + fmt(d) + " up to t " + fmt(r.number("t_final"))};
    }
    case 4: {
      bool ok = r.pass;
      std::string d = line_detail(r, "uxx") + ", " + line_detail(r, "rho") + ", " + line_detail(r, "vpm");
      for (std::size_t k = 1; k < rs.size(); ++k) {
        const double a = rs[k].number("identity.uxx.residual"), b = rs[k].number("identity.vpm.residual");
        ok = ok && rs[k].pass && a <= 1e-10 && b <= 1e-10;
        d += "; plane wave " + fmt(std::max(a, b));
      }
      return {ok, d};
    }
    case 5:
      return {r.pass, r.value("instances") + " instances, max relative error " + fmt(r.number("max_relative_error"))};
    case 6:
      return {r.pass && r.flag("ledger.sandwich_ok"),
              "C1 " + fmt(r.number("ledger.C1")) + " after " + r.value("ledger.C1_doublings") + " doublings"};
    case 7:
      return {r.pass, "max ratio " + fmt(r.number("max_ratio")) + ", H2 gap " + fmt(r.number("match_h2")) + " at T " +
                          fmt(r.number("T"))};
    case 8:
      return {r.pass, "slopes L2 " + fmt(r.number("slope_l2")) + " H2 " + fmt(r.number("slope_h2")) + " (gamma " +
                          fmt(r.number("gamma")) + ")"};
    case 9: {
      bool ok = true;
      std::string d;
      for (const auto& x : rs) {
        ok = ok && x.pass;
        d += (d.empty() ? "slopes " : ", ") + fmt(x.number("slope"));
      }
      return {ok, d};
    }
    case 10:
      return {r.pass, "C1_fit " + fmt(r.number("C1_fit")) + ", max LHS/envelope " + fmt(r.number("max_ratio"))};
    case 11: {
      double worst = 0.0;
      for (const auto& [k, v] : r.metrics)
        if (k.ends_with(".refinement_change")) worst = std::max(worst, r.number(k));
      return {r.pass, "largest refinement change " + fmt(worst)};
    }
    default:
      return {false, "unknown criterion"};
  }
}

}  // namespace acceptance

inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o = {}) {
  std::vector<CriterionResult> results;
  auto finish = [&](CriterionResult& cr, std::chrono::steady_clock::time_point t0) {
    cr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.strict)
      for (const auto& r : cr.reports)
        if (!r.warnings.empty()) {
          cr.pass = false;
          cr.detail += " [strict: " + r.warnings.front() + "]";
        }
    if (!o.out.empty())
      for (std::size_t k = 0; k < cr.reports.size(); ++k)
        write_report(cr.reports[k], o.out / ("C" + std::to_string(cr.id) + "-" + std::to_string(k)));
    if (o.on_result) o.on_result(cr);
  };
  for (int id = 1; id <= 11; ++id) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult cr;
    cr.id = id;
    cr.title = acceptance::title(id);
    for (const auto& c : acceptance::configs(id)) cr.reports.push_back(run_experiment(c, o.run));
    std::tie(cr.pass, cr.detail) = acceptance::judge(id, cr.reports);
    finish(cr, t0);
    results.push_back(std::move(cr));
  }
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult det;
  det.id = 12;
  det.title = acceptance::title(12);
  std::size_t total = 0, same = 0;
  RunOptions single;
  single.threads = 1;
  for (const auto& cr : results)
    for (const auto& r : cr.reports) {
      ++total;
      if (reproduces(r.render(), single)) ++same;
      else det.detail += "C" + std::to_string(cr.id) + " differs; ";
    }
  det.pass = total > 0 && same == total;
  det.detail += std::to_string(same) + "/" + std::to_string(total) + " reports reproduced bit-exactly";
  finish(det, t0);
  results.push_back(std::move(det));
  return results;
}

inline std::string format_result(const CriterionResult& r) {
  char head[32];
  std::snprintf(head, sizeof head, "C%-2d %s  ", r.id, r.pass ? "PASS" : "FAIL");
  return head + r.title + ": " + r.detail + " (" + acceptance::fmt(r.seconds) + " s)";
}

}  // namespace kdnls
