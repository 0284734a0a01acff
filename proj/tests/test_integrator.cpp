#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "support/oracles.hpp"

using namespace kdnls;
using std::numbers::pi;

namespace {

ModelParams params(double a, double b, double e = 0.0) {
  ModelParams p;
  p.alpha = a;
  p.beta = b;
  p.epsilon = e;
  return p;
}

ComplexField gaussian(const SpectralGrid& g, double amp = 1.0) {
  return ComplexField::from_function(g, [&](double x) { return cplx(amp * std::exp(-0.5 * x * x)); });
}

SolveSpec spec_for(const ComplexField& u0, const ModelParams& p, double dt, double T, int stride = 16,
                   Scheme s = Scheme::etd_rk4) {
  SolveSpec sp;
  sp.initial = u0;
  sp.params = p;
  sp.integ.dt = dt;
  sp.integ.t_end = T;
  sp.integ.dense_output_stride = stride;
  sp.integ.scheme = s;
  return sp;
}

double h2_dist(const ComplexField& a, const ComplexField& b) { return sobolev_norm(a - b, 2.0); }

}  // namespace

TEST(Phi, SeriesMatchesDirectNearBranch) {
  for (cplx z : {cplx(0.9, 0.3), cplx(-0.5, 0.8), cplx(0.0, -0.99)}) {
    EXPECT_LT(std::abs(phi::series(1, z) - (std::exp(z) - 1.0) / z), 1e-14);
    EXPECT_LT(std::abs(phi::series(2, z) - (std::exp(z) - 1.0 - z) / (z * z)), 1e-13);
  }
  EXPECT_LT(std::abs(phi::phi3(cplx(1e-9, 0)) - (1.0 / 6.0 + 1e-9 / 24.0)), 1e-16);
}

TEST(Semigroup, Examples) {
  auto g = make_grid(64, pi);
  auto f = oracle::random_field(g, 20, 1);
  EXPECT_LT(oracle::rel_err(semigroup(f, 0.0, params(1, 1, 0.3)), f), 1e-16);
  EXPECT_NEAR(l2_norm(semigroup(f, 1.7, params(1, 1, 0.0))), l2_norm(f), 1e-13 * l2_norm(f));
  auto e = ComplexField::from_function(g, [](double x) { return std::exp(cplx(0.0, x)); });
  EXPECT_LT(oracle::rel_err(semigroup(e, 1.0, params(0, 0, 0.1)), std::exp(-cplx(0.1, 1.0)) * e), 1e-13);
  EXPECT_THROW(semigroup(f, -0.1, params(0, 0, 0.1)), Error);
  EXPECT_NO_THROW(semigroup(f, -0.1, params(0, 0, 0.0)));
}

TEST(Step, LinearExactness) {
  auto g = make_grid(128, 16.0);
  auto u = dealias(oracle::random_field(g, 42, 3));
  for (double eps : {0.0, 0.4})
    for (Scheme s : {Scheme::etd_rk4, Scheme::ifrk4}) {
      IntegratorConfig ic;
      ic.dt = 0.013;
      ic.scheme = s;
      auto p = params(0, 0, eps);
      EXPECT_LT(oracle::rel_err(step(u, p, ic), semigroup(u, ic.dt, p)), 1e-13);
    }
}

TEST(Step, HeatContraction) {
  auto g = make_grid(128, 16.0);
  auto u = dealias(oracle::random_field(g, 42, 5));
  IntegratorConfig ic;
  ic.dt = 0.01;
  auto p = params(0, 0, 0.2);
  for (int i = 0; i < 5; ++i) {
    auto next = step(u, p, ic);
    EXPECT_LT(l2_norm(next), l2_norm(u) - 1e-13);
    u = next;
  }
}

TEST(Step, GuardRejects) {
  auto g = make_grid(256, 32 * pi);
  auto u = gaussian(g, 3.0);
  IntegratorConfig ic;
  ic.dt = 0.5;
  try {
    step(u, params(1, -1), ic);
    FAIL() << "expected guard violation";
  } catch (const StabilityGuardError& e) {
    EXPECT_LT(e.suggested_dt(), 0.5);
    EXPECT_NEAR(e.suggested_dt(), stable_dt(g, params(1, -1), 9.0, 1.0), 1e-3);
  }
}

TEST(Solve, GlobalOrderFour) {
  auto g = make_grid(1024, 32 * pi);
  auto u0 = gaussian(g);
  auto p = params(1, -1);
  const double T = 0.4;
  for (Scheme s : {Scheme::etd_rk4, Scheme::ifrk4}) {
    auto ref = solve(spec_for(u0, p, 0.0025 / 8, T, 1, s)).final_state();
    RVec err;
    for (double dt : {0.02, 0.01, 0.005, 0.0025}) err.push_back(h2_dist(solve(spec_for(u0, p, dt, T, 1, s)).final_state(), ref));
    const double slope = std::log(err.front() / err.back()) / std::log(8.0);
    EXPECT_GE(slope, 3.5) << "scheme " << static_cast<int>(s);
    EXPECT_LE(slope, 4.5) << "scheme " << static_cast<int>(s);
  }
}

TEST(Solve, PlaneWaveAlphaOnly) {
  // u = c e^{ix} e^{i(alpha |c|^2 - 1) t}
  auto g = make_grid(64, pi);
  const cplx c(0.7, 0.2);
  auto u0 = ComplexField::from_function(g, [&](double x) { return c * std::exp(cplx(0.0, x)); });
  auto p = params(1.5, 0.0);
  auto sp = spec_for(u0, p, 1e-3, 1.0);
  sp.boundary = BoundaryPolicy::ignore;
  auto rec = solve(sp);
  ASSERT_TRUE(rec.ok());
  const double T = rec.final_state().t;
  auto exact = std::exp(cplx(0.0, (1.5 * std::norm(c) - 1.0) * T)) * u0;
  EXPECT_LT(oracle::rel_err(rec.final_state(), exact), 1e-12);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.mode(i) != 1) { EXPECT_LT(std::abs(rec.final_state().coeffs[i]), 1e-13); }
}

TEST(Solve, ZeroDataAndTimes) {
  auto g = make_grid(128, 32 * pi);
  auto rec = solve(spec_for(ComplexField::zeros(g), params(1, -1), 0.01, 0.5));
  ASSERT_TRUE(rec.ok());
  for (auto& s : rec.snapshots) EXPECT_EQ(l2_norm(s), 0.0);
  RVec t = rec.times();
  EXPECT_DOUBLE_EQ(t.back(), 0.5);
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_GT(t[i], t[i - 1]);
  for (auto& s : rec.snapshots) EXPECT_TRUE(is_dealiased(s));
}

TEST(Solve, StepCountHitsEndTime) {
  IntegratorConfig ic;
  ic.dt = 0.003;
  ic.t_end = 0.1;
  ic.dense_output_stride = 16;
  const auto n = planned_steps(ic);
  EXPECT_EQ(n % 16, 0u);
  EXPECT_LE(ic.t_end / n, ic.dt);
}

TEST(Solve, MassMonotoneBySignOfBeta) {
  auto g = make_grid(1024, 32 * pi);
  auto u0 = gaussian(g);
  auto dec = solve(spec_for(u0, params(1, -1), 1e-3, 0.3));
  auto inc = solve(spec_for(u0, params(1, 1), 1e-3, 0.3));
  ASSERT_TRUE(dec.ok());
  ASSERT_TRUE(inc.ok());
  const RVec& md = dec.diagnostics.at("mass");
  const RVec& mi = inc.diagnostics.at("mass");
  for (std::size_t i = 1; i < md.size(); ++i) {
    EXPECT_LE(md[i], md[i - 1]);
    EXPECT_GE(mi[i], mi[i - 1]);
  }
}

TEST(Solve, BitReproducible) {
  auto g = make_grid(256, 32 * pi);
  auto u0 = gaussian(g);
  auto a = solve(spec_for(u0, params(1, -1), 2e-3, 0.2));
  auto b = solve(spec_for(u0, params(1, -1), 2e-3, 0.2));
  ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
  for (std::size_t i = 0; i < a.snapshots.size(); ++i)
    EXPECT_EQ(std::memcmp(a.snapshots[i].coeffs.data(), b.snapshots[i].coeffs.data(),
                          a.snapshots[i].size() * sizeof(cplx)), 0);
}

TEST(Solve, FailureMarkers) {
  auto g = make_grid(1024, 32 * pi);
  auto big = solve(spec_for(gaussian(g, 3.0), params(1, -1), 0.5, 1.0));
  EXPECT_EQ(big.status, RunStatus::guard_violation);
  EXPECT_EQ(big.snapshots.size(), 1u);
  auto wide = ComplexField::from_function(g, [](double x) { return cplx(0.1 * std::exp(-0.5 * (x - 70) * (x - 70))); });
  auto rec = solve(spec_for(wide, params(1, -1), 1e-2, 0.1));
  EXPECT_EQ(rec.status, RunStatus::boundary_mass);
  auto sp = spec_for(wide, params(1, -1), 1e-2, 0.1);
  sp.boundary = BoundaryPolicy::warn;
  auto warned = solve(sp);
  EXPECT_TRUE(warned.ok());
  EXPECT_GT(warned.boundary_warnings, 0u);
}

TEST(Solve, TimeReflectionRoundTrip) {
  // v(t) = R u(T - t) solves the beta -> -beta equation, so running u(T)
  // forward with -beta returns R phi.
  auto g = make_grid(1024, 32 * pi);
  auto phi = ComplexField::from_function(g, [](double x) { return cplx(std::exp(-0.5 * x * x), 0.3 * x * std::exp(-0.5 * x * x)); });
  phi = dealias(phi);
  const double T = 0.2;
  auto fwd = solve(spec_for(phi, params(1, -1), 5e-4, T)).final_state();
  auto back = solve(spec_for(time_reflect(fwd), params(1, 1), 5e-4, T)).final_state();
  EXPECT_LT(oracle::rel_err(back, time_reflect(phi)), 1e-9);
}

TEST(Picard, ZeroData) {
  auto g = make_grid(64, 32 * pi);
  auto r = picard_solve(ComplexField::zeros(g), params(1, -1, 0.5), 0.1, 5, 8);
  for (auto& f : r.fixed_point) EXPECT_EQ(l2_norm(f), 0.0);
  EXPECT_THROW(picard_solve(ComplexField::zeros(g), params(1, -1, 0.0), 0.1, 5, 8), ConfigError);
}

TEST(Picard, ContractionAndAgreementWithStepper) {
  auto g = make_grid(1024, 32 * pi);
  auto phi = dealias(gaussian(g, 0.3));
  auto p = params(1, -1, 0.5);
  const double T = 0.1;
  auto ref = solve(spec_for(phi, p, 1e-4, T)).final_state();
  RVec err;
  for (int M : {16, 32, 64}) {
    auto r = picard_solve(phi, p, T, 40, M);
    EXPECT_FALSE(r.diverged);
    for (std::size_t i = 0; i + 1 < r.ratios.size() && r.distances[i + 1] > 1e-13; ++i) EXPECT_LT(r.ratios[i], 0.8);
    err.push_back(h2_dist(r.fixed_point.back(), ref));
  }
  const double order = std::log(err.front() / err.back()) / std::log(4.0);
  EXPECT_GE(order, 1.8);
}

TEST(RhsJ, ResidualAlongTrajectoryShrinksWithDt) {
  auto g = make_grid(2048, 32 * pi);
  auto phi = dealias(gaussian(g));
  auto p = params(1, -1, 0.0);
  RVec res;
  for (double dt : {2e-3, 1e-3}) {
    auto rec = solve(spec_for(phi, p, dt, 0.1, 2));
    const auto& s = rec.snapshots;
    const std::size_t m = s.size() / 2;
    const double D = s[m + 1].t - s[m].t;
    auto J = [&](std::size_t i) { return apply_J(s[i], s[i].t); };
    auto fd = (1.0 / (12 * D)) * (-1.0 * J(m + 2) + 8.0 * J(m + 1) - 8.0 * J(m - 1) + J(m - 2));
    auto r = rhs_J(s[m], J(m), p, s[m].t);
    res.push_back(l2_norm(fd - r) / l2_norm(r));
  }
  EXPECT_LT(res[1], res[0] / 8);
  EXPECT_LT(res[1], 1e-6);
}
