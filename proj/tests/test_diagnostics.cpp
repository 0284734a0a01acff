#include <gtest/gtest.h>

#include <cmath>
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

ComplexField plane(const SpectralGrid& g, double k, cplx c) {
  return ComplexField::from_function(g, [&](double x) { return c * std::exp(cplx(0.0, k * x)); });
}

TrajectoryRecord run(const ComplexField& u0, const ModelParams& p, double dt, double T, int stride = 16,
                     BoundaryPolicy b = BoundaryPolicy::abort) {
  SolveSpec sp;
  sp.initial = u0;
  sp.params = p;
  sp.integ.dt = dt;
  sp.integ.t_end = T;
  sp.integ.dense_output_stride = stride;
  sp.boundary = b;
  auto rec = solve(sp);
  EXPECT_TRUE(rec.ok()) << rec.message;
  return rec;
}

GaugeOptions ignore_boundary() {
  GaugeOptions o;
  o.boundary = BoundaryPolicy::ignore;
  return o;
}

using reference::triple_sum;

}  // namespace

TEST(TimeSeries, DerivativeExactOnQuartics) {
  const double D = 0.1;
  RVec f, df;
  for (int i = 0; i < 12; ++i) {
    const double t = i * D;
    f.push_back(t * t * t * t - 2 * t * t * t + t);
    df.push_back(4 * t * t * t - 6 * t * t + 1);
  }
  RVec d = time_derivative(f, D);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(d[i], df[i], 1e-11);
  EXPECT_THROW(time_derivative(RVec(4, 1.0), D), Error);
}

TEST(TimeSeries, CumulativeSimpsonExactness) {
  const double D = 0.25;
  RVec cub, quad;
  for (int i = 0; i < 11; ++i) {
    const double t = i * D;
    cub.push_back(t * t * t - t);
    quad.push_back(3 * t * t + 1);
  }
  RVec Ic = cumulative_simpson(cub, D), Iq = cumulative_simpson(quad, D);
  for (int i = 0; i < 11; ++i) {
    const double t = i * D;
    EXPECT_NEAR(Iq[i], t * t * t + t, 1e-12);
    if (i != 1) {
      EXPECT_NEAR(Ic[i], 0.25 * t * t * t * t - 0.5 * t * t, 1e-12);
    }
  }
}

TEST(TimeSeries, FitOrder) {
  RVec x = {1e-3, 5e-4, 2.5e-4}, y;
  for (double v : x) y.push_back(7.0 * std::pow(v, 4));
  EXPECT_NEAR(fit_order(x, y), 4.0, 1e-12);
}

TEST(MassLaw, TrivialCases) {
  auto g = make_grid(64, pi);
  auto zero = run(ComplexField::zeros(g), params(1, -1), 1e-3, 0.1, 4);
  EXPECT_EQ(max_of(mass_law_residual(zero, params(1, -1))), 0.0);
  auto pw = run(plane(g, 2.0, cplx(0.3, 0.1)), params(1, -1), 1e-3, 0.1, 4, BoundaryPolicy::ignore);
  EXPECT_LT(max_of(mass_law_residual(pw, params(1, -1))), 1e-12);
  EXPECT_LT(mass_dissipation(pw.snapshots.back(), params(1, -1)), 1e-25);
  auto few = run(ComplexField::zeros(g), params(1, -1), 1e-3, 3e-3, 1);
  EXPECT_THROW(mass_law_residual(few, params(1, -1)), Error);
}

TEST(CumulativeIdentity, Contract) {
  auto g = make_grid(64, pi);
  auto zero = run(ComplexField::zeros(g), params(1, -1), 1e-3, 0.1, 4);
  EXPECT_EQ(max_of(h1_cumulative_identity(zero, params(1, -1))), 0.0);
  EXPECT_THROW(h1_cumulative_identity(zero, params(1, 1)), ConfigError);
  EXPECT_THROW(h1_cumulative_identity(zero, params(1, -1, 0.1)), ConfigError);
}

TEST(CumulativeIdentity, GaussianRun) {
  auto g = make_grid(1024, 32 * pi);
  auto rec = run(gaussian(g), params(1, -1), 1e-4, 0.2048);
  EXPECT_LT(max_of(h1_cumulative_identity(rec, params(1, -1))), 1e-6);
}

TEST(UxxIdentity, TrivialCases) {
  auto g = make_grid(64, pi);
  auto p = params(1, -1);
  auto zero = run(ComplexField::zeros(g), p, 1e-3, 0.1, 4);
  EXPECT_EQ(max_of(uxx_identity_residual(zero, p)), 0.0);
  auto pw = run(plane(g, 2.0, cplx(0.3, 0.1)), p, 1e-3, 0.1, 4, BoundaryPolicy::ignore);
  EXPECT_LT(std::abs(uxx_identity_rhs(pw.snapshots[3], p)), 1e-12);
  EXPECT_LT(max_of(uxx_identity_residual(pw, p)), 1e-10);
  EXPECT_THROW(uxx_identity_residual(zero, params(1, -1, 0.1)), ConfigError);
}

TEST(GaugedRate, TrivialCases) {
  auto g = make_grid(64, pi);
  auto o = ignore_boundary();
  auto zero = run(ComplexField::zeros(g), params(1, -1), 1e-3, 0.1, 4);
  EXPECT_EQ(max_of(gauged_energy_rate_check(zero, params(1, -1), o).max_residual), 0.0);
  // beta = 0 and modes |xi| <= 1: every Q-projected term vanishes.
  auto low = ComplexField::from_function(g, [](double x) { return cplx(0.2 * std::cos(x), 0.1); });
  auto t = gauged_rate_terms(low, params(1, 0), Sign::plus, o);
  for (double v : {t.energy, t.T1, t.T2, t.T3, t.T4, t.T5, t.B}) EXPECT_LT(std::abs(v), 1e-15);
}

TEST(GaugedRate, PlaneWaveIsExact) {
  // e^{2 rho} is an exponential ramp; T2 and the boundary flux cancel.
  auto g = make_grid(64, pi);
  auto o = ignore_boundary();
  for (double beta : {-1.0, 1.0}) {
    auto p = params(0.7, beta);
    auto rec = run(plane(g, 2.0, cplx(0.3, 0.1)), p, 1e-3, 0.1, 4, BoundaryPolicy::ignore);
    auto r = gauged_energy_rate_check(rec, p, o);
    EXPECT_LT(max_of(r.max_residual), 1e-10);
    EXPECT_GT(max_of(r.terms.at("plus.T2")), 1e-3);
    EXPECT_LT(max_of(r.terms.at("plus.ibp_defect")), 1e-12);
  }
  // eps > 0: the amplitude decays, so only the time-difference error remains.
  auto p = params(0.7, -1.0, 0.2);
  auto rec = run(plane(g, 2.0, cplx(0.3, 0.1)), p, 5e-4, 0.1, 2, BoundaryPolicy::ignore);
  auto r = gauged_energy_rate_check(rec, p, o);
  EXPECT_LT(max_of(r.max_residual), 1e-8);
  EXPECT_LT(r.terms.at("plus.T4").front(), -1.0);
  EXPECT_LT(max_of(r.terms.at("minus.energy")), 1e-20);
}

TEST(IdentityResiduals, FourthOrderUnderRefinement) {
  // n = 2048 keeps the spectral tail of the cubic term below the time error.
  auto g = make_grid(2048, 32 * pi);
  auto u0 = gaussian(g);
  for (auto p : {params(1, -1), params(1, 1, 0.1)}) {
    std::vector<double> dts, mass, rho, vpm, uxx;
    for (double dt : {4e-4, 2e-4, 1e-4}) {
      auto rec = run(u0, p, dt, 0.2048);
      dts.push_back(rec.dt_effective);
      mass.push_back(max_of(mass_law_residual(rec, p)));
      rho.push_back(max_of(rho_rate_residual(rec, p)));
      vpm.push_back(max_of(gauged_energy_rate_check(rec, p).max_residual));
      if (p.epsilon == 0.0) uxx.push_back(max_of(uxx_identity_residual(rec, p)));
    }
    EXPECT_GE(fit_order(dts, mass), 3.5);
    EXPECT_GE(fit_order(dts, rho), 3.5);
    EXPECT_GE(fit_order(dts, vpm), 3.5);
    if (!uxx.empty()) {
      EXPECT_GE(fit_order(dts, uxx), 3.5);
    }
    EXPECT_LT(mass.back(), 1e-8);
  }
}

TEST(Corrections, TrivialCases) {
  auto g = make_grid(64, 8.0);
  auto o = ignore_boundary();
  auto p = params(1.0, -1.0);
  auto z = ComplexField::zeros(g);
  EXPECT_EQ(correction_I2(z, 0.0, p, CorrectionConvention::physical_space, o), 0.0);
  auto low = ComplexField::from_function(g, [](double x) { return cplx(std::cos(pi * x / 8.0), 0.3); });
  EXPECT_LT(std::abs(correction_I2(low, 0.0, p, CorrectionConvention::physical_space, o)), 1e-14);
  auto u = oracle::random_field(g, 12, 3);
  EXPECT_EQ(correction_I11(u, z, 0.0, p, CorrectionConvention::physical_space, o), 0.0);
  // Q d_x kills a second slot that is also band-limited to |xi| <= 1
  auto low2 = ComplexField::from_function(g, [](double x) { return cplx(0.1, std::sin(pi * x / 8.0)); });
  EXPECT_LT(std::abs(correction_I11(low, low2, 0.0, p, CorrectionConvention::physical_space, o)), 1e-14);
}

TEST(Corrections, MatchTripleSumOracle) {
  auto g = make_grid(16, 4.0);
  auto o = ignore_boundary();
  for (unsigned seed = 1; seed <= 20; ++seed) {
    auto p = params(0.5 + 0.1 * seed, seed % 2 ? -0.8 : 1.1);
    auto u = oracle::random_field(g, 7, seed);
    u *= 0.4;
    auto ju = oracle::random_field(g, 7, 100 + seed);
    const double t = 0.05 * seed;
    const double i2 = correction_I2(u, t, p, CorrectionConvention::physical_space, o);
    const double i2_ref = triple_sum(u, u, u, 2, true, p, t, cplx(0.0, -1.0 / (2 * pi)));
    EXPECT_NEAR(i2, i2_ref, 1e-10 * std::abs(i2_ref));
    const double i2p = correction_I2(u, t, p, CorrectionConvention::fourier_display, o);
    const double i2p_ref = triple_sum(u, u, u, 2, true, p, t, 1.0);
    EXPECT_NEAR(i2p, i2p_ref, 1e-10 * std::abs(i2p_ref));
    const double i11 = correction_I11(u, ju, t, p, CorrectionConvention::physical_space, o);
    const double i11_ref = triple_sum(u, ju, ju, 1, false, p, t, cplx(1.0 / (2 * pi)));
    EXPECT_NEAR(i11, i11_ref, 1e-10 * std::abs(i11_ref));
    const double i11p = correction_I11(u, ju, t, p, CorrectionConvention::fourier_display, o);
    EXPECT_NEAR(i11p, triple_sum(u, ju, ju, 1, false, p, t, 1.0), 1e-10 * std::abs(i11p));
  }
}

TEST(ModifiedEnergy, ZeroAndBetaZero) {
  auto g = make_grid(128, 8.0);
  auto o = ignore_boundary();
  auto e0 = modified_energy_X(ComplexField::zeros(g), 0.0, params(1, -1), 1.0, o);
  EXPECT_EQ(e0.X, 0.0);
  EXPECT_EQ(e0.X_tilde, 0.0);
  EXPECT_THROW(modified_energy_X(ComplexField::zeros(g), 0.0, params(1, -1), 0.0, o), ConfigError);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    auto u = dealias(oracle::random_field(g, 30, seed, 1.0));
    u *= 1.0 / l2_norm(u);
    auto e = modified_energy_X(u, 0.0, params(1, 0), 8.0, o);
    EXPECT_GE(e.X, e.h2_squared);
  }
}

TEST(ModifiedEnergy, SandwichAlongTrajectory) {
  auto g = make_grid(1024, 32 * pi);
  auto p = params(1, -1);
  auto rec = run(gaussian(g), p, 1e-3, 1.0, 25);
  auto esc = escalate_C1(rec.snapshots, p);
  ASSERT_TRUE(esc.ok);
  for (const auto& e : esc.samples) {
    EXPECT_LE(0.5 * e.X, e.X_tilde);
    EXPECT_LE(e.X_tilde, 1.5 * e.X);
    EXPECT_LE(e.h2_squared, e.X_tilde);
  }
}

TEST(H2Growth, PlaneWaveHasNoGrowth) {
  auto g = make_grid(64, pi);
  auto rec = run(plane(g, 2.0, cplx(0.3, 0.1)), params(1, -1), 1e-3, 0.5, 4, BoundaryPolicy::ignore);
  auto fit = h2_growth_fit(rec);
  ASSERT_EQ(fit.fits.size(), 3u);
  EXPECT_NEAR(fit.fits[1].exponent, 4.0 / 3.0, 1e-15);
  for (const auto& f : fit.fits) {
    EXPECT_LT(std::abs(f.C1), 1e-8);
    EXPECT_TRUE(f.below_envelope);
  }
  auto shortrec = run(plane(g, 2.0, cplx(0.3, 0.1)), params(1, -1), 1e-3, 0.04, 4, BoundaryPolicy::ignore);
  EXPECT_THROW(h2_growth_fit(shortrec), Error);
}

TEST(H2Growth, GaussianStaysBelowEnvelope) {
  auto g = make_grid(1024, 32 * pi);
  auto rec = run(gaussian(g), params(1, -1), 1e-3, 1.0, 25);
  auto fit = h2_growth_fit(rec);
  for (const auto& f : fit.fits) {
    EXPECT_TRUE(f.below_envelope);
    EXPECT_LE(f.max_ratio, 1.0 + 1e-12);
    EXPECT_TRUE(std::isfinite(f.C1));
  }
}

TEST(EnergyLedger, ColumnsAndTimes) {
  auto g = make_grid(1024, 32 * pi);
  auto p = params(1, -1);
  auto rec = run(gaussian(g, 0.8), p, 1e-3, 0.2, 25);
  auto L = energy_ledger(rec, p);
  EXPECT_TRUE(L.C1_ok);
  EXPECT_EQ(L.times, rec.times());
  EXPECT_EQ(L.columns.size(), 15u);
  for (const auto& c : L.columns) {
    ASSERT_EQ(L[c].size(), rec.snapshots.size()) << c;
    for (double v : L[c]) EXPECT_TRUE(std::isfinite(v)) << c;
  }
  EXPECT_NEAR(L["l2"][0], std::sqrt(0.64 * std::sqrt(pi)), 1e-12);
  EXPECT_NEAR(L["J_l2"][0], std::sqrt(0.64 * std::sqrt(pi) / 2), 1e-10);  // ||x e^{-x^2/2}||
}
