#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support/oracles.hpp"

using namespace kdnls;
using std::numbers::pi;

namespace {

double max_abs_diff(const CVec& a, const CVec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

ComplexField plane(const SpectralGrid& g, double k, cplx amp = 1.0) {
  return ComplexField::from_function(g, [&](double x) { return amp * std::exp(cplx(0.0, k * x)); });
}

}  // namespace

TEST(Grid, WavenumberLadder) {
  auto g = make_grid(8, pi);
  std::vector<double> sorted(g.wavenumbers().begin(), g.wavenumbers().end());
  std::sort(sorted.begin(), sorted.end());
  for (int j = 0; j < 8; ++j) EXPECT_DOUBLE_EQ(sorted[j], j - 4.0);
  EXPECT_DOUBLE_EQ(make_grid(8, 2 * pi).dxi(), 0.5);
  EXPECT_DOUBLE_EQ(make_grid(1024, 32 * pi).xi_max(), 16.0);
  EXPECT_DOUBLE_EQ(g.coordinates()[0], -pi);
  EXPECT_DOUBLE_EQ(g.coordinates()[4], 0.0);
}

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(make_grid(6, 1.0), std::invalid_argument);
  EXPECT_THROW(make_grid(4, 1.0), std::invalid_argument);
  EXPECT_THROW(make_grid(12, 1.0), std::invalid_argument);
  EXPECT_THROW(make_grid(16, 0.0), std::invalid_argument);
  EXPECT_THROW(make_grid(16, -2.0), std::invalid_argument);
}

TEST(Grid, ForwardMatchesDirectSum) {
  auto g = make_grid(32, 3.0);
  auto f = oracle::random_field(g, 15, 7).physical();
  EXPECT_LT(oracle::rel_err(g.to_spectral(f), oracle::direct_forward(g, f)), 1e-13);
}

TEST(Grid, RoundTripAndParseval) {
  auto g = make_grid(256, 32 * pi);
  auto f = oracle::random_field(g, 127, 3);
  CVec phys = f.physical();
  CVec back = g.to_spectral(phys);
  EXPECT_LT(oracle::rel_err(back, f.coeffs), 1e-13);
  const double l2s = l2_norm(f), l2p = l2_norm_physical(g, phys);
  EXPECT_NEAR(l2s, l2p, 1e-13 * l2s);
}

TEST(Grid, InterpolantReproducesSamples) {
  auto g = make_grid(16, 2.0);
  auto f = oracle::random_field(g, 5, 11);
  CVec v = f.physical();
  for (std::size_t k = 0; k < g.size(); ++k)
    EXPECT_LT(std::abs(oracle::evaluate(g, f.coeffs, g.coordinates()[k]) - v[k]), 1e-13);
}

TEST(Grid, InPlaceTransforms) {
  auto g = make_grid(64, 5.0);
  auto f = oracle::random_field(g, 20, 1);
  CVec a = f.coeffs;
  g.to_physical(a, a);
  EXPECT_LT(max_abs_diff(a, f.physical()), 1e-14);
  g.to_spectral(a, a);
  EXPECT_LT(oracle::rel_err(a, f.coeffs), 1e-14);
}

TEST(Multiplier, IdentityZeroAndDerivative) {
  auto g = make_grid(16, pi);
  auto f = oracle::random_field(g, 5, 2);
  auto one = make_symbol(g, [](double) { return cplx(1.0); }, 1.0, "one");
  auto zero = make_symbol(g, [](double) { return cplx(0.0); }, 0.0, "zero");
  f.t = 0.7;
  auto id = apply_multiplier(f, one);
  EXPECT_LT(oracle::rel_err(id, f), 1e-15);
  EXPECT_DOUBLE_EQ(id.t, 0.7);
  EXPECT_EQ(l2_norm(apply_multiplier(f, zero)), 0.0);
  auto e = plane(g, 1.0);
  auto d = apply_multiplier(e, make_symbol(g, [](double xi) { return cplx(0.0, xi); }, 0.0, "ik"));
  EXPECT_LT(max_abs_diff(d.physical(), (cplx(0.0, 1.0) * e).physical()), 1e-13);
}

TEST(Multiplier, GridMismatchRejected) {
  auto g1 = make_grid(16, pi), g2 = make_grid(32, pi);
  EXPECT_THROW(apply_multiplier(ComplexField::zeros(g1), hilbert_symbol(g2)), GridMismatch);
}

TEST(Multiplier, NyquistZeroed) {
  auto g = make_grid(16, pi);
  ComplexField f = ComplexField::zeros(g);
  f.coeffs[g.nyquist_slot()] = 1.0;
  EXPECT_EQ(std::abs(hilbert(f).coeffs[g.nyquist_slot()]), 0.0);
}

TEST(Hilbert, Examples) {
  auto g = make_grid(32, pi);
  auto c = ComplexField::from_function(g, [](double x) { return cplx(std::cos(x)); });
  CVec hs = hilbert(c).physical();
  auto x = g.coordinates();
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(std::abs(hs[k] - std::sin(x[k])), 0.0, 1e-13);
  auto konst = ComplexField::from_function(g, [](double) { return cplx(2.5, -1.0); });
  EXPECT_LT(l2_norm(hilbert(konst)), 1e-13);
  auto e = plane(g, 1.0);
  EXPECT_LT(oracle::rel_err(hilbert(e), cplx(0.0, -1.0) * e), 1e-13);
}

TEST(Hilbert, SquareIsMinusIdentityOffMean) {
  auto g = make_grid(64, 4.0);
  auto f = oracle::random_field(g, 31, 5);
  auto hh = hilbert(hilbert(f));
  ComplexField expect = f;
  expect.coeffs[0] = 0.0;
  expect.coeffs[g.nyquist_slot()] = 0.0;
  EXPECT_LT(oracle::rel_err(hh, -1.0 * expect), 1e-13);
}

TEST(Projection, Examples) {
  auto g = make_grid(32, pi);
  auto e = plane(g, 1.0);
  EXPECT_LT(oracle::rel_err(project(e, Sign::plus, Projection::P), e), 1e-13);
  EXPECT_LT(l2_norm(project(e, Sign::minus, Projection::P)), 1e-13);
  auto g2 = make_grid(64, 8 * pi);  // dxi = 1/8
  auto low = oracle::random_field(g2, 8, 9);  // |xi| <= 1
  EXPECT_EQ(l2_norm(project(low, Sign::plus, Projection::Q)), 0.0);
  EXPECT_EQ(l2_norm(project(low, Sign::minus, Projection::Q)), 0.0);
}

TEST(Projection, QHilbertIdentity) {
  auto g = make_grid(128, 16.0);
  auto f = oracle::random_field(g, 63, 21);
  for (Sign s : {Sign::plus, Sign::minus}) {
    auto lhs = project(hilbert(f), s, Projection::Q);
    auto rhs = cplx(0.0, -sign_value(s)) * project(f, s, Projection::Q);
    EXPECT_LT(max_abs_diff(lhs.coeffs, rhs.coeffs), 1e-13 * l2_norm(f));
  }
}

TEST(Cutoff, SupportAndSmoothness) {
  EXPECT_EQ(cutoff::rho(0.0), 1.0);
  EXPECT_EQ(cutoff::rho(1.0), 1.0);
  EXPECT_EQ(cutoff::rho(-1.0), 1.0);
  EXPECT_EQ(cutoff::rho(2.0), 0.0);
  EXPECT_EQ(cutoff::rho(2.5), 0.0);
  EXPECT_NEAR(cutoff::rho(1.5), 0.5, 1e-15);
  for (double x = 1.0; x < 2.0; x += 0.01) EXPECT_GE(cutoff::rho(x), cutoff::rho(x + 0.01));
}

TEST(LittlewoodPaley, LowPassKeepsLowBand) {
  auto g = make_grid(256, 8 * pi);  // dxi = 1/8
  auto f = oracle::random_field(g, 32, 4);  // |xi| <= 4
  EXPECT_LT(oracle::rel_err(low_pass(f, 4.0), f), 1e-15);
}

TEST(LittlewoodPaley, DisjointPieces) {
  auto g = make_grid(256, 8 * pi);
  auto f = oracle::random_field(g, 127, 8);
  EXPECT_LT(l2_norm(littlewood_paley(littlewood_paley(f, 1.0), 4.0)), 1e-15);
  EXPECT_LT(l2_norm(littlewood_paley(littlewood_paley(f, 0.5), 8.0)), 1e-15);
}

TEST(LittlewoodPaley, PartitionOfUnity) {
  auto g = make_grid(512, 8 * pi);
  auto f = oracle::random_field(g, 255, 12);
  const double N0 = 0.25;
  ComplexField sum = low_pass(f, N0);
  for (double N = 2 * N0; N <= 4 * g.xi_max(); N *= 2) sum += littlewood_paley(f, N);
  ComplexField expect = f;
  expect.coeffs[g.nyquist_slot()] = 0.0;
  EXPECT_LT(oracle::rel_err(sum, expect), 1e-12);
  EXPECT_LT(oracle::rel_err(low_pass(f, 2.0) + high_pass(f, 2.0), expect), 1e-14);
}

TEST(Multiplier, OperatorsCommute) {
  auto g = make_grid(128, 10.0);
  auto f = oracle::random_field(g, 63, 17);
  auto a = project(hilbert(littlewood_paley(f, 2.0)), Sign::plus, Projection::Q);
  auto b = littlewood_paley(hilbert(project(f, Sign::plus, Projection::Q)), 2.0);
  EXPECT_LT(max_abs_diff(a.coeffs, b.coeffs), 1e-13 * l2_norm(f));
  auto c = fractional_derivative(derivative(f, 2), 0.5);
  auto d = derivative(fractional_derivative(f, 0.5), 2);
  EXPECT_LT(oracle::rel_err(c, d), 1e-13);
}

TEST(FractionalDerivative, Examples) {
  auto g = make_grid(32, pi);
  auto e1 = plane(g, 1.0), e2 = plane(g, 2.0);
  EXPECT_LT(oracle::rel_err(fractional_derivative(e1, 0.5), e1), 1e-13);
  EXPECT_LT(oracle::rel_err(fractional_derivative(e2, 0.5), std::sqrt(2.0) * e2), 1e-13);
  EXPECT_LT(oracle::rel_err(fractional_derivative(e1, 2.0, DerivativeKind::inhomogeneous), 2.0 * e1), 1e-13);
}

TEST(FractionalDerivative, NegativeHomogeneousNeedsZeroMean) {
  auto g = make_grid(32, pi);
  auto c = ComplexField::from_function(g, [](double x) { return cplx(1.0 + std::cos(x)); });
  EXPECT_THROW(fractional_derivative(c, -0.5), Error);
  auto z = ComplexField::from_function(g, [](double x) { return cplx(std::cos(x)); });
  EXPECT_NO_THROW(fractional_derivative(z, -0.5));
}

TEST(Norms, Examples) {
  auto g = make_grid(32, pi);
  EXPECT_EQ(sobolev_norm(ComplexField::zeros(g), 3.0), 0.0);
  EXPECT_NEAR(l2_norm(plane(g, 1.0)), std::sqrt(2 * pi), 1e-13);
  auto f = oracle::random_field(g, 10, 2);
  EXPECT_DOUBLE_EQ(weighted_norm(f, 0.0, 0.0), l2_norm(f));
}

TEST(Norms, GaussianH1MatchesClosedForm) {
  // ||e^{-x^2/2}||_{H^1}^2 = int e^{-x^2} + int x^2 e^{-x^2} = (3/2) sqrt(pi)
  auto g = make_grid(1024, 32 * pi);
  auto f = ComplexField::from_function(g, [](double x) { return cplx(std::exp(-0.5 * x * x)); });
  EXPECT_NEAR(sobolev_norm(f, 1.0), std::sqrt(1.5 * std::sqrt(pi)), 1e-10);
  // ||<x> e^{-x^2/2}||^2 = (3/2) sqrt(pi) as well
  EXPECT_NEAR(weighted_norm(f, 0.0, 1.0), std::sqrt(1.5 * std::sqrt(pi)), 1e-10);
  EXPECT_NEAR(homogeneous_norm(f, 1.0), std::sqrt(0.5 * std::sqrt(pi)), 1e-10);
}

TEST(Norms, BoundaryMassFraction) {
  auto g = make_grid(1024, 32 * pi);
  auto f = ComplexField::from_function(g, [](double x) { return cplx(std::exp(-0.5 * x * x)); });
  EXPECT_LT(boundary_mass_fraction(f), 1e-25);
  auto wide = ComplexField::from_function(g, [](double x) { return cplx(std::exp(-0.5 * (x - 70.0) * (x - 70.0))); });
  EXPECT_GT(boundary_mass_fraction(wide), 0.5);
}

TEST(ApplyJ, Examples) {
  auto g = make_grid(1024, 32 * pi);
  auto f = ComplexField::from_function(g, [](double x) { return cplx(std::exp(-0.5 * x * x), 0.3 * x * std::exp(-0.5 * x * x)); });
  CVec j0 = apply_J(f, 0.0).physical(), v = f.physical();
  auto x = g.coordinates();
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_LT(std::abs(j0[k] - x[k] * v[k]), 1e-12);
  // plane wave: x e^{ix} is not periodic, compare the 2it d_x part alone
  auto gp = make_grid(32, pi);
  auto e = plane(gp, 1.0);
  const double t = 0.37;
  CVec je = apply_J(e, t).physical(), ve = e.physical();
  ComplexField xe = ComplexField::from_function(gp, [](double x) { return x * std::exp(cplx(0.0, x)); });
  xe.coeffs[gp.nyquist_slot()] = 0.0;
  CVec xev = xe.physical();
  for (std::size_t k = 0; k < gp.size(); ++k) EXPECT_LT(std::abs(je[k] - (xev[k] - 2.0 * t * ve[k])), 1e-12);
}

TEST(ApplyJ, LeibnizRule) {
  auto g = make_grid(1024, 32 * pi);
  auto f = oracle::random_windowed(g, 4, 2.0, 31, 1.5);
  auto h = oracle::random_windowed(g, 4, 2.0, 32, 1.5);
  const double t = 0.8;
  CVec vf = f.physical(), vh = h.physical();
  CVec prod(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) prod[k] = vf[k] * vh[k];
  auto fh = ComplexField::from_physical(g, prod);
  CVec lhs = apply_J(fh, t).physical();
  CVec dfv = derivative(f).physical(), jh = apply_J(h, t).physical();
  CVec rhs(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) rhs[k] = cplx(0.0, 2.0 * t) * dfv[k] * vh[k] + vf[k] * jh[k];
  EXPECT_LT(oracle::rel_err(lhs, rhs), 1e-11);
}

TEST(ApplyJ, CommutatorWithSecondDerivative) {
  auto g = make_grid(512, 32 * pi);
  auto f = oracle::random_windowed(g, 5, 2.0, 41, 2.0);
  const double t = 0.5;
  auto lhs = apply_J(derivative(f, 2), t) - derivative(apply_J(f, t), 2);
  EXPECT_LT(oracle::rel_err(lhs, -2.0 * derivative(f, 1)), 1e-11);
}

TEST(ApplyJ, CheckedFlagsBoundaryMass) {
  auto g = make_grid(256, 32 * pi);
  auto wide = ComplexField::from_function(g, [](double x) { return cplx(std::exp(-0.5 * (x - 60.0) * (x - 60.0))); });
  EXPECT_TRUE(apply_J_checked(wide, 0.1).warning);
  auto narrow = ComplexField::from_function(g, [](double x) { return cplx(std::exp(-0.5 * x * x)); });
  EXPECT_FALSE(apply_J_checked(narrow, 0.1).warning);
}

TEST(Field, DealiasZeroesTopThird) {
  auto g = make_grid(64, 3.0);
  auto f = dealias(oracle::random_field(g, 31, 6));
  EXPECT_TRUE(is_dealiased(f));
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::abs(g.mode(i)) > 21) { EXPECT_EQ(f.coeffs[i], cplx(0.0)); }
  EXPECT_NE(f.coeffs[g.slot(21)], cplx(0.0));
}

TEST(Field, ResampleKeepsFunction) {
  auto g1 = make_grid(64, 10.0), g2 = make_grid(128, 10.0);
  auto f = oracle::random_field(g1, 20, 3);
  auto r = resample(f, g2);
  for (double x : {-3.3, 0.1, 7.9}) EXPECT_LT(std::abs(oracle::evaluate(g1, f.coeffs, x) - oracle::evaluate(g2, r.coeffs, x)), 1e-12);
}
