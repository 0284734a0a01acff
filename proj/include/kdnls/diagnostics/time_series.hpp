#pragma once

// Calculus on uniformly sampled time series: 4th-order differences,
// cumulative Simpson, log-log slopes.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "kdnls/error.hpp"
#include "kdnls/integrator/integrator.hpp"

namespace kdnls {

inline constexpr std::size_t kMinStencilSamples = 5;

/// Uniform spacing of a trajectory's dense samples.
inline double sample_spacing(const TrajectoryRecord& rec) {
  if (rec.snapshots.size() < 2) throw Error("trajectory has fewer than two samples");
  const double D = rec.snapshots[1].t - rec.snapshots[0].t;
  for (std::size_t i = 2; i < rec.snapshots.size(); ++i) {
    const double d = rec.snapshots[i].t - rec.snapshots[i - 1].t;
    if (std::abs(d - D) > 1e-9 * D) throw Error("dense samples are not uniformly spaced");
  }
  return D;
}

/// d/dt by 5-point central differences; one-sided 5-point stencils at the
/// first and last two samples. Fourth order everywhere.
inline RVec time_derivative(std::span<const double> f, double D) {
  const std::size_t m = f.size();
  if (m < kMinStencilSamples)
    throw Error("time derivative needs at least 5 samples, got " + std::to_string(m));
  RVec d(m);
  const double c = 1.0 / (12.0 * D);
  d[0] = c * (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]);
  d[1] = c * (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]);
  for (std::size_t i = 2; i + 2 < m; ++i) d[i] = c * (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]);
  const std::size_t a = m - 1, b = m - 2;
  d[a] = -c * (-25 * f[a] + 48 * f[a - 1] - 36 * f[a - 2] + 16 * f[a - 3] - 3 * f[a - 4]);
  d[b] = -c * (-3 * f[b + 1] - 10 * f[b] + 18 * f[b - 1] - 6 * f[b - 2] + f[b - 3]);
  return d;
}

/// I[i] = int_{t_0}^{t_i} f. Composite Simpson on even counts of intervals;
/// odd counts close with the 3/8 rule, the first interval uses a quadratic fit.
inline RVec cumulative_simpson(std::span<const double> f, double D) {
  const std::size_t m = f.size();
  RVec I(m, 0.0);
  if (m < 2) return I;
  if (m == 2) {
    I[1] = 0.5 * D * (f[0] + f[1]);
    return I;
  }
  I[1] = D / 12.0 * (5 * f[0] + 8 * f[1] - f[2]);
  for (std::size_t i = 2; i < m; i += 2) I[i] = I[i - 2] + D / 3.0 * (f[i - 2] + 4 * f[i - 1] + f[i]);
  for (std::size_t i = 3; i < m; i += 2)
    I[i] = I[i - 3] + 3.0 * D / 8.0 * (f[i - 3] + 3 * f[i - 2] + 3 * f[i - 1] + f[i]);
  return I;
}

/// Least-squares slope of log(y) against log(x).
inline double fit_order(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("fit_order needs two or more matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error("fit_order needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

inline double max_of(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace kdnls
