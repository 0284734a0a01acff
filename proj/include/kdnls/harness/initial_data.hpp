#pragma once

#include <cmath>

#include "kdnls/harness/config.hpp"
#include "kdnls/spectral/multiplier.hpp"

namespace kdnls {

inline ComplexField gaussian_field(const SpectralGrid& g, const GaussianSpec& s, cplx phase = 1.0) {
  return ComplexField::from_function(g, [&](double x) {
    const double y = (x - s.x0) / s.width;
    return phase * s.a * std::exp(cplx(-0.5 * y * y, s.k0 * x));
  });
}

/// Smooth low-pass of the data at N = eps^{-lambda}.
inline ComplexField regularize_data(const ComplexField& phi, double eps, double lambda) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("regularize_data: eps must lie in (0,1)");
  if (!(lambda > 0.0 && lambda < 0.5)) throw ConfigError("regularize_data: lambda must lie in (0,1/2)");
  return low_pass(phi, std::pow(eps, -lambda));
}

/// Data for the configured family, before any regularization. The random
/// family is ensemble sample `data.index` scaled by `data.a`.
inline ComplexField initial_data(const ExperimentConfig& c) {
  const SpectralGrid g = c.grid();
  switch (c.data.family) {
    case DataFamily::gaussian:
      return gaussian_field(g, c.data.gaussian);
    case DataFamily::plane_wave:
      return ComplexField::from_function(g, [&](double x) { return c.data.c * std::exp(cplx(0.0, c.data.k * x)); });
    case DataFamily::random: {
      ComplexField f = ensemble_sample(g, c.seeded_ensemble(), c.data.index);
      f *= c.data.gaussian.a;
      return f;
    }
    case DataFamily::file: {
      ComplexField f;
      try {
        f = read_snapshot(c.data.path);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("data.path: ") + e.what());
      }
      if (f.size() != c.n || f.grid.half_length() != c.L)
        throw ConfigError("data.path: snapshot grid (" + std::to_string(f.size()) + ", " +
                          format_double(f.grid.half_length()) + ") differs from grid.n/grid.L");
      f = ComplexField(g, f.coeffs, f.t);
      return f;
    }
  }
  throw ConfigError("unknown data family");
}

}  // namespace kdnls
