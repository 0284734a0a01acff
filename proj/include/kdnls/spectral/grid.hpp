#pragma once

// Periodic truncation of the real line and the FFT plans that live on it.
//
// Coefficients follow the continuous convention
//   f^(xi) = (2 pi)^{-1/2} \int e^{-i x xi} f(x) dx
// discretised on x_k = -L + 2Lk/n, so that
//   c_j   = h/sqrt(2 pi) * sum_k e^{-i xi_j x_k} f_k,       h   = 2L/n
//   f_k   = dxi/sqrt(2 pi) * sum_j e^{ i xi_j x_k} c_j,      dxi = pi/L
// and h * sum |f_k|^2 == dxi * sum |c_j|^2 exactly.
// Coefficient arrays use FFT order: slot i holds mode j = i for i < n/2 and
// j = i - n otherwise.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "kdnls/error.hpp"

namespace kdnls {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

inline fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
inline fftw_complex* as_fftw(const cplx* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p));
}

// Immutable after construction; fftw_execute_dft is safe to call concurrently.
class FftPlans {
 public:
  explicit FftPlans(std::size_t n) {
    std::lock_guard lock(fftw_planner_mutex());
    CVec a(n), b(n);
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_out_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
    bwd_out_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
    fwd_in_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(a.data()), FFTW_FORWARD, flags);
    bwd_in_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(a.data()), FFTW_BACKWARD, flags);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
  ~FftPlans() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_out_);
    fftw_destroy_plan(bwd_out_);
    fftw_destroy_plan(fwd_in_);
    fftw_destroy_plan(bwd_in_);
  }

  void forward(const cplx* in, cplx* out) const {
    if (in == out)
      fftw_execute_dft(fwd_in_, as_fftw(out), as_fftw(out));
    else
      fftw_execute_dft(fwd_out_, as_fftw(in), as_fftw(out));
  }
  void backward(const cplx* in, cplx* out) const {
    if (in == out)
      fftw_execute_dft(bwd_in_, as_fftw(out), as_fftw(out));
    else
      fftw_execute_dft(bwd_out_, as_fftw(in), as_fftw(out));
  }

 private:
  fftw_plan fwd_out_{}, bwd_out_{}, fwd_in_{}, bwd_in_{};
};

struct GridData {
  std::size_t n;
  double half_length;
  RVec wavenumbers;  // FFT order
  RVec coordinates;
  FftPlans plans;

  GridData(std::size_t n_points, double L) : n(n_points), half_length(L), plans(n_points) {
    const double dxi = std::numbers::pi / L;
    const double h = 2.0 * L / static_cast<double>(n);
    wavenumbers.resize(n);
    coordinates.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const long j = i < n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
      wavenumbers[i] = dxi * static_cast<double>(j);
      coordinates[i] = -L + h * static_cast<double>(i);
    }
  }
};

}  // namespace detail

class SpectralGrid {
 public:
  SpectralGrid() = default;

  std::size_t size() const { return data_->n; }
  double half_length() const { return data_->half_length; }
  double dxi() const { return std::numbers::pi / data_->half_length; }
  double dx() const { return 2.0 * data_->half_length / static_cast<double>(data_->n); }
  /// Magnitude of the Nyquist wavenumber, (pi/L) n/2.
  double xi_max() const { return dxi() * static_cast<double>(data_->n / 2); }

  std::span<const double> wavenumbers() const { return data_->wavenumbers; }
  std::span<const double> coordinates() const { return data_->coordinates; }
  double wavenumber(std::size_t i) const { return data_->wavenumbers[i]; }
  long mode(std::size_t i) const {
    return i < data_->n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(data_->n);
  }
  /// FFT-order slot of signed mode j.
  std::size_t slot(long j) const {
    const auto n = static_cast<long>(data_->n);
    return static_cast<std::size_t>(((j % n) + n) % n);
  }
  std::size_t nyquist_slot() const { return data_->n / 2; }
  /// Largest |j| kept by the 2/3 rule: |xi| <= (2/3) xi_max.
  long dealias_cutoff() const { return static_cast<long>(data_->n / 3); }

  bool operator==(const SpectralGrid& other) const {
    return data_ == other.data_ ||
           (data_->n == other.data_->n && data_->half_length == other.data_->half_length);
  }

  /// Values at the coordinates from coefficients. `out` may alias `in`.
  void to_physical(std::span<const cplx> in, std::span<cplx> out) const {
    const std::size_t n = size();
    const double scale = dxi() / std::sqrt(2.0 * std::numbers::pi);
    // e^{i xi_j x_k} = (-1)^j e^{2 pi i jk/n}
    for (std::size_t i = 0; i < n; ++i) out[i] = (i & 1U) ? -in[i] * scale : in[i] * scale;
    data_->plans.backward(out.data(), out.data());
  }

  /// Coefficients from values at the coordinates. `out` may alias `in`.
  void to_spectral(std::span<const cplx> in, std::span<cplx> out) const {
    const std::size_t n = size();
    const double scale = dx() / std::sqrt(2.0 * std::numbers::pi);
    data_->plans.forward(in.data(), out.data());
    for (std::size_t i = 0; i < n; ++i) out[i] *= (i & 1U) ? -scale : scale;
  }

  CVec to_physical(std::span<const cplx> in) const {
    CVec out(size());
    to_physical(in, out);
    return out;
  }
  CVec to_spectral(std::span<const cplx> in) const {
    CVec out(size());
    to_spectral(in, out);
    return out;
  }

 private:
  explicit SpectralGrid(std::shared_ptr<const detail::GridData> d) : data_(std::move(d)) {}
  friend SpectralGrid make_grid(std::size_t n_points, double half_length);

  std::shared_ptr<const detail::GridData> data_;
};

/// Builds the grid on [-L, L) with `n_points` nodes (a power of two, at least 8).
inline SpectralGrid make_grid(std::size_t n_points, double half_length) {
  if (n_points < 8 || (n_points & (n_points - 1)) != 0)
    throw std::invalid_argument("grid size must be a power of two >= 8");
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw std::invalid_argument("half_length must be positive");
  return SpectralGrid(std::make_shared<const detail::GridData>(n_points, half_length));
}

}  // namespace kdnls
