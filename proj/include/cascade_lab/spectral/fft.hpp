#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "cascade_lab/spectral/grid_field.hpp"

namespace cascade_lab::spectral {

using Spectrum = std::vector<std::complex<double>>;

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// In-place 3D complex transform pair on an owned buffer. The planner is
/// serialized; execution on distinct instances is safe in parallel.
class Fft3 {
 public:
  explicit Fft3(int n) : n_(n), size_(static_cast<std::size_t>(n) * n * n) {
    std::lock_guard lock(fftw_planner_mutex());
    buf_ = fftw_alloc_complex(size_);
    fwd_ = fftw_plan_dft_3d(n, n, n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_3d(n, n, n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  Fft3(const Fft3&) = delete;
  Fft3& operator=(const Fft3&) = delete;
  ~Fft3() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(buf_);
  }

  /// Coefficients c_k with u(x) = sum_k c_k e^{i xi_k . x}.
  void forward(const std::vector<double>& real, Spectrum& out) {
    for (std::size_t k = 0; k < size_; ++k) {
      buf_[k][0] = real[k];
      buf_[k][1] = 0.0;
    }
    fftw_execute(fwd_);
    out.resize(size_);
    const double s = 1.0 / static_cast<double>(size_);
    for (std::size_t k = 0; k < size_; ++k) out[k] = {buf_[k][0] * s, buf_[k][1] * s};
  }

  /// Real part of sum_k c_k e^{i xi_k . x}.
  void inverse(const Spectrum& in, std::vector<double>& real) {
    for (std::size_t k = 0; k < size_; ++k) {
      buf_[k][0] = in[k].real();
      buf_[k][1] = in[k].imag();
    }
    fftw_execute(inv_);
    real.resize(size_);
    for (std::size_t k = 0; k < size_; ++k) real[k] = buf_[k][0];
  }

 private:
  int n_;
  std::size_t size_;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan inv_ = nullptr;
};

inline Fft3& fft_for(int n) {
  thread_local std::map<int, std::unique_ptr<Fft3>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Fft3>(n);
  return *slot;
}

}  // namespace detail

template <std::size_t C>
std::array<Spectrum, C> to_spectrum(const Field<C>& u) {
  std::array<Spectrum, C> out;
  auto& fft = detail::fft_for(u.grid.n);
  for (std::size_t d = 0; d < C; ++d) fft.forward(u.comp[d], out[d]);
  return out;
}

template <std::size_t C>
Field<C> from_spectrum(const GridSpec& g, const std::array<Spectrum, C>& s) {
  Field<C> u(g);
  auto& fft = detail::fft_for(g.n);
  for (std::size_t d = 0; d < C; ++d) fft.inverse(s[d], u.comp[d]);
  return u;
}

/// Calls f(flat, xi_x, xi_y, xi_z, any_nyquist) for every mode.
template <class F>
void for_each_mode(const GridSpec& g, F&& f) {
  for (int a = 0; a < g.n; ++a) {
    const double kx = g.wavenumber(a);
    for (int b = 0; b < g.n; ++b) {
      const double ky = g.wavenumber(b);
      for (int c = 0; c < g.n; ++c) {
        const double kz = g.wavenumber(c);
        f(g.flat(a, b, c), kx, ky, kz, g.nyquist(a) || g.nyquist(b) || g.nyquist(c));
      }
    }
  }
}

/// Multiplies every component by a real even radial symbol m(|xi|).
template <std::size_t C, class Symbol>
Field<C> apply_radial_symbol(const Field<C>& u, Symbol&& m) {
  auto s = to_spectrum(u);
  for_each_mode(u.grid, [&](std::size_t k, double x, double y, double z, bool) {
    const double w = m(std::sqrt(x * x + y * y + z * z));
    for (auto& comp : s) comp[k] *= w;
  });
  auto out = from_spectrum(u.grid, s);
  out.time = u.time;
  return out;
}

}  // namespace cascade_lab::spectral
