#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

#include "atomloc/common.hpp"

namespace atomloc {

/// Uniform position grid with the conjugate momentum lattice of its DFT.
/// Point count is a power of two. q is in units of hbar*k0, fftshift order
/// (ascending, q=0 at index n/2).
struct Grid {
  double lo = 0.0;
  double dphi = 0.0;
  std::size_t n = 0;

  double phi(std::size_t i) const { return lo + dphi * double(i); }
  double hi() const { return lo + dphi * double(n); }
  double dq() const { return two_pi / (double(n) * dphi); }
  double q(std::size_t i) const { return dq() * (double(i) - double(n) / 2.0); }

  std::vector<double> phi_values() const {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = phi(i);
    return v;
  }
  std::vector<double> q_values() const {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = q(i);
    return v;
  }

  /// Window = [support_lo, support_hi] padded by `padding` support-widths on
  /// each side. A degenerate (point) support gets a unit surrogate width.
  static Grid over_support(double support_lo, double support_hi, int log2_points,
                           double padding = 4.0) {
    if (log2_points < 3 || log2_points > 24)
      throw config_error("grid log2_points out of range [3,24]");
    if (!(support_hi >= support_lo))
      throw config_error("grid support interval is inverted");
    if (padding < 0.0) throw config_error("grid padding must be nonnegative");
    double w = support_hi - support_lo;
    if (w == 0.0) w = 1.0;
    Grid g;
    g.n = std::size_t{1} << log2_points;
    g.lo = support_lo - padding * w;
    g.dphi = (support_hi + padding * w - g.lo) / double(g.n);
    return g;
  }
};

/// In-place forward radix-2 FFT, X_k = sum_m x_m exp(-2*pi*i*k*m/n).
inline void fft_radix2(std::vector<cplx>& a) {
  const std::size_t n = a.size();
  if (n < 2) return;
  if (n & (n - 1)) throw numerics_error("fft length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<cplx> tw(n / 2);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k)
      tw[k] = std::polar(1.0, -two_pi * double(k) / double(len));
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + half] * tw[k];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

/// Continuum-normalized momentum amplitude on the grid's q lattice:
/// psi_tilde(q) = (2*pi)^(-1/2) * integral psi(phi) exp(-i*q*phi) dphi,
/// discretized so that sum |psi_tilde|^2 dq = sum |psi|^2 dphi exactly.
/// Output is in ascending-q order matching Grid::q.
inline std::vector<cplx> momentum_amplitude(const Grid& g, const std::vector<cplx>& psi) {
  if (psi.size() != g.n) throw numerics_error("amplitude size does not match grid");
  std::vector<cplx> a = psi;
  fft_radix2(a);
  std::vector<cplx> out(g.n);
  const double scale = g.dphi / std::sqrt(two_pi);
  for (std::size_t i = 0; i < g.n; ++i) {
    const std::size_t src = (i + g.n / 2) % g.n;
    out[i] = std::polar(scale, -g.q(i) * g.lo) * a[src];
  }
  return out;
}

}  // namespace atomloc
