#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace atomloc {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// (2*pi)^(-1/4): prefactor of the delta-normalized quadrature eigenfunction.
inline const double quad_norm = std::pow(two_pi, -0.25);

using cplx = std::complex<double>;

/// Bad or inconsistent user input (config files, parameter ranges).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical contract was violated (padding, truncation, normalization).
struct numerics_error : std::runtime_error {
  explicit numerics_error(const std::string& what) : std::runtime_error(what) {}
};

/// Trapezoid rule on uniformly spaced samples.
template <class T>
T trapezoid(const std::vector<T>& y, double dx) {
  if (y.size() < 2) return T{};
  T s = (y.front() + y.back()) / 2.0;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * dx;
}

/// Trapezoid rule on an arbitrary monotone abscissa.
inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return s;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  if (n == 1) {
    x[0] = lo;
    return x;
  }
  const double d = (hi - lo) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + d * double(i);
  return x;
}

}  // namespace atomloc
