#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "atomloc/common.hpp"
#include "atomloc/grid.hpp"

namespace atomloc {

enum class Branch { a, b };

inline const char* branch_name(Branch s) { return s == Branch::a ? "a" : "b"; }

/// Mapping between figure-axis positions x/lambda = u and the standing-wave
/// phase phi. paper_figure: phi = pi*u (node u=0, antinode u=1/2);
/// strict_k0: phi = 2*pi*u (k0 = 2*pi/lambda taken literally).
enum class Convention { paper_figure, strict_k0 };

inline double phase_per_x_over_lambda(Convention c) {
  return c == Convention::paper_figure ? pi : two_pi;
}

inline const char* convention_name(Convention c) {
  return c == Convention::paper_figure ? "paper-figure" : "strict-k0";
}

/// All interaction and measurement parameters. Positions enter only through
/// the pulse area g_tau*sin(phi)^2; momenta are reported in hbar*k0 units.
struct InteractionConfig {
  double g_tau = pi;
  double alpha = 2.5;
  double theta = 0.0;
  double chi0 = 0.0;
  cplx c_a = {1.0 / std::sqrt(2.0), 0.0};
  cplx c_b = {1.0 / std::sqrt(2.0), 0.0};
  bool ramsey_on = true;

  void validate() const {
    if (!std::isfinite(g_tau)) throw config_error("interaction.g_tau must be finite");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
      throw config_error("interaction.alpha must be finite and >= 0");
    if (!std::isfinite(theta) || theta < 0.0 || theta >= two_pi)
      throw config_error("interaction.theta must lie in [0, 2*pi)");
    if (!std::isfinite(chi0)) throw config_error("interaction.chi0 must be finite");
    const double norm = std::norm(c_a) + std::norm(c_b);
    if (std::abs(norm - 1.0) > 1e-12)
      throw config_error("interaction state amplitudes must satisfy |c_a|^2+|c_b|^2=1");
  }
};

/// Raw cavity-QED rates behind the effective light shift G. delta_a < 0 and
/// delta_b > 0 by construction of the dispersive scheme.
struct PhysicalRegime {
  double g_a = 0.0;
  double g_b = 0.0;
  double delta_a = 0.0;
  double delta_b = 0.0;
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  double margin = 100.0;
};

struct ValidityReport {
  bool detuning_a_ok = false;
  bool detuning_b_ok = false;
  bool balance_ok = false;
  double ratio_a = 0.0;  // |delta_a| / gamma_a
  double ratio_b = 0.0;
  double balance_residual = 0.0;  // |(-g_a^2/delta_a) - (g_b^2/delta_b)| / G
  double light_shift_G = 0.0;     // g_b^2 / delta_b

  bool pass() const { return detuning_a_ok && detuning_b_ok && balance_ok; }
};

/// Checks the dispersive-regime inequalities |delta| >= margin*gamma and the
/// shift balance -g_a^2/delta_a = g_b^2/delta_b that defines a single G.
inline ValidityReport validate_regime(const PhysicalRegime& r, const InteractionConfig&) {
  for (double v : {r.g_a, r.g_b, r.delta_a, r.delta_b, r.gamma_a, r.gamma_b, r.margin})
    if (!std::isfinite(v)) throw config_error("regime parameters must be finite");
  if (!(r.g_a > 0.0) || !(r.g_b > 0.0)) throw config_error("regime couplings must be positive");
  if (!(r.gamma_a > 0.0) || !(r.gamma_b > 0.0))
    throw config_error("regime decay rates must be positive");
  if (!(r.delta_a < 0.0))
    throw config_error("regime delta_a must be negative (cavity red of the a transition)");
  if (!(r.delta_b > 0.0))
    throw config_error("regime delta_b must be positive (cavity blue of the b transition)");

  ValidityReport rep;
  rep.ratio_a = std::abs(r.delta_a) / r.gamma_a;
  rep.ratio_b = std::abs(r.delta_b) / r.gamma_b;
  rep.detuning_a_ok = rep.ratio_a >= r.margin;
  rep.detuning_b_ok = rep.ratio_b >= r.margin;
  rep.light_shift_G = r.g_b * r.g_b / r.delta_b;
  rep.balance_residual =
      std::abs((-r.g_a * r.g_a / r.delta_a) - rep.light_shift_G) / rep.light_shift_G;
  rep.balance_ok = rep.balance_residual <= 1e-6;
  return rep;
}

/// Initial wavepacket shapes. flat_top: constant amplitude on |phi| <= half_width.
/// gaussian: density std sigma about center. tabulated: sample points,
/// linearly interpolated onto the grid.
struct FlatTopSpec {
  double half_width = pi;
};
struct GaussianSpec {
  double center = pi / 4.0;
  double sigma = 0.1 * pi;
};
struct TabulatedSpec {
  std::vector<double> phi;
  std::vector<cplx> amp;
};

struct WavepacketSpec {
  std::variant<FlatTopSpec, GaussianSpec, TabulatedSpec> shape = FlatTopSpec{};

  void validate() const {
    if (const auto* ft = std::get_if<FlatTopSpec>(&shape)) {
      if (!(ft->half_width > 0.0) || !std::isfinite(ft->half_width))
        throw config_error("wavepacket.half_width must be finite and > 0");
    } else if (const auto* gs = std::get_if<GaussianSpec>(&shape)) {
      if (!(gs->sigma > 0.0) || !std::isfinite(gs->sigma))
        throw config_error("wavepacket.sigma must be finite and > 0");
      if (!std::isfinite(gs->center)) throw config_error("wavepacket.center must be finite");
    } else {
      const auto& tb = std::get<TabulatedSpec>(shape);
      if (tb.phi.empty() || tb.phi.size() != tb.amp.size())
        throw config_error("tabulated wavepacket needs matching nonempty phi/amplitude lists");
      for (std::size_t i = 1; i < tb.phi.size(); ++i)
        if (!(tb.phi[i] > tb.phi[i - 1]))
          throw config_error("tabulated wavepacket phi values must be strictly increasing");
    }
  }

  /// [lo, hi] interval outside which the amplitude is negligible.
  /// Gaussian support is cut at 8 sigma.
  std::pair<double, double> support() const {
    if (const auto* ft = std::get_if<FlatTopSpec>(&shape))
      return {-ft->half_width, ft->half_width};
    if (const auto* gs = std::get_if<GaussianSpec>(&shape))
      return {gs->center - 8.0 * gs->sigma, gs->center + 8.0 * gs->sigma};
    const auto& tb = std::get<TabulatedSpec>(shape);
    return {tb.phi.front(), tb.phi.back()};
  }
};

/// Default grid for a wavepacket: its support padded by `padding` widths per
/// side, 2^log2_points samples.
inline Grid make_grid(const WavepacketSpec& spec, int log2_points = 14, double padding = 4.0) {
  spec.validate();
  auto [lo, hi] = spec.support();
  return Grid::over_support(lo, hi, log2_points, padding);
}

/// Samples the wavepacket amplitude on the grid, L2-normalized by the
/// trapezoid rule. Throws if the support sticks out of the grid window.
inline std::vector<cplx> build_wavepacket(const WavepacketSpec& spec, const Grid& g) {
  spec.validate();
  auto [slo, shi] = spec.support();
  if (slo < g.lo - 0.5 * g.dphi || shi > g.hi() + 0.5 * g.dphi) {
    std::ostringstream os;
    os << "wavepacket support [" << slo << ", " << shi << "] exceeds grid window [" << g.lo
       << ", " << g.hi() << "]; mass outside the window would be lost";
    throw numerics_error(os.str());
  }

  std::vector<cplx> f(g.n, cplx{0.0, 0.0});
  if (const auto* ft = std::get_if<FlatTopSpec>(&spec.shape)) {
    for (std::size_t i = 0; i < g.n; ++i)
      if (std::abs(g.phi(i)) <= ft->half_width) f[i] = 1.0;
  } else if (const auto* gs = std::get_if<GaussianSpec>(&spec.shape)) {
    for (std::size_t i = 0; i < g.n; ++i) {
      const double z = (g.phi(i) - gs->center) / gs->sigma;
      f[i] = std::exp(-z * z / 4.0);
    }
  } else {
    const auto& tb = std::get<TabulatedSpec>(spec.shape);
    if (tb.phi.size() == 1) {
      // Single-point spike: one nonzero column at the nearest grid point.
      const auto i = std::size_t(std::lround((tb.phi[0] - g.lo) / g.dphi));
      f[std::min(i, g.n - 1)] = tb.amp[0];
    } else {
      std::size_t k = 0;
      for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.phi(i);
        if (x < tb.phi.front() || x > tb.phi.back()) continue;
        while (k + 2 < tb.phi.size() && tb.phi[k + 1] < x) ++k;
        const double t = (x - tb.phi[k]) / (tb.phi[k + 1] - tb.phi[k]);
        f[i] = tb.amp[k] * (1.0 - t) + tb.amp[k + 1] * t;
      }
    }
  }

  std::vector<double> dens(g.n);
  for (std::size_t i = 0; i < g.n; ++i) dens[i] = std::norm(f[i]);
  const double mass = trapezoid(dens, g.dphi);
  if (!(mass > 0.0)) throw numerics_error("wavepacket has zero mass on the grid");
  const double s = 1.0 / std::sqrt(mass);
  for (auto& v : f) v *= s;
  return f;
}

}  // namespace atomloc
