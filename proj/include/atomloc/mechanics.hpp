#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "atomloc/common.hpp"
#include "atomloc/distributions.hpp"
#include "atomloc/model.hpp"

namespace atomloc {

/// Dipole potential in units of hbar*G: u_a = -alpha^2 sin^2 phi, u_b = +.
inline double dipole_potential(double phi, const InteractionConfig& cfg, Branch s) {
  const double sn = std::sin(phi);
  const double u = cfg.alpha * cfg.alpha * sn * sn;
  return s == Branch::a ? -u : u;
}

/// Impulse accumulated over the pulse, units hbar*k0:
/// p_t = ±g_tau alpha^2 sin(2 phi), + for |a>.
inline double transferred_momentum(double phi, const InteractionConfig& cfg, Branch s) {
  const double p = cfg.g_tau * cfg.alpha * cfg.alpha * std::sin(2.0 * phi);
  return s == Branch::a ? p : -p;
}

/// Transferred-momentum spread of a definite internal state over a sampled
/// position density:
///   g_tau alpha^2 sqrt(<sin^2 2phi> - <sin 2phi>^2).
/// The density must arrive normalized on its abscissa.
inline double dpt_numeric(const std::vector<double>& phi, const std::vector<double>& dens,
                          const InteractionConfig& cfg) {
  if (phi.size() != dens.size() || phi.size() < 2)
    throw numerics_error("dpt_numeric needs matching phi/density samples");
  const double mass = trapezoid(phi, dens);
  if (std::abs(mass - 1.0) > 1e-6)
    throw numerics_error("dpt_numeric density is not normalized (mass " + std::to_string(mass) +
                         ")");
  std::vector<double> w1(phi.size()), w2(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double s = std::sin(2.0 * phi[i]);
    w1[i] = dens[i] * s;
    w2[i] = dens[i] * s * s;
  }
  const double m1 = trapezoid(phi, w1) / mass;
  const double m2 = trapezoid(phi, w2) / mass;
  const double var = std::max(0.0, m2 - m1 * m1);
  return cfg.g_tau * cfg.alpha * cfg.alpha * std::sqrt(var);
}

/// Closed form of the same spread for a Gaussian density of std sigma_phi
/// about phi0:
///   (g_tau alpha^2) sqrt[ (1 - e^{-8 s^2} cos 4phi0 - 2 e^{-4 s^2} sin^2 2phi0) / 2 ].
inline double dpt_closed(double phi0, double sigma_phi, const InteractionConfig& cfg) {
  if (!(sigma_phi > 0.0)) throw config_error("dpt_closed needs sigma_phi > 0");
  const double s2 = sigma_phi * sigma_phi;
  const double inner = 1.0 - std::exp(-8.0 * s2) * std::cos(4.0 * phi0) -
                       2.0 * std::exp(-4.0 * s2) * std::sin(2.0 * phi0) * std::sin(2.0 * phi0);
  return cfg.g_tau * cfg.alpha * cfg.alpha * std::sqrt(std::max(0.0, inner / 2.0));
}

/// Leading small-sigma behavior: 2 g_tau alpha^2 sigma |cos 2phi0|. Vanishes
/// at phi0 = pi/4, the midway point where the impulse is stationary.
inline double dpt_small_sigma(double phi0, double sigma_phi, const InteractionConfig& cfg) {
  return 2.0 * cfg.g_tau * cfg.alpha * cfg.alpha * sigma_phi * std::abs(std::cos(2.0 * phi0));
}

/// Mechanical momentum spread when the internal state is the superposition
/// (c_a, c_b): classical two-branch mixture of ±p_t(phi) with weights |c_a|^2
/// and |c_b|^2 over the position density. The first moment carries the weight
/// imbalance; the second moment is branch-independent.
inline double superposed_spread(const std::vector<double>& phi, const std::vector<double>& dens,
                                const InteractionConfig& cfg) {
  if (phi.size() != dens.size() || phi.size() < 2)
    throw numerics_error("superposed_spread needs matching phi/density samples");
  const double mass = trapezoid(phi, dens);
  if (std::abs(mass - 1.0) > 1e-6)
    throw numerics_error("superposed_spread density is not normalized");
  std::vector<double> w1(phi.size()), w2(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double p = transferred_momentum(phi[i], cfg, Branch::a);
    w1[i] = dens[i] * p;
    w2[i] = dens[i] * p * p;
  }
  const double imbalance = std::norm(cfg.c_a) - std::norm(cfg.c_b);
  const double mean = imbalance * trapezoid(phi, w1) / mass;
  const double m2 = trapezoid(phi, w2) / mass;
  return std::sqrt(std::max(0.0, m2 - mean * mean));
}

}  // namespace atomloc
