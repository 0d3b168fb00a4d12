#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "atomloc/common.hpp"
#include "atomloc/model.hpp"

namespace atomloc {

/// Pulse area eta = G(x)*tau = g_tau * sin(phi)^2.
inline double light_shift(double phi, const InteractionConfig& cfg) {
  const double s = std::sin(phi);
  return cfg.g_tau * s * s;
}

/// Wigner-diagram rotation angles of the two internal-state branches.
inline std::pair<double, double> rotation_angles(double phi, const InteractionConfig& cfg) {
  const double eta = light_shift(phi, cfg);
  return {eta, -eta};
}

/// Delta-normalized overlap of the quadrature eigenstate |chi_theta> with the
/// rotated coherent state |alpha e^{i eta}>:
///   (2*pi)^(-1/4) exp[-(a_r - chi/2)^2 - i a_i (a_r - chi)],
/// a_r + i a_i = alpha e^{i (eta - theta)}. Integrates to unit probability
/// over chi.
inline cplx quadrature_overlap(double alpha, double eta, double theta, double chi) {
  const double ar = alpha * std::cos(eta - theta);
  const double ai = alpha * std::sin(eta - theta);
  const double d = ar - chi / 2.0;
  const double mag = quad_norm * std::exp(-d * d);
  const double phase = -ai * (ar - chi);
  return {mag * std::cos(phase), mag * std::sin(phase)};
}

/// Gaussian amplitude filter D (theta = 0 form).
inline double amplitude_filter(double phi, const InteractionConfig& cfg) {
  const double eta = light_shift(phi, cfg);
  const double d = cfg.alpha * std::cos(eta) - cfg.chi0 / 2.0;
  return std::exp(-d * d);
}

/// Interference phase Delta (theta = 0 form).
inline double phase_filter(double phi, const InteractionConfig& cfg) {
  const double eta = light_shift(phi, cfg);
  return cfg.alpha * std::sin(eta) * (cfg.alpha * std::cos(eta) - cfg.chi0);
}

/// Equal-superposition interference factors (-i sin Delta, cos Delta).
inline std::pair<cplx, cplx> interference_filters(double phi, const InteractionConfig& cfg) {
  const double delta = phase_filter(phi, cfg);
  return {cplx{0.0, -std::sin(delta)}, cplx{std::cos(delta), 0.0}};
}

/// Exact post-measurement amplitudes with the Ramsey fields on: the two
/// rotated-branch overlaps recombined by the second pi/2 pulse,
///   amp_a = (c_a o+ - c_b o-)/sqrt(2),  amp_b = (c_a o+ + c_b o-)/sqrt(2),
/// o± the overlaps of the ±eta branches. Valid for any theta; Born-weighted
/// (|amp|^2 integrates to branch probabilities against |f|^2).
inline std::pair<cplx, cplx> dual_amplitudes(double phi, const InteractionConfig& cfg) {
  const double eta = light_shift(phi, cfg);
  const cplx op = quadrature_overlap(cfg.alpha, eta, cfg.theta, cfg.chi0);
  const cplx om = quadrature_overlap(cfg.alpha, -eta, cfg.theta, cfg.chi0);
  const double r = 1.0 / std::sqrt(2.0);
  return {(cfg.c_a * op - cfg.c_b * om) * r, (cfg.c_a * op + cfg.c_b * om) * r};
}

/// Post-measurement amplitudes with the Ramsey fields off: the atom stays in
/// one definite internal state, so each branch is a bare rotated-state
/// overlap with no superposition weights.
inline std::pair<cplx, cplx> single_amplitudes(double phi, const InteractionConfig& cfg) {
  const double eta = light_shift(phi, cfg);
  return {quadrature_overlap(cfg.alpha, eta, cfg.theta, cfg.chi0),
          quadrature_overlap(cfg.alpha, -eta, cfg.theta, cfg.chi0)};
}

inline std::pair<cplx, cplx> mode_amplitudes(double phi, const InteractionConfig& cfg) {
  return cfg.ramsey_on ? dual_amplitudes(phi, cfg) : single_amplitudes(phi, cfg);
}

/// Filter magnitudes F_a = D^2 sin^2 Delta, F_b = D^2 cos^2 Delta
/// (theta = 0 closed forms, no Born weight).
inline std::pair<double, double> filter_values(double phi, const InteractionConfig& cfg) {
  const double d = amplitude_filter(phi, cfg);
  const double delta = phase_filter(phi, cfg);
  const double s = std::sin(delta), c = std::cos(delta);
  return {d * d * s * s, d * d * c * c};
}

/// One position's worth of everything: theta = 0 closed-form factors plus the
/// exact mode amplitudes (the latter valid at any theta).
struct FilterSample {
  double phi = 0.0;
  double d = 0.0;      // amplitude filter D, theta = 0 form
  double delta = 0.0;  // phase filter Delta, theta = 0 form
  cplx i_a, i_b;       // equal-superposition interference factors
  cplx amp_a, amp_b;   // exact amplitudes for the configured mode
};

inline FilterSample generalized_filter(double phi, const InteractionConfig& cfg) {
  FilterSample s;
  s.phi = phi;
  s.d = amplitude_filter(phi, cfg);
  s.delta = phase_filter(phi, cfg);
  std::tie(s.i_a, s.i_b) = interference_filters(phi, cfg);
  std::tie(s.amp_a, s.amp_b) = mode_amplitudes(phi, cfg);
  return s;
}

}  // namespace atomloc
