#pragma once

#include <cmath>
#include <vector>

#include "atomloc/common.hpp"
#include "atomloc/distributions.hpp"
#include "atomloc/mechanics.hpp"
#include "atomloc/model.hpp"

namespace atomloc {

/// Measured-state mechanics of one outcome branch. delta_p_k_heuristic is the
/// operational subtraction delta_p - delta_p_t, not an independently defined
/// quantity; consumers must label it as heuristic.
struct BranchMechanics {
  double prob = 0.0;
  double delta_x = 0.0;    // localization width inside one sin^2 period
  double delta_p = 0.0;    // std of the branch momentum density
  double delta_p_t = 0.0;  // dipole-impulse spread over the localized density
  double delta_p_k_heuristic = 0.0;
};

struct ModeMechanics {
  bool ramsey_on = true;
  BranchMechanics a, b;
  /// Two-branch +/- impulse mixture over the measured position density,
  /// weighted by the internal-state populations. Meaningful for the dual
  /// mode, where the internal state stays in superposition until read out.
  double superposed_spread = 0.0;
};

namespace detail {

inline double density_std(const std::vector<double>& x, const std::vector<double>& dens) {
  const double m0 = trapezoid(x, dens);
  if (!(m0 > 0.0)) throw numerics_error("momentum spread of a zero-mass branch");
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = dens[i] * x[i];
  const double mean = trapezoid(x, w) / m0;
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = dens[i] * (x[i] - mean) * (x[i] - mean);
  return std::sqrt(trapezoid(x, w) / m0);
}

}  // namespace detail

/// Localization and momentum bookkeeping of one measurement mode. The width
/// window [window_lo, window_hi) restricts delta_x to one period of the
/// standing wave so the comb structure does not masquerade as delocalization.
inline ModeMechanics analyze_mode(const Grid& g, const std::vector<cplx>& f,
                                  const InteractionConfig& cfg, double window_lo,
                                  double window_hi) {
  const auto pos = position_distribution(g, f, cfg);
  const auto mom = momentum_distribution(g, f, cfg);
  const Column col_a = cfg.ramsey_on ? Column::p_a : Column::pi_a;
  const Column col_b = cfg.ramsey_on ? Column::p_b : Column::pi_b;

  ModeMechanics mm;
  mm.ramsey_on = cfg.ramsey_on;
  const auto phi = g.phi_values();

  const auto fill = [&](BranchMechanics& bm, Column col, double prob) {
    bm.prob = prob;
    bm.delta_x = localization_width(pos, col, window_lo, window_hi);
    bm.delta_p = detail::density_std(mom.axis, mom.column(col));
    std::vector<double> dens = pos.column(col);
    for (auto& v : dens) v /= prob;
    bm.delta_p_t = dpt_numeric(phi, dens, cfg);
    bm.delta_p_k_heuristic = bm.delta_p - bm.delta_p_t;
  };
  fill(mm.a, col_a, pos.prob_a);
  fill(mm.b, col_b, pos.prob_b);

  if (cfg.ramsey_on) {
    // Total measured position density: both branches together. For the dual
    // mode this equals the quadrature envelope N^2 D^2 |f|^2.
    std::vector<double> total(g.n);
    for (std::size_t i = 0; i < g.n; ++i)
      total[i] = (pos.column(col_a)[i] + pos.column(col_b)[i]) / (pos.prob_a + pos.prob_b);
    mm.superposed_spread = superposed_spread(phi, total, cfg);
  }
  return mm;
}

struct PopperComparison {
  ModeMechanics dual;
  ModeMechanics field_only;
};

/// Dual vs field-only measurement on the same wavepacket and outcome. The
/// pass-by-value config is re-flagged per mode.
inline PopperComparison popper_comparison(const Grid& g, const std::vector<cplx>& f,
                                          InteractionConfig cfg, double window_lo,
                                          double window_hi) {
  PopperComparison pc;
  cfg.ramsey_on = true;
  pc.dual = analyze_mode(g, f, cfg, window_lo, window_hi);
  cfg.ramsey_on = false;
  pc.field_only = analyze_mode(g, f, cfg, window_lo, window_hi);
  return pc;
}

}  // namespace atomloc
