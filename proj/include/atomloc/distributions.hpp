#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "atomloc/common.hpp"
#include "atomloc/filters.hpp"
#include "atomloc/grid.hpp"
#include "atomloc/model.hpp"

namespace atomloc {

enum class AxisKind { position, momentum };

/// Column selector for DistributionTable lookups.
enum class Column { p_a, p_b, pi_a, pi_b, envelope };

/// Sampled probability densities per outcome branch. Dual mode fills p_a/p_b,
/// field-only mode fills pi_a/pi_b; position tables carry the measurement
/// envelope N^2 D^2 |f|^2 as well. Densities are Born-weighted: a dual branch
/// integrates to its outcome probability, a field-only branch to the full
/// density of that definite-state experiment arm.
struct DistributionTable {
  AxisKind axis_kind = AxisKind::position;
  bool ramsey_on = true;
  std::vector<double> axis;
  std::vector<double> p_a, p_b;
  std::vector<double> pi_a, pi_b;
  std::vector<double> envelope;
  double prob_a = 0.0;
  double prob_b = 0.0;

  double spacing() const { return axis.size() > 1 ? axis[1] - axis[0] : 0.0; }

  const std::vector<double>& column(Column c) const {
    switch (c) {
      case Column::p_a: return p_a;
      case Column::p_b: return p_b;
      case Column::pi_a: return pi_a;
      case Column::pi_b: return pi_b;
      default: return envelope;
    }
  }
};

/// Near-region position densities |f * amp_s|^2 for the configured mode.
inline DistributionTable position_distribution(const Grid& g, const std::vector<cplx>& f,
                                               const InteractionConfig& cfg) {
  cfg.validate();
  if (f.size() != g.n) throw numerics_error("wavepacket size does not match grid");
  DistributionTable t;
  t.axis_kind = AxisKind::position;
  t.ramsey_on = cfg.ramsey_on;
  t.axis = g.phi_values();
  t.envelope.resize(g.n);
  auto& da = cfg.ramsey_on ? t.p_a : t.pi_a;
  auto& db = cfg.ramsey_on ? t.p_b : t.pi_b;
  da.resize(g.n);
  db.resize(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double w = std::norm(f[i]);
    const auto [amp_a, amp_b] = mode_amplitudes(g.phi(i), cfg);
    da[i] = w * std::norm(amp_a);
    db[i] = w * std::norm(amp_b);
    const double d = amplitude_filter(g.phi(i), cfg);
    t.envelope[i] = w * quad_norm * quad_norm * d * d;
  }
  t.prob_a = trapezoid(da, g.dphi);
  t.prob_b = trapezoid(db, g.dphi);
  return t;
}

/// Total |psi|^2 mass in the outermost `frac` of the window on each side.
inline double edge_mass(const Grid& g, const std::vector<cplx>& psi, double frac = 0.01) {
  const auto k = std::size_t(std::ceil(double(g.n) * frac));
  double m = 0.0;
  for (std::size_t i = 0; i < k; ++i) m += std::norm(psi[i]) + std::norm(psi[g.n - 1 - i]);
  return m * g.dphi;
}

/// Far-region momentum densities: squared momentum transforms of the complex
/// post-measurement amplitudes f * amp_s. Parseval ties each branch to its
/// position-space probability.
inline DistributionTable momentum_distribution(const Grid& g, const std::vector<cplx>& f,
                                               const InteractionConfig& cfg) {
  cfg.validate();
  if (f.size() != g.n) throw numerics_error("wavepacket size does not match grid");
  std::vector<cplx> psi_a(g.n), psi_b(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const auto [amp_a, amp_b] = mode_amplitudes(g.phi(i), cfg);
    psi_a[i] = f[i] * amp_a;
    psi_b[i] = f[i] * amp_b;
  }
  const double em = edge_mass(g, psi_a) + edge_mass(g, psi_b);
  if (em > 1e-10)
    throw numerics_error("post-measurement amplitude touches the grid edge (mass " +
                         std::to_string(em) + "); enlarge the padding");

  DistributionTable t;
  t.axis_kind = AxisKind::momentum;
  t.ramsey_on = cfg.ramsey_on;
  t.axis = g.q_values();
  auto& da = cfg.ramsey_on ? t.p_a : t.pi_a;
  auto& db = cfg.ramsey_on ? t.p_b : t.pi_b;
  da.resize(g.n);
  db.resize(g.n);
  const auto fa = momentum_amplitude(g, psi_a);
  const auto fb = momentum_amplitude(g, psi_b);
  for (std::size_t i = 0; i < g.n; ++i) {
    da[i] = std::norm(fa[i]);
    db[i] = std::norm(fb[i]);
  }
  std::vector<double> wa(g.n), wb(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    wa[i] = std::norm(psi_a[i]);
    wb[i] = std::norm(psi_b[i]);
  }
  t.prob_a = trapezoid(wa, g.dphi);
  t.prob_b = trapezoid(wb, g.dphi);
  return t;
}

/// Standard deviation of the axis variable under one branch density,
/// restricted and renormalized to [window_lo, window_hi).
inline double localization_width(const DistributionTable& t, Column col, double window_lo,
                                 double window_hi) {
  const auto& dens = t.column(col);
  if (dens.empty()) throw numerics_error("requested branch column is absent from the table");
  double m0 = 0.0, m1 = 0.0;
  std::vector<double> xs, ws;
  for (std::size_t i = 0; i < t.axis.size(); ++i) {
    if (t.axis[i] < window_lo || t.axis[i] >= window_hi) continue;
    xs.push_back(t.axis[i]);
    ws.push_back(dens[i]);
  }
  if (xs.size() < 2) throw numerics_error("window contains too few grid points");
  std::vector<double> wx(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) wx[i] = ws[i] * xs[i];
  m0 = trapezoid(xs, ws);
  m1 = trapezoid(xs, wx);
  if (!(m0 > 0.0)) throw numerics_error("zero probability mass in the width window");
  const double mean = m1 / m0;
  for (std::size_t i = 0; i < xs.size(); ++i) wx[i] = ws[i] * (xs[i] - mean) * (xs[i] - mean);
  return std::sqrt(trapezoid(xs, wx) / m0);
}

/// Born weight of one outcome branch: integral of |f * amp_s|^2.
inline double branch_probability(const Grid& g, const std::vector<cplx>& f,
                                 const InteractionConfig& cfg, Branch s) {
  std::vector<double> w(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const auto [amp_a, amp_b] = mode_amplitudes(g.phi(i), cfg);
    w[i] = std::norm(f[i]) * std::norm(s == Branch::a ? amp_a : amp_b);
  }
  return trapezoid(w, g.dphi);
}

/// Local maxima of `density` above rel_threshold * global max. Candidates
/// closer than min_separation to an already kept (taller) peak are treated as
/// ringing of the same physical peak and dropped: the transform of a support
/// of width L smears every comb tooth into a sinc of main-lobe width
/// 2*(2*pi/L), so structure finer than that cannot be a separate tooth.
inline std::vector<double> peak_positions(const std::vector<double>& axis,
                                          const std::vector<double>& density,
                                          double rel_threshold, double min_separation) {
  if (axis.size() != density.size() || axis.size() < 3) return {};
  const double top = *std::max_element(density.begin(), density.end());
  if (!(top > 0.0)) return {};
  std::vector<std::size_t> cand;
  for (std::size_t i = 1; i + 1 < density.size(); ++i)
    if (density[i] > density[i - 1] && density[i] >= density[i + 1] &&
        density[i] >= rel_threshold * top)
      cand.push_back(i);
  std::sort(cand.begin(), cand.end(),
            [&](std::size_t l, std::size_t r) { return density[l] > density[r]; });
  std::vector<std::size_t> kept;
  for (std::size_t i : cand) {
    bool clear = true;
    for (std::size_t j : kept)
      if (std::abs(axis[i] - axis[j]) < min_separation) {
        clear = false;
        break;
      }
    if (clear) kept.push_back(i);
  }
  std::vector<double> pos(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) pos[i] = axis[kept[i]];
  std::sort(pos.begin(), pos.end());
  return pos;
}

/// Median of the successive gaps of an ascending peak list.
inline double median_gap(const std::vector<double>& peaks) {
  if (peaks.size() < 2) throw numerics_error("need at least two peaks for a spacing statistic");
  std::vector<double> gaps(peaks.size() - 1);
  for (std::size_t i = 0; i + 1 < peaks.size(); ++i) gaps[i] = peaks[i + 1] - peaks[i];
  std::sort(gaps.begin(), gaps.end());
  const std::size_t m = gaps.size() / 2;
  return gaps.size() % 2 ? gaps[m] : 0.5 * (gaps[m - 1] + gaps[m]);
}

}  // namespace atomloc
