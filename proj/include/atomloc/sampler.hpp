#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "atomloc/common.hpp"
#include "atomloc/distributions.hpp"
#include "atomloc/filters.hpp"
#include "atomloc/grid.hpp"
#include "atomloc/model.hpp"

namespace atomloc {

/// Joint outcome density rho(chi, s) = integral dphi |f|^2 |amp_s(phi; chi)|^2
/// on a uniform chi grid. Dual mode: s is the measured internal state and the
/// total mass is one. Field-only mode: s is the prepared state, weighted by
/// its preparation probability |c_s|^2, so the total mass is again one.
struct OutcomeDensity {
  std::vector<double> chi;
  std::vector<double> rho_a, rho_b;

  double dchi() const { return chi.size() > 1 ? chi[1] - chi[0] : 0.0; }

  std::vector<double> marginal() const {
    std::vector<double> m(chi.size());
    for (std::size_t i = 0; i < chi.size(); ++i) m[i] = rho_a[i] + rho_b[i];
    return m;
  }

  double total_mass() const { return trapezoid(marginal(), dchi()); }
};

inline double required_chi_halfspan(const InteractionConfig& cfg) {
  return 2.0 * cfg.alpha + 6.0;
}

inline OutcomeDensity outcome_density(const Grid& g, const std::vector<cplx>& f,
                                      const InteractionConfig& cfg, std::size_t n_chi = 8001) {
  cfg.validate();
  if (f.size() != g.n) throw numerics_error("wavepacket size does not match grid");
  if (n_chi < 2) throw config_error("outcome density needs at least two chi points");
  const double span = required_chi_halfspan(cfg);

  OutcomeDensity od;
  od.chi = linspace(-span, span, n_chi);
  od.rho_a.assign(n_chi, 0.0);
  od.rho_b.assign(n_chi, 0.0);

  // Phase-space factors that do not depend on chi, cached per grid point.
  std::vector<double> w(g.n), ar_p(g.n), ai_p(g.n), ar_m(g.n), ai_m(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    w[i] = std::norm(f[i]);
    const double eta = light_shift(g.phi(i), cfg);
    ar_p[i] = cfg.alpha * std::cos(eta - cfg.theta);
    ai_p[i] = cfg.alpha * std::sin(eta - cfg.theta);
    ar_m[i] = cfg.alpha * std::cos(-eta - cfg.theta);
    ai_m[i] = cfg.alpha * std::sin(-eta - cfg.theta);
  }
  const double wa = std::norm(cfg.c_a), wb = std::norm(cfg.c_b);
  const double nn = quad_norm * quad_norm;

  for (std::size_t k = 0; k < n_chi; ++k) {
    const double chi = od.chi[k];
    double sa = 0.0, sb = 0.0;
    if (cfg.ramsey_on) {
      for (std::size_t i = 0; i < g.n; ++i) {
        if (w[i] == 0.0) continue;
        const double dp = ar_p[i] - chi / 2.0, dm = ar_m[i] - chi / 2.0;
        const double mp = std::exp(-dp * dp), mm = std::exp(-dm * dm);
        const double pp = -ai_p[i] * (ar_p[i] - chi), pm = -ai_m[i] * (ar_m[i] - chi);
        // |c_a o+ ∓ c_b o-|^2 / 2 with real preparation weights folded in.
        const cplx op = std::polar(mp, pp), om = std::polar(mm, pm);
        const cplx A = cfg.c_a * op, B = cfg.c_b * om;
        sa += w[i] * std::norm(A - B) * 0.5;
        sb += w[i] * std::norm(A + B) * 0.5;
      }
    } else {
      for (std::size_t i = 0; i < g.n; ++i) {
        if (w[i] == 0.0) continue;
        const double dp = ar_p[i] - chi / 2.0, dm = ar_m[i] - chi / 2.0;
        sa += w[i] * std::exp(-2.0 * dp * dp);
        sb += w[i] * std::exp(-2.0 * dm * dm);
      }
      sa *= wa;
      sb *= wb;
    }
    od.rho_a[k] = nn * sa * g.dphi;
    od.rho_b[k] = nn * sb * g.dphi;
  }

  const double mass = od.total_mass();
  if (std::abs(mass - 1.0) > 1e-6)
    throw numerics_error("outcome density mass " + std::to_string(mass) +
                         " deviates from 1; chi grid too narrow or wavepacket clipped");
  return od;
}

struct MeasurementRecord {
  double chi = 0.0;
  Branch state = Branch::a;
};

inline constexpr const char* sampler_generator_name = "mt19937_64";

namespace detail {

/// Uniform double in [0,1) from the top 53 bits; keeps records identical
/// across standard libraries for a given seed.
inline double canonical(std::mt19937_64& gen) {
  return double(gen() >> 11) * 0x1.0p-53;
}

/// Piecewise-linear CDF knots of a sampled density (trapezoid cumulative).
inline std::vector<double> cdf_knots(const std::vector<double>& dens, double dx) {
  std::vector<double> cdf(dens.size(), 0.0);
  for (std::size_t i = 1; i < dens.size(); ++i)
    cdf[i] = cdf[i - 1] + 0.5 * (dens[i] + dens[i - 1]) * dx;
  const double total = cdf.back();
  for (auto& v : cdf) v /= total;
  return cdf;
}

}  // namespace detail

/// i.i.d. Born-rule draws via inverse-CDF on the chi marginal (linear
/// interpolation between the discretization knots) followed by the
/// conditional internal-state draw at the sampled chi. Deterministic for a
/// fixed seed.
inline std::vector<MeasurementRecord> sample_records(const OutcomeDensity& od, std::size_t count,
                                                     std::uint64_t seed) {
  if (count < 1) throw config_error("sample count must be >= 1");
  const auto marg = od.marginal();
  const auto cdf = detail::cdf_knots(marg, od.dchi());
  std::mt19937_64 gen(seed);
  std::vector<MeasurementRecord> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double u = detail::canonical(gen);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t j = std::min<std::size_t>(std::distance(cdf.begin(), it), cdf.size() - 1);
    if (j == 0) j = 1;
    const double seg = cdf[j] - cdf[j - 1];
    const double t = seg > 0.0 ? (u - cdf[j - 1]) / seg : 0.0;
    const double chi = od.chi[j - 1] + t * od.dchi();
    // Conditional P(a | chi) from the same linear interpolation.
    const double ra = od.rho_a[j - 1] * (1.0 - t) + od.rho_a[j] * t;
    const double rb = od.rho_b[j - 1] * (1.0 - t) + od.rho_b[j] * t;
    const double pa = (ra + rb) > 0.0 ? ra / (ra + rb) : 0.0;
    const Branch s = detail::canonical(gen) < pa ? Branch::a : Branch::b;
    out.push_back({chi, s});
  }
  return out;
}

inline std::vector<MeasurementRecord> sample_records(const Grid& g, const std::vector<cplx>& f,
                                                     const InteractionConfig& cfg,
                                                     std::size_t count, std::uint64_t seed,
                                                     std::size_t n_chi = 8001) {
  return sample_records(outcome_density(g, f, cfg, n_chi), count, seed);
}

/// Conditional position density of one record: |f * amp_state(phi; chi)|^2,
/// renormalized.
inline std::vector<double> posterior_density(const Grid& g, const std::vector<cplx>& f,
                                             InteractionConfig cfg,
                                             const MeasurementRecord& rec) {
  cfg.chi0 = rec.chi;
  std::vector<double> dens(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const auto [amp_a, amp_b] = mode_amplitudes(g.phi(i), cfg);
    dens[i] = std::norm(f[i]) * std::norm(rec.state == Branch::a ? amp_a : amp_b);
  }
  const double mass = trapezoid(dens, g.dphi);
  if (!(mass > 0.0)) throw numerics_error("record has zero posterior mass");
  for (auto& v : dens) v /= mass;
  return dens;
}

namespace detail {

/// Regularized upper incomplete gamma Q(a, x) by series / continued fraction.
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw numerics_error("gamma_q domain error");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) series, Q = 1 - P.
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Lentz continued fraction for Q directly.
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

}  // namespace detail

struct GofResult {
  double chi2 = 0.0;
  std::size_t dof = 0;
  double p_value = 0.0;
  std::size_t bins_used = 0;
};

/// Pearson chi-square of the sampled chi values against the same
/// piecewise-linear CDF the sampler draws from, so the test is exactly
/// calibrated. Uniform-width bins merged until every expected count >= 5.
inline GofResult chi_squared_gof(const std::vector<MeasurementRecord>& records,
                                 const OutcomeDensity& od, std::size_t n_bins = 60) {
  if (records.size() < 10 * n_bins) throw config_error("too few records for the requested bins");
  const auto marg = od.marginal();
  const auto cdf = detail::cdf_knots(marg, od.dchi());
  const double lo = od.chi.front(), hi = od.chi.back();
  const auto cdf_at = [&](double x) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const double r = (x - lo) / od.dchi();
    const auto j = std::min<std::size_t>(std::size_t(r), cdf.size() - 2);
    const double t = r - double(j);
    return cdf[j] * (1.0 - t) + cdf[j + 1] * t;
  };

  // Merge uniform bins left to right until each holds expected mass >= 5/N.
  const double n = double(records.size());
  std::vector<double> edges{lo};
  double acc = 0.0;
  for (std::size_t b = 1; b <= n_bins; ++b) {
    const double e = lo + (hi - lo) * double(b) / double(n_bins);
    acc = cdf_at(e) - cdf_at(edges.back());
    if (acc * n >= 5.0 || b == n_bins) edges.push_back(e);
  }
  if (edges.size() < 3) throw numerics_error("degenerate goodness-of-fit binning");
  // A trailing sliver below the threshold joins its left neighbor.
  if ((cdf_at(edges.back()) - cdf_at(edges[edges.size() - 2])) * n < 5.0) {
    edges.erase(edges.end() - 2);
  }

  const std::size_t nb = edges.size() - 1;
  std::vector<double> expected(nb), observed(nb, 0.0);
  for (std::size_t b = 0; b < nb; ++b)
    expected[b] = (cdf_at(edges[b + 1]) - cdf_at(edges[b])) * n;
  for (const auto& r : records) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), r.chi);
    auto b = std::size_t(std::distance(edges.begin(), it));
    b = b == 0 ? 0 : std::min(b - 1, nb - 1);
    observed[b] += 1.0;
  }
  GofResult res;
  res.bins_used = nb;
  for (std::size_t b = 0; b < nb; ++b) {
    const double diff = observed[b] - expected[b];
    if (expected[b] > 0.0) res.chi2 += diff * diff / expected[b];
  }
  res.dof = nb - 1;
  res.p_value = detail::gamma_q(double(res.dof) / 2.0, res.chi2 / 2.0);
  return res;
}

}  // namespace atomloc
