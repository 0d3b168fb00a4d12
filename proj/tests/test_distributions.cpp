#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "atomloc/distributions.hpp"
#include "atomloc/model.hpp"

using namespace atomloc;

namespace {

struct FlatTopRun {
  WavepacketSpec spec;
  Grid g;
  std::vector<cplx> f;
  InteractionConfig cfg;

  explicit FlatTopRun(int log2_points = 14) : g(make_grid(spec, log2_points)) {
    f = build_wavepacket(spec, g);
    cfg.chi0 = 0.0;
  }
};

}  // namespace

TEST_CASE("position distribution: branch weights and envelope identity") {
  FlatTopRun run(12);
  const auto t = position_distribution(run.g, run.f, run.cfg);
  REQUIRE(t.axis_kind == AxisKind::position);
  REQUIRE(t.ramsey_on);
  REQUIRE(t.prob_a > 0.0);
  REQUIRE(t.prob_b > 0.0);
  REQUIRE(t.pi_a.empty());
  // Balanced preparation at theta=0: the two branch densities partition the
  // envelope pointwise.
  for (std::size_t i = 0; i < run.g.n; ++i) {
    REQUIRE(t.p_a[i] >= 0.0);
    REQUIRE(t.p_b[i] >= 0.0);
    REQUIRE(std::abs(t.p_a[i] + t.p_b[i] - t.envelope[i]) < 1e-15);
  }
  REQUIRE_THAT(branch_probability(run.g, run.f, run.cfg, Branch::a),
               Catch::Matchers::WithinAbs(t.prob_a, 1e-14));
  REQUIRE_THAT(branch_probability(run.g, run.f, run.cfg, Branch::b),
               Catch::Matchers::WithinAbs(t.prob_b, 1e-14));
}

TEST_CASE("a-branch position density vanishes at the dark fringes") {
  FlatTopRun run(12);
  const auto t = position_distribution(run.g, run.f, run.cfg);
  // Nearest grid samples to phi = 0 and +/- pi/2 sit within one bin of a
  // zero of sin(Delta); the density there is envelope * O(bin^2).
  for (double target : {0.0, pi / 2.0, -pi / 2.0}) {
    double best = 1e300;
    std::size_t at = 0;
    for (std::size_t i = 0; i < run.g.n; ++i)
      if (std::abs(run.g.phi(i) - target) < best) {
        best = std::abs(run.g.phi(i) - target);
        at = i;
      }
    REQUIRE(t.p_a[at] < 1e-4 * t.prob_a);
  }
}

TEST_CASE("field-only position distribution fills the pi columns") {
  FlatTopRun run(12);
  run.cfg.ramsey_on = false;
  const auto t = position_distribution(run.g, run.f, run.cfg);
  REQUIRE(t.p_a.empty());
  REQUIRE(t.pi_a.size() == run.g.n);
  // Prepared half-and-half: each arm carries mass 1/2 in total over chi, but
  // at fixed chi0 the arms weigh by their overlap with the outcome.
  REQUIRE(t.prob_a > 0.0);
  REQUIRE(t.prob_b > 0.0);
}

TEST_CASE("momentum comb: spacing four, interleaved branches, mixture rule") {
  FlatTopRun run;  // 2^14
  const auto mom = momentum_distribution(run.g, run.f, run.cfg);
  REQUIRE(mom.axis_kind == AxisKind::momentum);

  // Peak extraction: the flat-top support has width 2 pi, so one comb tooth's
  // transform main lobe spans 2*(2 pi / (2 pi)) = 2 in q.
  const double min_sep = 2.0 * (two_pi / (2.0 * pi));
  const auto peaks_a = peak_positions(mom.axis, mom.p_a, 0.05, min_sep);
  const auto peaks_b = peak_positions(mom.axis, mom.p_b, 0.05, min_sep);
  REQUIRE(peaks_a.size() >= 6);
  REQUIRE(peaks_b.size() >= 6);
  REQUIRE_THAT(median_gap(peaks_a), Catch::Matchers::WithinAbs(4.0, mom.spacing()));
  REQUIRE_THAT(median_gap(peaks_b), Catch::Matchers::WithinAbs(4.0, mom.spacing()));

  // b teeth at q = 4k, a teeth between them.
  for (double p : peaks_b) {
    const double r = std::abs(std::remainder(p, 4.0));
    REQUIRE(r <= 2.0 * mom.spacing() + 1e-12);
  }
  std::size_t interior_a = 0;
  for (double p : peaks_a) {
    if (std::abs(p) > 4.0 && std::abs(p) < 30.0) {
      const double r = std::abs(std::remainder(p - 2.0, 4.0));
      REQUIRE(r <= 2.0 * mom.spacing() + 1e-12);
      ++interior_a;
    }
  }
  REQUIRE(interior_a >= 4);

  // Interleaving: between consecutive b teeth sits exactly one a tooth.
  for (std::size_t i = 0; i + 1 < peaks_b.size(); ++i) {
    std::size_t between = 0;
    for (double p : peaks_a)
      if (p > peaks_b[i] && p < peaks_b[i + 1]) ++between;
    if (peaks_b[i + 1] - peaks_b[i] < 6.0) REQUIRE(between == 1);
  }

  // Mixture rule: dual branches sum to half the sum of the field-only arms.
  auto off_cfg = run.cfg;
  off_cfg.ramsey_on = false;
  const auto mom_off = momentum_distribution(run.g, run.f, off_cfg);
  for (std::size_t i = 0; i < run.g.n; ++i) {
    const double lhs = mom.p_a[i] + mom.p_b[i];
    const double rhs = 0.5 * (mom_off.pi_a[i] + mom_off.pi_b[i]);
    REQUIRE(std::abs(lhs - rhs) < 1e-12);
  }

  // Real input: the field-only arms mirror each other in q. q(i) = -q(n-i),
  // so index 0 (the lone most-negative bin) has no partner.
  for (std::size_t i = 1; i < run.g.n; ++i)
    REQUIRE(std::abs(mom_off.pi_a[i] - mom_off.pi_b[run.g.n - i]) < 1e-12);
}

TEST_CASE("Parseval per branch on the flat-top comb") {
  FlatTopRun run;
  const auto mom = momentum_distribution(run.g, run.f, run.cfg);
  const double pa_q = trapezoid(mom.p_a, run.g.dq());
  const double pb_q = trapezoid(mom.p_b, run.g.dq());
  REQUIRE(std::abs(pa_q - mom.prob_a) < 1e-9);
  REQUIRE(std::abs(pb_q - mom.prob_b) < 1e-9);
}

TEST_CASE("well-localized packet, fields off: branch impulses mirror") {
  WavepacketSpec spec;
  spec.shape = GaussianSpec{pi / 4.0, 0.1 * pi};
  const Grid g = make_grid(spec);
  const auto f = build_wavepacket(spec, g);
  InteractionConfig cfg;
  cfg.ramsey_on = false;
  cfg.chi0 = 0.0;
  const auto mom = momentum_distribution(g, f, cfg);

  // Real input and conjugate branch amplitudes: pi_b(q) = pi_a(-q).
  for (std::size_t i = 1; i < g.n; ++i)
    REQUIRE(std::abs(mom.pi_a[i] - mom.pi_b[g.n - i]) < 1e-12);

  // The dominant a-branch tooth sits right of +16, the b tooth mirrored.
  std::size_t ia = 0, ib = 0;
  for (std::size_t i = 1; i < g.n; ++i) {
    if (mom.pi_a[i] > mom.pi_a[ia]) ia = i;
    if (mom.pi_b[i] > mom.pi_b[ib]) ib = i;
  }
  REQUIRE_THAT(mom.axis[ia], Catch::Matchers::WithinAbs(16.25, 2.0 * g.dq()));
  REQUIRE_THAT(mom.axis[ib], Catch::Matchers::WithinAbs(-16.25, 2.0 * g.dq()));
}

TEST_CASE("node spike kills the a branch") {
  WavepacketSpec spec;
  spec.shape = TabulatedSpec{{0.0}, {cplx{1.0, 0.0}}};
  const Grid g = make_grid(spec, 10);
  const auto f = build_wavepacket(spec, g);
  InteractionConfig cfg;
  cfg.chi0 = 0.0;
  const auto t = position_distribution(g, f, cfg);
  REQUIRE(t.prob_a == 0.0);
  REQUIRE(t.prob_b > 0.0);
}

TEST_CASE("localization width restricted to a window") {
  WavepacketSpec spec;
  spec.shape = GaussianSpec{pi / 4.0, 0.03 * pi};
  const Grid g = make_grid(spec);
  const auto f = build_wavepacket(spec, g);
  InteractionConfig cfg;
  cfg.g_tau = 0.0;  // no interaction: b-branch density equals |f|^2
  const auto t = position_distribution(g, f, cfg);
  const double w = localization_width(t, Column::p_b, 0.0, pi / 2.0);
  REQUIRE_THAT(w, Catch::Matchers::WithinRel(0.03 * pi, 1e-5));
  REQUIRE_THROWS_AS(localization_width(t, Column::pi_b, 0.0, pi / 2.0), numerics_error);
  REQUIRE_THROWS_AS(localization_width(t, Column::p_b, 40.0, 41.0), numerics_error);
}

TEST_CASE("peak extraction suppresses ringing and thresholds") {
  // A tall tooth with sinc-like ringing plus a smaller distant tooth.
  const auto axis = linspace(-10.0, 10.0, 2001);
  std::vector<double> dens(axis.size());
  for (std::size_t i = 0; i < axis.size(); ++i) {
    const double x = axis[i];
    const double lobe = [](double u) {
      const double s = u == 0.0 ? 1.0 : std::sin(pi * u) / (pi * u);
      return s * s;
    }(x);
    const double lobe2 = [](double u) {
      const double s = u == 0.0 ? 1.0 : std::sin(pi * u) / (pi * u);
      return s * s;
    }(x - 6.0);
    dens[i] = lobe + 0.5 * lobe2;
  }
  const auto peaks = peak_positions(axis, dens, 0.05, 2.0);
  REQUIRE(peaks.size() == 2);
  REQUIRE_THAT(peaks[0], Catch::Matchers::WithinAbs(0.0, 0.02));
  REQUIRE_THAT(peaks[1], Catch::Matchers::WithinAbs(6.0, 0.02));
}

TEST_CASE("median gap statistic") {
  REQUIRE_THAT(median_gap({0.0, 4.0, 8.1, 12.0}), Catch::Matchers::WithinAbs(4.0, 1e-12));
  REQUIRE_THROWS_AS(median_gap({1.0}), numerics_error);
}

TEST_CASE("edge contact is rejected for momentum transforms") {
  WavepacketSpec spec;  // flat top, half width pi
  // Window barely wider than the support: the packet reaches into the
  // outermost percent of the grid.
  const Grid tight = Grid::over_support(-pi, pi, 10, 0.005);
  const auto f = build_wavepacket(spec, tight);
  InteractionConfig cfg;
  REQUIRE_THROWS_AS(momentum_distribution(tight, f, cfg), numerics_error);
}

TEST_CASE("grid doubling leaves the comb statistics in place") {
  FlatTopRun run14(14);
  FlatTopRun run15(15);
  const auto m14 = momentum_distribution(run14.g, run14.f, run14.cfg);
  const auto m15 = momentum_distribution(run15.g, run15.f, run15.cfg);
  const auto pa14 = peak_positions(m14.axis, m14.p_a, 0.05, 2.0);
  const auto pa15 = peak_positions(m15.axis, m15.p_a, 0.05, 2.0);
  REQUIRE_THAT(median_gap(pa14), Catch::Matchers::WithinAbs(median_gap(pa15), m14.spacing()));
}
