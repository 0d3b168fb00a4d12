#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "atomloc/common.hpp"
#include "atomloc/grid.hpp"
#include "atomloc/model.hpp"

using namespace atomloc;

TEST_CASE("trapezoid and linspace basics") {
  const auto xs = linspace(0.0, pi, 20001);
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = std::sin(xs[i]);
  REQUIRE_THAT(trapezoid(xs, ys), Catch::Matchers::WithinAbs(2.0, 1e-8));
  REQUIRE_THAT(trapezoid(ys, xs[1] - xs[0]), Catch::Matchers::WithinAbs(2.0, 1e-8));
  REQUIRE(xs.front() == 0.0);
  REQUIRE(xs.back() == pi);
}

TEST_CASE("grid geometry ties position and momentum lattices") {
  const Grid g = Grid::over_support(-pi, pi, 10);
  REQUIRE(g.n == 1024);
  REQUIRE_THAT(g.lo, Catch::Matchers::WithinAbs(-9.0 * pi, 1e-12));
  REQUIRE_THAT(g.hi(), Catch::Matchers::WithinAbs(9.0 * pi, 1e-9));
  REQUIRE_THAT(g.dq() * (g.dphi * double(g.n)), Catch::Matchers::WithinRel(two_pi, 1e-13));
  REQUIRE(g.q(g.n / 2) == 0.0);
  REQUIRE(g.q(g.n / 2 + 1) == g.dq());
  const auto phis = g.phi_values();
  REQUIRE(phis.size() == g.n);
  REQUIRE(phis[0] == g.lo);
}

TEST_CASE("degenerate support gets a surrogate window") {
  const Grid g = Grid::over_support(0.5, 0.5, 8);
  REQUIRE(g.lo < 0.5);
  REQUIRE(g.hi() > 0.5);
}

TEST_CASE("grid size bounds are enforced") {
  REQUIRE_THROWS_AS(Grid::over_support(0.0, 1.0, 2), config_error);
  REQUIRE_THROWS_AS(Grid::over_support(0.0, 1.0, 25), config_error);
}

TEST_CASE("radix-2 transform matches the direct sum") {
  std::mt19937_64 gen(7);
  auto u = [&] { return double(gen() >> 11) * 0x1.0p-53 - 0.5; };
  std::vector<cplx> x(16);
  for (auto& v : x) v = {u(), u()};
  auto fftd = x;
  fft_radix2(fftd);
  for (std::size_t k = 0; k < x.size(); ++k) {
    cplx want{0.0, 0.0};
    for (std::size_t m = 0; m < x.size(); ++m)
      want += x[m] * std::polar(1.0, -two_pi * double(k * m) / double(x.size()));
    REQUIRE(std::abs(fftd[k] - want) < 1e-12);
  }
}

TEST_CASE("momentum amplitude preserves probability exactly") {
  const Grid g = Grid::over_support(-2.0, 2.0, 10);
  std::mt19937_64 gen(11);
  auto u = [&] { return double(gen() >> 11) * 0x1.0p-53 - 0.5; };
  std::vector<cplx> psi(g.n);
  for (auto& v : psi) v = {u(), u()};
  const auto tilde = momentum_amplitude(g, psi);
  double mass_x = 0.0, mass_q = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    mass_x += std::norm(psi[i]) * g.dphi;
    mass_q += std::norm(tilde[i]) * g.dq();
  }
  REQUIRE_THAT(mass_q, Catch::Matchers::WithinRel(mass_x, 1e-12));
}

TEST_CASE("momentum amplitude of a modulated Gaussian") {
  // f(phi) = (2 pi s^2)^{-1/4} exp(-(phi-c)^2/(4 s^2)) exp(i q0 phi)
  // transforms to a Gaussian density centered at q0 with std 1/(2 s).
  const double s = 0.35, c = 0.4, q0 = 3.0;
  const Grid g = Grid::over_support(c - 8.0 * s, c + 8.0 * s, 12);
  std::vector<cplx> psi(g.n);
  const double norm = std::pow(two_pi * s * s, -0.25);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double z = (g.phi(i) - c) / s;
    psi[i] = norm * std::exp(-z * z / 4.0) * std::polar(1.0, q0 * g.phi(i));
  }
  const auto tilde = momentum_amplitude(g, psi);
  const double sq = 1.0 / (2.0 * s);
  for (std::size_t i = 0; i < g.n; i += 97) {
    const double q = g.q(i);
    if (std::abs(q - q0) > 4.0 * sq) continue;
    const double zq = (q - q0) / sq;
    const double want = std::pow(two_pi * sq * sq, -0.5) * std::exp(-zq * zq / 2.0);
    REQUIRE_THAT(std::norm(tilde[i]), Catch::Matchers::WithinAbs(want, 1e-8));
  }
}

TEST_CASE("wavepacket construction normalizes and centers") {
  WavepacketSpec spec;
  spec.shape = GaussianSpec{pi / 4.0, 0.1 * pi};
  const Grid g = make_grid(spec);
  const auto f = build_wavepacket(spec, g);
  std::vector<double> dens(g.n), m1(g.n), m2(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    dens[i] = std::norm(f[i]);
    m1[i] = dens[i] * g.phi(i);
  }
  const double mass = trapezoid(dens, g.dphi);
  REQUIRE_THAT(mass, Catch::Matchers::WithinAbs(1.0, 1e-9));
  const double mean = trapezoid(m1, g.dphi) / mass;
  REQUIRE_THAT(mean, Catch::Matchers::WithinAbs(pi / 4.0, 1e-6));
  for (std::size_t i = 0; i < g.n; ++i)
    m2[i] = dens[i] * (g.phi(i) - mean) * (g.phi(i) - mean);
  REQUIRE_THAT(std::sqrt(trapezoid(m2, g.dphi) / mass),
               Catch::Matchers::WithinAbs(0.1 * pi, 1e-6));
}

TEST_CASE("flat-top wavepacket is constant on its support") {
  WavepacketSpec spec;  // default flat_top, half width pi
  const Grid g = make_grid(spec);
  const auto f = build_wavepacket(spec, g);
  double inside = -1.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    if (std::abs(g.phi(i)) <= pi - g.dphi) {
      if (inside < 0.0) inside = f[i].real();
      REQUIRE(f[i].real() == inside);
      REQUIRE(f[i].imag() == 0.0);
    }
    if (std::abs(g.phi(i)) > pi + g.dphi) REQUIRE(std::norm(f[i]) == 0.0);
  }
  REQUIRE_THAT(inside, Catch::Matchers::WithinRel(1.0 / std::sqrt(2.0 * pi), 1e-3));
}

TEST_CASE("tabulated wavepacket interpolates and a spike normalizes") {
  WavepacketSpec tab;
  tab.shape = TabulatedSpec{{0.0, 1.0, 2.0}, {cplx{0.0, 0.0}, cplx{1.0, 0.0}, cplx{0.0, 0.0}}};
  const Grid g = make_grid(tab, 10);
  const auto f = build_wavepacket(tab, g);
  std::vector<double> dens(g.n);
  for (std::size_t i = 0; i < g.n; ++i) dens[i] = std::norm(f[i]);
  REQUIRE_THAT(trapezoid(dens, g.dphi), Catch::Matchers::WithinAbs(1.0, 1e-9));

  WavepacketSpec spike;
  spike.shape = TabulatedSpec{{0.25}, {cplx{1.0, 0.0}}};
  const Grid gs = make_grid(spike, 8);
  const auto fs = build_wavepacket(spike, gs);
  std::size_t nonzero = 0;
  double mass = 0.0;
  for (std::size_t i = 0; i < gs.n; ++i) {
    if (std::norm(fs[i]) > 0.0) ++nonzero;
    mass += std::norm(fs[i]) * gs.dphi;
  }
  REQUIRE(nonzero == 1);
  REQUIRE_THAT(mass, Catch::Matchers::WithinAbs(1.0, 1e-9));
}

TEST_CASE("wavepacket outside the grid window is rejected") {
  WavepacketSpec spec;
  spec.shape = GaussianSpec{0.0, 0.5};
  const Grid g = Grid::over_support(-1.0, 1.0, 8, 1.0);  // window [-3, 3], support +/-4
  REQUIRE_THROWS_AS(build_wavepacket(spec, g), numerics_error);
}

TEST_CASE("regime validation accepts the dispersive example and rejects sign errors") {
  PhysicalRegime r;
  r.g_a = r.g_b = two_pi * 10.0;
  r.delta_b = two_pi * 1500.0;
  r.delta_a = -r.delta_b;
  r.gamma_a = r.gamma_b = two_pi * 6.0;
  const auto rep = validate_regime(r, InteractionConfig{});
  REQUIRE(rep.pass());
  REQUIRE_THAT(rep.ratio_a, Catch::Matchers::WithinAbs(250.0, 1e-9));
  REQUIRE_THAT(rep.ratio_b, Catch::Matchers::WithinAbs(250.0, 1e-9));

  auto wrong = r;
  wrong.delta_a = +1.0;
  REQUIRE_THROWS_AS(validate_regime(wrong, InteractionConfig{}), config_error);

  auto unbalanced = r;
  unbalanced.g_a *= 1.05;  // 10% imbalance in g^2
  const auto rep2 = validate_regime(unbalanced, InteractionConfig{});
  REQUIRE_FALSE(rep2.balance_ok);
  REQUIRE_FALSE(rep2.pass());

  auto marginal = r;
  marginal.margin = 300.0;
  const auto rep3 = validate_regime(marginal, InteractionConfig{});
  REQUIRE_FALSE(rep3.detuning_a_ok);
}
