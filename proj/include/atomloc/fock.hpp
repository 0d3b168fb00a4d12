#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <vector>

#include "atomloc/common.hpp"
#include "atomloc/model.hpp"

namespace atomloc::fock {

/// Truncated photon-number-basis state. Templated on the scalar so the oracle
/// can run in extended precision: the quadrature projection of a deeply
/// suppressed branch cancels O(1) terms down to ~exp(-20), which costs eight
/// digits of the accumulation's epsilon.
template <class Real>
struct State {
  std::vector<std::complex<Real>> c;

  Real norm2() const {
    Real s = 0;
    for (const auto& v : c) s += std::norm(v);
    return s;
  }
};

inline std::size_t default_n_max(double alpha) {
  const double guard = alpha * alpha + 10.0 * alpha;
  return std::max<std::size_t>(80, std::size_t(std::ceil(guard)));
}

/// c_n = e^{-alpha^2/2} alpha^n / sqrt(n!), by the stable ratio recursion.
template <class Real>
State<Real> coherent_state(Real alpha, std::size_t n_max, double max_truncation_loss = 1e-12) {
  State<Real> st;
  st.c.resize(n_max + 1);
  st.c[0] = std::exp(-alpha * alpha / Real(2));
  for (std::size_t n = 0; n < n_max; ++n)
    st.c[n + 1] = st.c[n] * alpha / std::sqrt(Real(n + 1));
  const Real loss = Real(1) - st.norm2();
  if (double(loss) > max_truncation_loss) {
    std::ostringstream os;
    os << "coherent-state truncation loss " << double(loss) << " exceeds "
       << max_truncation_loss << " at n_max=" << n_max;
    throw numerics_error(os.str());
  }
  return st;
}

/// exp(i angle a^dag a): c_n -> e^{i n angle} c_n.
template <class Real>
State<Real> phase_rotate(const State<Real>& st, Real angle) {
  State<Real> out = st;
  for (std::size_t n = 0; n < out.c.size(); ++n)
    out.c[n] *= std::polar(Real(1), angle * Real(n));
  return out;
}

/// Number-basis components of the delta-normalized eigenvector of
/// X_theta = a e^{-i theta} + a^dag e^{i theta}:
///   <n|chi_theta> = e^{i n theta} h_n(chi),
/// h_n the normalized Hermite functions of the X = a + a^dag eigenbasis,
///   h_0 = (2 pi)^{-1/4} e^{-chi^2/4},  h_{n+1} = (chi h_n - sqrt(n) h_{n-1}) / sqrt(n+1).
/// The outcome density for a coherent state is then a unit-variance Gaussian
/// with mean 2 Re[alpha e^{-i theta}].
template <class Real>
State<Real> quadrature_vector(Real chi, Real theta, std::size_t n_max) {
  const Real h0 = std::exp(-chi * chi / Real(4)) * Real(quad_norm);
  if (!(h0 > Real(0)))
    throw numerics_error("quadrature eigenvector underflow: |chi| too large for the recursion");
  State<Real> st;
  st.c.resize(n_max + 1);
  Real hm = 0, h = h0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    st.c[n] = std::polar(Real(1), theta * Real(n)) * h;
    const Real hp = (chi * h - std::sqrt(Real(n)) * hm) / std::sqrt(Real(n + 1));
    hm = h;
    h = hp;
  }
  return st;
}

template <class Real>
std::complex<Real> project(const State<Real>& bra, const State<Real>& ket) {
  const std::size_t n = std::min(bra.c.size(), ket.c.size());
  std::complex<Real> s = 0;
  for (std::size_t i = 0; i < n; ++i) s += std::conj(bra.c[i]) * ket.c[i];
  return s;
}

template <class Real>
struct BranchStates {
  State<Real> a, b;
};

/// Exact entangled-field branch attached to each internal state at fixed
/// atomic position. Ramsey off: the bare rotated branches with their
/// preparation weights. Ramsey on: the ± recombinations of the second pi/2
/// pulse, each with weight 1/sqrt(2).
template <class Real>
BranchStates<Real> simulate_final(double phi, const InteractionConfig& cfg,
                                  bool include_second_pulse, std::size_t n_max = 0) {
  if (n_max == 0) n_max = default_n_max(cfg.alpha);
  const double s = std::sin(phi);
  const Real eta = Real(cfg.g_tau) * Real(s) * Real(s);
  const auto base = coherent_state<Real>(Real(cfg.alpha), n_max);
  State<Real> plus = phase_rotate(base, eta);
  State<Real> minus = phase_rotate(base, -eta);
  const std::complex<Real> ca{Real(cfg.c_a.real()), Real(cfg.c_a.imag())};
  const std::complex<Real> cb{Real(cfg.c_b.real()), Real(cfg.c_b.imag())};

  BranchStates<Real> out;
  out.a.c.resize(n_max + 1);
  out.b.c.resize(n_max + 1);
  if (include_second_pulse) {
    const Real r = Real(1) / std::sqrt(Real(2));
    for (std::size_t n = 0; n <= n_max; ++n) {
      out.a.c[n] = (ca * plus.c[n] - cb * minus.c[n]) * r;
      out.b.c[n] = (ca * plus.c[n] + cb * minus.c[n]) * r;
    }
  } else {
    // Preparation weights stay attached so the branch norms sum to one.
    for (std::size_t n = 0; n <= n_max; ++n) {
      out.a.c[n] = ca * plus.c[n];
      out.b.c[n] = cb * minus.c[n];
    }
  }
  return out;
}

/// Ground-truth post-measurement amplitudes: quadrature projection of the
/// exact branch states. The closed forms in filters.hpp are tested against
/// this path.
template <class Real>
std::pair<std::complex<Real>, std::complex<Real>> oracle_amplitudes(double phi,
                                                                    const InteractionConfig& cfg,
                                                                    std::size_t n_max = 0) {
  if (n_max == 0) n_max = default_n_max(cfg.alpha);
  const auto branches = simulate_final<Real>(phi, cfg, cfg.ramsey_on, n_max);
  const auto chi_vec = quadrature_vector<Real>(Real(cfg.chi0), Real(cfg.theta), n_max);
  return {project(chi_vec, branches.a), project(chi_vec, branches.b)};
}

}  // namespace atomloc::fock
