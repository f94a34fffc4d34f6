#pragma once

// Ising chain in longitudinal/transverse fields with an optional probe
// qubit: Hamiltonian builders, analytic and numeric ground states, the
// effective two-level model near the avoided crossing, the sensitivity
// Lorentzian and Wootters concurrence.
//
// Units: hbar = 1, nearest-neighbour coupling J = 1; fields, energies and
// times are dimensionless.  The probe carries label 0, system spins 1..n.

#include <cmath>
#include <numbers>
#include <optional>

#include "qprobe/linalg.hpp"

namespace qprobe {

// Model parameters.  n = 2 is the reference system; n > 2 extends to an
// open-boundary nearest-neighbour chain with the probe coupled to every
// system spin.
struct ChainSpec {
  int n = 2;
  double bz = 0.0;
  double bx = 0.0;
  double eps = 0.0;
  bool with_probe = false;
};

inline void validate(const ChainSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("ChainSpec: n must be >= 2");
  if (spec.bx < 0) throw std::invalid_argument("ChainSpec: bx must be >= 0");
  if (spec.eps < 0) throw std::invalid_argument("ChainSpec: eps must be >= 0");
}

inline std::vector<int> system_labels(const ChainSpec& spec) {
  std::vector<int> labs;
  for (int i = 1; i <= spec.n; ++i) labs.push_back(i);
  return labs;
}

inline std::vector<int> register_labels(const ChainSpec& spec) {
  std::vector<int> labs;
  if (spec.with_probe) labs.push_back(0);
  for (int i = 1; i <= spec.n; ++i) labs.push_back(i);
  return labs;
}

namespace detail {

inline DenseOperator build_chain_hamiltonian(const ChainSpec& spec, bool include_bx) {
  validate(spec);
  const std::vector<int> labs = register_labels(spec);
  DenseOperator h(labs);
  auto add = [&](double coeff, const DenseOperator& term) {
    for (std::size_t i = 0; i < h.data.size(); ++i) h.data[i] += coeff * term.data[i];
  };
  for (int i = 1; i < spec.n; ++i)
    add(1.0, single_site(labs, i, pauli_z(i)) * single_site(labs, i + 1, pauli_z(i + 1)));
  for (int i = 1; i <= spec.n; ++i) {
    add(spec.bz, single_site(labs, i, pauli_z(i)));
    if (include_bx) add(spec.bx, single_site(labs, i, pauli_x(i)));
  }
  if (spec.with_probe) {
    const DenseOperator z0 = single_site(labs, 0, pauli_z(0));
    for (int i = 1; i <= spec.n; ++i)
      add(spec.eps, z0 * single_site(labs, i, pauli_z(i)));
  }
  h.hermitian = true;
  return h;
}

}  // namespace detail

// H = sum_i sz_i sz_{i+1} + Bz sum_i sz_i (+ eps sz_0 sum_i sz_i with probe)
inline DenseOperator hamiltonian_longitudinal(const ChainSpec& spec) {
  if (spec.bx != 0.0)
    throw std::invalid_argument("hamiltonian_longitudinal: requires bx = 0");
  return detail::build_chain_hamiltonian(spec, false);
}

// Adds Bx sum_i sx_i to the longitudinal Hamiltonian.
inline DenseOperator hamiltonian_transverse(const ChainSpec& spec) {
  return detail::build_chain_hamiltonian(spec, true);
}

// Full probe-coupled Hamiltonian on the (n+1)-qubit register.
inline DenseOperator hamiltonian_total(const ChainSpec& spec) {
  if (!spec.with_probe)
    throw std::invalid_argument("hamiltonian_total: requires with_probe");
  return detail::build_chain_hamiltonian(spec, true);
}

// -- analytic ground state (n = 2, bx = 0) -----------------------------------

struct AnalyticGround {
  StateVector state;   // on labels {1, 2}
  bool degenerate = false;
};

// |00> for bz < -1, |phi+> for -1 <= bz <= 1, |11> for bz > 1; exactly at
// bz = +-1 the mid-phase branch is returned with the degeneracy flag set.
inline AnalyticGround ground_state_analytic(double bz) {
  const std::vector<int> labs{1, 2};
  AnalyticGround g{StateVector(labs), std::abs(bz) == 1.0};
  if (bz < -1.0) {
    g.state.amp[0] = 1.0;  // |00>
  } else if (bz > 1.0) {
    g.state.amp[3] = 1.0;  // |11>
  } else {
    g.state.amp[1] = g.state.amp[2] = 1.0 / std::numbers::sqrt2;  // |phi+>
  }
  return g;
}

// -- numeric ground state ----------------------------------------------------

// Ground-state amplitudes on {|0..0>, |phi+>, |1..1>}.
struct TripletAmplitudes {
  double c0 = 0.0;
  double c_plus = 0.0;
  double c1 = 0.0;
};

enum class Sector { full, triplet };

struct GroundState {
  StateVector state;
  std::optional<TripletAmplitudes> amplitudes;  // triplet sector only
  bool near_degenerate = false;                 // gap below 1e-9
};

namespace detail {

// Rotate the global phase so the largest-magnitude amplitude is positive real.
inline void fix_phase(std::vector<cx>& amp) {
  std::size_t imax = 0;
  for (std::size_t i = 1; i < amp.size(); ++i)
    if (std::abs(amp[i]) > std::abs(amp[imax])) imax = i;
  const double mag = std::abs(amp[imax]);
  if (mag == 0.0) return;
  const cx phase = std::conj(amp[imax]) / mag;
  for (cx& a : amp) a *= phase;
}

}  // namespace detail

inline GroundState ground_state_numeric(const ChainSpec& spec, Sector sector) {
  validate(spec);
  if (sector == Sector::triplet) {
    if (spec.n != 2 || spec.with_probe)
      throw std::invalid_argument("ground_state_numeric: triplet sector requires n=2 without probe");
    // H restricted to span{|00>, |phi+>, |11>}
    const double s = std::numbers::sqrt2 * spec.bx;
    std::vector<cx> h3{1 + 2 * spec.bz, s, 0,
                       s, -1, s,
                       0, s, 1 - 2 * spec.bz};
    std::vector<double> w;
    std::vector<cx> v;
    detail::eigh_raw(std::move(h3), 3, w, v);
    std::vector<cx> c{v[0], v[3], v[6]};
    detail::fix_phase(c);
    TripletAmplitudes amps{c[0].real(), c[1].real(), c[2].real()};
    StateVector st(system_labels(spec));
    st.amp[0] = amps.c0;
    st.amp[1] = st.amp[2] = amps.c_plus / std::numbers::sqrt2;
    st.amp[3] = amps.c1;
    return GroundState{std::move(st), amps, w[1] - w[0] < 1e-9};
  }
  const DenseOperator h = hamiltonian_transverse(spec);
  const EighResult ed = eigh(h);
  StateVector st(h.labels);
  for (std::size_t i = 0; i < h.dim; ++i) st.amp[i] = ed.eigenvectors(i, 0);
  detail::fix_phase(st.amp);
  return GroundState{std::move(st), std::nullopt,
                     ed.eigenvalues[1] - ed.eigenvalues[0] < 1e-9};
}

// -- effective two-level model near the avoided crossing ---------------------

struct EffectiveTwoLevel {
  double splitting_gap = 0.0;  // 2*sqrt(2)*bx, the gap at |bz| = 1
  double phi = 0.0;            // mixing angle in [0, pi]
};

// Mixing angle of the two lowest levels, continuous in bz on each side of
// bz = 0 with phi(|bz| = 1) = pi/2.  The branch is fixed so that
// sin^2(phi/2) equals the |phi+> weight of the exact two-level ground state:
// phi = pi - atan2(sqrt(2) bx, 1 - |bz|).
inline double mixing_angle(double bz, double bx) {
  if (bx == 0.0 && std::abs(bz) == 1.0)
    throw std::domain_error("mixing_angle: degenerate at |bz| = 1 with bx = 0");
  if (bx <= 0.0) throw std::invalid_argument("mixing_angle: requires bx > 0");
  return std::numbers::pi - std::atan2(std::numbers::sqrt2 * bx, 1.0 - std::abs(bz));
}

inline EffectiveTwoLevel effective_two_level(double bz, double bx) {
  return EffectiveTwoLevel{2.0 * std::numbers::sqrt2 * bx, mixing_angle(bz, bx)};
}

// Two-level ground state embedded into the 4-dim register:
// sin(phi/2)|phi+> - cos(phi/2)|ll>, with |ll> = |11> for bz >= 0, |00> else.
// The relative sign is fixed by the positive off-diagonal coupling sqrt(2) bx.
inline StateVector effective_ground_state(double bz, double bx) {
  const double phi = mixing_angle(bz, bx);
  StateVector st({1, 2});
  st.amp[bz >= 0 ? 3 : 0] = -std::cos(phi / 2);
  st.amp[1] = st.amp[2] = std::sin(phi / 2) / std::numbers::sqrt2;
  return st;
}

// d phi / d|bz| = sqrt(2) bx / [2 bx^2 + (1 - |bz|)^2], a Lorentzian peaked
// at the critical points with FWHM 2*sqrt(2)*bx.
inline double sensitivity(double bz, double bx) {
  if (bx <= 0.0) throw std::invalid_argument("sensitivity: requires bx > 0");
  const double d = 1.0 - std::abs(bz);
  return std::numbers::sqrt2 * bx / (2 * bx * bx + d * d);
}

// -- concurrence (Wootters) --------------------------------------------------

inline double concurrence(const DenseOperator& rho) {
  if (rho.dim != 4) throw std::invalid_argument("concurrence: expected a two-qubit state");
  if (!rho.is_hermitian() || std::abs(trace(rho).real() - 1.0) > 1e-8 ||
      std::abs(trace(rho).imag()) > 1e-10)
    throw std::domain_error("concurrence: not a density matrix");
  EighResult ed = eigh(rho);
  if (ed.eigenvalues.front() < -1e-10)
    throw std::domain_error("concurrence: density matrix not positive semidefinite");
  // sqrt(rho) via the spectral decomposition
  DenseOperator sq(rho.labels);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      cx acc{};
      for (std::size_t k = 0; k < 4; ++k)
        acc += ed.eigenvectors(i, k) * std::sqrt(std::max(0.0, ed.eigenvalues[k])) *
               std::conj(ed.eigenvectors(j, k));
      sq(i, j) = acc;
    }
  sq.hermitian = true;
  const DenseOperator yy = kron(pauli_y(rho.labels[0]), pauli_y(rho.labels[1]));
  DenseOperator rho_tilde = yy * conjugate(rho) * yy;
  rho_tilde.labels = rho.labels;
  DenseOperator m = sq * rho_tilde * sq;
  m.hermitian = true;  // PSD by construction, up to roundoff
  EighResult em = eigh(m);
  double c = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const double lam = std::sqrt(std::max(0.0, em.eigenvalues[k]));
    c += (k == 3 ? lam : -lam);
  }
  return std::clamp(c, 0.0, 1.0);
}

// -- spectrum ----------------------------------------------------------------

inline std::vector<double> spectrum(const ChainSpec& spec) {
  return eigh(hamiltonian_transverse(spec)).eigenvalues;
}

}  // namespace qprobe
