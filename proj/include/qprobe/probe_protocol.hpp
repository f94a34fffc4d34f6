#pragma once

// The two probe-qubit detection protocols:
//   (A) level crossing: conditional preparation of the two effective-field
//       ground states and readout of the probe coherence,
//   (B) avoided crossing: split evolution of the system ground state under
//       the two probe-conditioned Hamiltonians, exact or Trotterized.

#include <utility>

#include "qprobe/spin_model.hpp"

namespace qprobe {

enum class Method { exact, trotter };
enum class Branch { plus, minus };  // probe eigenvalue sign substituted for sz_0

struct ProtocolRun {
  ChainSpec spec;          // probe coupling via spec.eps; spec.with_probe unused here
  double tau = 1.6;
  Method method = Method::exact;
  int trotter_steps = 1;   // the experiment applies the product once
};

// -- protocol A: level crossing ----------------------------------------------

struct LevelCrossingOverlap {
  double value = 0.0;
  bool degenerate = false;  // an effective field sat exactly on a critical point
};

// L = |<psi_g(bz+eps)|psi_g(bz-eps)>|^2 from the analytic ground states.
inline LevelCrossingOverlap overlap_level_crossing(double bz, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("overlap_level_crossing: requires eps > 0");
  const AnalyticGround a = ground_state_analytic(bz + eps);
  const AnalyticGround b = ground_state_analytic(bz - eps);
  return LevelCrossingOverlap{overlap(a.state, b.state), a.degenerate || b.degenerate};
}

// (|0>|psi_g(bz+eps)> + |1>|psi_g(bz-eps)>)/sqrt(2) on labels {0, 1, 2}.
inline StateVector build_network_state(double bz, double eps) {
  const AnalyticGround a = ground_state_analytic(bz + eps);
  const AnalyticGround b = ground_state_analytic(bz - eps);
  StateVector psi({0, 1, 2});
  for (std::size_t i = 0; i < 4; ++i) {
    psi.amp[i] = a.state.amp[i] / std::numbers::sqrt2;
    psi.amp[4 + i] = b.state.amp[i] / std::numbers::sqrt2;
  }
  return psi;
}

struct ReadoutResult {
  double L_direct = 0.0;      // 4 |<branch_0|branch_1>|^2 from the raw amplitudes
  double L_probe = 0.0;       // 4 |tr(rho_0 sigma_+)|^2 from the reduced probe state
  DenseOperator probe_rho;    // 2-dim
};

// Probe coherence readout.  The register must contain qubit 0.
inline ReadoutResult probe_readout(const StateVector& psi) {
  const auto it = std::find(psi.labels.begin(), psi.labels.end(), 0);
  if (it == psi.labels.end())
    throw std::invalid_argument("probe_readout: register has no probe qubit 0");
  const std::size_t pos = static_cast<std::size_t>(it - psi.labels.begin());
  const std::size_t bit = std::size_t{1} << (psi.labels.size() - 1 - pos);

  ReadoutResult r;
  r.probe_rho = partial_trace(psi, {0});
  // tr(rho sigma_+) = rho_10
  r.L_probe = 4.0 * std::norm(r.probe_rho(1, 0));
  cx branch_inner{};  // <u|v> with psi = |0>u + |1>v
  for (std::size_t i = 0; i < psi.dim; ++i)
    if ((i & bit) == 0) branch_inner += std::conj(psi.amp[i]) * psi.amp[i | bit];
  r.L_direct = 4.0 * std::norm(branch_inner);
  return r;
}

// -- protocol B: avoided crossing --------------------------------------------

namespace detail {

inline ChainSpec system_only(const ChainSpec& spec) {
  ChainSpec s = spec;
  s.with_probe = false;
  return s;
}

inline ChainSpec shifted(const ChainSpec& spec, double dbz) {
  ChainSpec s = system_only(spec);
  s.bz += dbz;
  s.eps = 0.0;
  return s;
}

}  // namespace detail

// Exact split evolution from the system ground state:
// psi0 = e^{-i H0 tau} |psi_g>, psi1 = e^{-i H1 tau} |psi_g>, with
// H0/H1 = H_T +/- eps * sum_i sz_i (equivalently bz -> bz +/- eps).
inline std::pair<StateVector, StateVector> split_evolution(const ProtocolRun& run) {
  const GroundState g = ground_state_numeric(detail::system_only(run.spec), Sector::full);
  const DenseOperator h0 = hamiltonian_transverse(detail::shifted(run.spec, +run.spec.eps));
  const DenseOperator h1 = hamiltonian_transverse(detail::shifted(run.spec, -run.spec.eps));
  return {evolve(h0, run.tau, g.state), evolve(h1, run.tau, g.state)};
}

// Single symmetric six-factor product, applied right-to-left with the probe
// operator sz_0 replaced by its eigenvalue (+1 for Branch::plus):
//   e^{-i t Bx X/2} e^{-i t ZZ} e^{-i t eps sz0 sz1} e^{-i t eps sz0 sz2}
//   e^{-i t Bz Z} e^{-i t Bx X/2},   X = sum sx_i, Z = sum sz_i.
// trotter_steps > 1 repeats the block with t = tau/steps.
inline StateVector trotter_evolution(const ProtocolRun& run, const StateVector& psi,
                                     Branch branch) {
  const ChainSpec spec = detail::system_only(run.spec);
  validate(spec);
  if (run.trotter_steps < 1)
    throw std::invalid_argument("trotter_evolution: trotter_steps must be >= 1");
  const std::vector<int> labs = system_labels(spec);
  const double sign = branch == Branch::plus ? 1.0 : -1.0;

  DenseOperator hx(labs), hz(labs), hzz(labs), he(labs);
  for (int i = 1; i <= spec.n; ++i) {
    hx = hx + 0.5 * spec.bx * single_site(labs, i, pauli_x(i));
    hz = hz + spec.bz * single_site(labs, i, pauli_z(i));
    he = he + sign * spec.eps * single_site(labs, i, pauli_z(i));
  }
  for (int i = 1; i < spec.n; ++i)
    hzz = hzz + single_site(labs, i, pauli_z(i)) * single_site(labs, i + 1, pauli_z(i + 1));
  hx.hermitian = hz.hermitian = hzz.hermitian = he.hermitian = true;

  const double dt = run.tau / run.trotter_steps;
  StateVector out = psi;
  for (int step = 0; step < run.trotter_steps; ++step) {
    out = evolve(hx, dt, out);
    out = evolve(hz, dt, out);
    out = evolve(he, dt, out);
    out = evolve(hzz, dt, out);
    out = evolve(hx, dt, out);
  }
  return out;
}

// L(tau) = |<Psi0(tau)|Psi1(tau)>|^2 at a single control value.
inline double overlap_avoided_point(const ProtocolRun& run) {
  if (run.method == Method::exact) {
    const auto [p0, p1] = split_evolution(run);
    return overlap(p0, p1);
  }
  const GroundState g = ground_state_numeric(detail::system_only(run.spec), Sector::full);
  const StateVector p0 = trotter_evolution(run, g.state, Branch::plus);
  const StateVector p1 = trotter_evolution(run, g.state, Branch::minus);
  return overlap(p0, p1);
}

// L over an ordered bz grid; output order follows the grid.
inline std::vector<double> overlap_avoided(const ProtocolRun& run,
                                           const std::vector<double>& bz_grid) {
  if (bz_grid.empty()) throw std::invalid_argument("overlap_avoided: empty grid");
  std::vector<double> out;
  out.reserve(bz_grid.size());
  for (double bz : bz_grid) {
    ProtocolRun r = run;
    r.spec.bz = bz;
    out.push_back(overlap_avoided_point(r));
  }
  return out;
}

// Per-branch squared overlap between the exact and Trotterized states.
inline std::pair<double, double> trotter_branch_fidelities(const ProtocolRun& run) {
  const GroundState g = ground_state_numeric(detail::system_only(run.spec), Sector::full);
  const auto [e0, e1] = split_evolution(run);
  const StateVector t0 = trotter_evolution(run, g.state, Branch::plus);
  const StateVector t1 = trotter_evolution(run, g.state, Branch::minus);
  return {overlap(e0, t0), overlap(e1, t1)};
}

}  // namespace qprobe
