#pragma once

// Minimal gate-level engine for the two measurement networks: Walsh-Hadamard
// and rotation gates, ZZ couplings, controlled unitaries, exact
// state-preparation unitaries and the Fig-style preparation angles.

#include <cstdio>
#include <sstream>

#include "qprobe/probe_protocol.hpp"

namespace qprobe {

enum class GateKind { WalshHadamard, RotX, RotY, RotZ, ZZ, ControlledUnitary };

// A gate instance.  Single-qubit kinds accept several targets and act as the
// tensor product of one copy per target; ZZ takes exactly two targets.  A
// controlled unitary applies `unitary` to its targets when the control qubit
// equals control_value.
struct Gate {
  GateKind kind;
  std::vector<int> targets;
  double angle = 0.0;
  int control = -1;
  int control_value = 0;
  std::vector<cx> unitary;  // row-major, 2^targets square, CU only

  static Gate walsh(int q) { return Gate{GateKind::WalshHadamard, {q}}; }
  static Gate rot_x(std::vector<int> qs, double a) { return Gate{GateKind::RotX, std::move(qs), a}; }
  static Gate rot_y(std::vector<int> qs, double a) { return Gate{GateKind::RotY, std::move(qs), a}; }
  static Gate rot_z(std::vector<int> qs, double a) { return Gate{GateKind::RotZ, std::move(qs), a}; }
  static Gate zz(int q1, int q2, double a) { return Gate{GateKind::ZZ, {q1, q2}, a}; }
  static Gate controlled(int control, int value, std::vector<int> targets,
                         std::vector<cx> unitary) {
    Gate g{GateKind::ControlledUnitary, std::move(targets)};
    g.control = control;
    g.control_value = value;
    g.unitary = std::move(unitary);
    const std::size_t d = std::size_t{1} << g.targets.size();
    if (g.unitary.size() != d * d)
      throw std::invalid_argument("Gate::controlled: unitary size does not match targets");
    if (value != 0 && value != 1)
      throw std::invalid_argument("Gate::controlled: control value must be 0 or 1");
    return g;
  }
};

struct Circuit {
  std::vector<int> labels;
  std::vector<Gate> gates;
};

namespace detail {

inline std::vector<cx> kron_raw(const std::vector<cx>& a, std::size_t da,
                                const std::vector<cx>& b, std::size_t db) {
  std::vector<cx> c(da * db * da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l)
          c[(i * db + k) * da * db + (j * db + l)] = a[i * da + j] * b[k * db + l];
  return c;
}

inline std::vector<cx> single_qubit_matrix(GateKind kind, double a) {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const double c = std::cos(a / 2), s = std::sin(a / 2);
  switch (kind) {
    case GateKind::WalshHadamard:
      return {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};
    case GateKind::RotX:
      return {c, cx(0, -s), cx(0, -s), c};
    case GateKind::RotY:
      return {c, -s, s, c};
    case GateKind::RotZ:
      return {std::polar(1.0, -a / 2), 0, 0, std::polar(1.0, a / 2)};
    default:
      throw std::invalid_argument("single_qubit_matrix: not a single-qubit kind");
  }
}

}  // namespace detail

// Qubits the gate touches, in the gate's local bit order (control first).
inline std::vector<int> gate_qubits(const Gate& g) {
  if (g.kind == GateKind::ControlledUnitary) {
    std::vector<int> qs{g.control};
    qs.insert(qs.end(), g.targets.begin(), g.targets.end());
    return qs;
  }
  return g.targets;
}

// Matrix of the gate on gate_qubits(), row-major.
inline std::vector<cx> gate_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::WalshHadamard:
    case GateKind::RotX:
    case GateKind::RotY:
    case GateKind::RotZ: {
      if (g.targets.empty()) throw std::invalid_argument("gate_matrix: no targets");
      std::vector<cx> m = detail::single_qubit_matrix(g.kind, g.angle);
      std::size_t d = 2;
      for (std::size_t k = 1; k < g.targets.size(); ++k) {
        m = detail::kron_raw(m, d, detail::single_qubit_matrix(g.kind, g.angle), 2);
        d *= 2;
      }
      return m;
    }
    case GateKind::ZZ: {
      if (g.targets.size() != 2) throw std::invalid_argument("gate_matrix: ZZ needs two targets");
      const cx e = std::polar(1.0, -g.angle), ec = std::polar(1.0, g.angle);
      return {e, 0, 0, 0, 0, ec, 0, 0, 0, 0, ec, 0, 0, 0, 0, e};
    }
    case GateKind::ControlledUnitary: {
      const std::size_t d = std::size_t{1} << g.targets.size();
      std::vector<cx> m(4 * d * d);
      for (std::size_t i = 0; i < d; ++i) m[(i + (1 - g.control_value) * d) * 2 * d + i + (1 - g.control_value) * d] = 1.0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          m[(i + g.control_value * d) * 2 * d + j + g.control_value * d] = g.unitary[i * d + j];
      return m;
    }
  }
  throw std::invalid_argument("gate_matrix: unknown kind");
}

// Unitarity defect max|M^dagger M - I| of the gate's matrix.
inline double gate_unitarity_defect(const Gate& g) {
  const std::vector<cx> m = gate_matrix(g);
  const std::size_t d = std::size_t(std::lround(std::sqrt(double(m.size()))));
  double worst = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      cx acc{};
      for (std::size_t k = 0; k < d; ++k) acc += std::conj(m[k * d + i]) * m[k * d + j];
      worst = std::max(worst, std::abs(acc - (i == j ? cx{1.0} : cx{})));
    }
  return worst;
}

// Expands the gate to the full register operator.
inline DenseOperator embed_gate(const Gate& g, const std::vector<int>& labels) {
  const std::vector<int> qs = gate_qubits(g);
  std::vector<std::size_t> pos;
  for (int q : qs) {
    const auto it = std::find(labels.begin(), labels.end(), q);
    if (it == labels.end()) throw std::domain_error("embed_gate: gate target outside register");
    pos.push_back(static_cast<std::size_t>(it - labels.begin()));
  }
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = i + 1; j < pos.size(); ++j)
      if (pos[i] == pos[j]) throw std::domain_error("embed_gate: duplicate gate target");

  const std::vector<cx> m = gate_matrix(g);
  const std::size_t gd = std::size_t{1} << qs.size();
  const std::size_t nbits = labels.size();
  DenseOperator full(labels);
  std::size_t rest_mask = full.dim - 1;
  for (std::size_t p : pos) rest_mask &= ~(std::size_t{1} << (nbits - 1 - p));
  auto local_bits = [&](std::size_t idx) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < pos.size(); ++b)
      r |= ((idx >> (nbits - 1 - pos[b])) & 1u) << (pos.size() - 1 - b);
    return r;
  };
  for (std::size_t i = 0; i < full.dim; ++i)
    for (std::size_t j = 0; j < full.dim; ++j) {
      if ((i & rest_mask) != (j & rest_mask)) continue;
      full(i, j) = m[local_bits(i) * gd + local_bits(j)];
    }
  return full;
}

inline StateVector run_circuit(const Circuit& c, const StateVector& input) {
  detail::check_labels_equal(c.labels, input.labels, "run_circuit");
  StateVector psi = input;
  for (const Gate& g : c.gates) {
    if (gate_unitarity_defect(g) > 1e-12)
      throw std::domain_error("run_circuit: gate matrix is not unitary");
    psi = apply(embed_gate(g, c.labels), psi);
  }
  return psi;
}

// Product of all gate operators in application order.
inline DenseOperator circuit_operator(const Circuit& c) {
  DenseOperator u = DenseOperator::identity(c.labels);
  for (const Gate& g : c.gates) u = embed_gate(g, c.labels) * u;
  return u;
}

// Completes |target> to a full unitary (first column = target) by
// Gram-Schmidt over the canonical basis.
inline std::vector<cx> prep_unitary(const StateVector& target) {
  const std::size_t d = target.dim;
  std::vector<std::vector<cx>> cols;
  std::vector<cx> first = target.amp;
  {
    double n = target.norm();
    if (std::abs(n - 1.0) > 1e-10)
      throw std::invalid_argument("prep_unitary: target state not normalized");
    for (cx& v : first) v /= n;
  }
  cols.push_back(first);
  for (std::size_t j = 0; j < d && cols.size() < d; ++j) {
    std::vector<cx> v(d);
    v[j] = 1.0;
    for (const auto& c : cols) {
      cx ip{};
      for (std::size_t i = 0; i < d; ++i) ip += std::conj(c[i]) * v[i];
      for (std::size_t i = 0; i < d; ++i) v[i] -= ip * c[i];
    }
    double n2 = 0.0;
    for (const cx& x : v) n2 += std::norm(x);
    if (n2 < 1e-16) continue;
    const double n = std::sqrt(n2);
    for (cx& x : v) x /= n;
    cols.push_back(std::move(v));
  }
  std::vector<cx> u(d * d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) u[i * d + j] = cols[j][i];
  return u;
}

// -- level-crossing network (protocol A) -------------------------------------

// W on the probe, then conditional preparations of the two effective-field
// ground states; run on |000> this reproduces the network output state.
inline Circuit build_lc_network(double bz, double eps) {
  Circuit c{{0, 1, 2}, {}};
  c.gates.push_back(Gate::walsh(0));
  c.gates.push_back(Gate::controlled(0, 0, {1, 2},
                                     prep_unitary(ground_state_analytic(bz + eps).state)));
  c.gates.push_back(Gate::controlled(0, 1, {1, 2},
                                     prep_unitary(ground_state_analytic(bz - eps).state)));
  return c;
}

// -- preparation angles ------------------------------------------------------

struct PrepAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  bool alpha_saturated = false;  // c_plus = 0, alpha at its limit
  bool beta_saturated = false;   // c0 = 0, beta at the +-pi branch limit
};

// Principal-value angles satisfying tan(alpha/2) = -sqrt(2) c1 / c_plus,
// tan(beta/2) = -c_plus / (sqrt(2) c0), tan(theta/2) = sin(beta/2)/cos(alpha/2).
// Poles are returned as limit values with the saturation flag set.
inline PrepAngles prep_angles(const TripletAmplitudes& c) {
  const double n2 = c.c0 * c.c0 + c.c_plus * c.c_plus + c.c1 * c.c1;
  if (std::abs(n2 - 1.0) > 1e-10)
    throw std::invalid_argument("prep_angles: amplitudes not normalized");
  PrepAngles r;
  if (c.c_plus == 0.0) {
    r.alpha_saturated = true;
    r.alpha = c.c1 == 0.0 ? 0.0 : std::copysign(std::numbers::pi, -c.c1);
  } else {
    r.alpha = 2.0 * std::atan(-std::numbers::sqrt2 * c.c1 / c.c_plus);
  }
  if (c.c0 == 0.0) {
    r.beta_saturated = true;
    r.beta = c.c_plus == 0.0 ? 0.0 : std::copysign(std::numbers::pi, -c.c_plus);
  } else {
    r.beta = 2.0 * std::atan(-c.c_plus / (std::numbers::sqrt2 * c.c0));
  }
  const double ca = std::cos(r.alpha / 2);
  const double sb = std::sin(r.beta / 2);
  r.theta = ca == 0.0 ? std::copysign(std::numbers::pi, sb) : 2.0 * std::atan(sb / ca);
  return r;
}

// -- avoided-crossing circuit (protocol B) -----------------------------------

// Exact preparation of |+>|psi_g(bx,bz)> followed by the six-factor
// Trotterized probe evolution as gates.
inline Circuit build_ac_circuit(const ProtocolRun& run) {
  const ChainSpec spec = detail::system_only(run.spec);
  if (spec.n != 2)
    throw std::invalid_argument("build_ac_circuit: register is fixed at two system qubits");
  const GroundState g = ground_state_numeric(spec, Sector::full);
  const std::vector<cx> prep = prep_unitary(g.state);

  Circuit c{{0, 1, 2}, {}};
  c.gates.push_back(Gate::walsh(0));
  c.gates.push_back(Gate::controlled(0, 0, {1, 2}, prep));
  c.gates.push_back(Gate::controlled(0, 1, {1, 2}, prep));
  const double tau = run.tau;
  c.gates.push_back(Gate::rot_x({1, 2}, tau * spec.bx));       // e^{-i tau Bx X/2}
  c.gates.push_back(Gate::rot_z({1, 2}, 2.0 * tau * spec.bz)); // e^{-i tau Bz Z}
  c.gates.push_back(Gate::zz(0, 2, tau * run.spec.eps));
  c.gates.push_back(Gate::zz(0, 1, tau * run.spec.eps));
  c.gates.push_back(Gate::zz(1, 2, tau));
  c.gates.push_back(Gate::rot_x({1, 2}, tau * spec.bx));
  return c;
}

// -- serialization -----------------------------------------------------------

namespace detail {

inline std::string fmt_angle(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace detail

// One gate per line: KIND target(s) [angle]; controlled unitaries carry the
// control, control value, targets and the row-major matrix entries.
inline std::string serialize_circuit(const Circuit& c) {
  std::ostringstream out;
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::WalshHadamard:
        out << "W";
        for (int t : g.targets) out << ' ' << t;
        break;
      case GateKind::RotX:
      case GateKind::RotY:
      case GateKind::RotZ: {
        out << (g.kind == GateKind::RotX ? "ROTX" : g.kind == GateKind::RotY ? "ROTY" : "ROTZ");
        for (int t : g.targets) out << ' ' << t;
        out << ' ' << detail::fmt_angle(g.angle);
        break;
      }
      case GateKind::ZZ:
        out << "ZZ " << g.targets[0] << ' ' << g.targets[1] << ' '
            << detail::fmt_angle(g.angle);
        break;
      case GateKind::ControlledUnitary:
        out << "CU " << g.control << ' ' << g.control_value;
        for (int t : g.targets) out << ' ' << t;
        for (const cx& v : g.unitary)
          out << ' ' << detail::fmt_angle(v.real()) << ' ' << detail::fmt_angle(v.imag());
        break;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace qprobe
