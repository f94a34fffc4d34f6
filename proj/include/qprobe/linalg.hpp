#pragma once

// Dense complex linear algebra on labeled qubit registers: Kronecker
// composition, cyclic-Jacobi Hermitian eigendecomposition, unitary
// evolution, partial trace and state overlaps.  Everything is a pure
// function on immutable value types; dimensions are capped at 2^14.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qprobe {

using cx = std::complex<double>;

inline constexpr std::size_t kMaxDim = std::size_t{1} << 14;
inline constexpr double kHermTol = 1e-12;

namespace detail {

inline std::size_t dim_for_labels(std::size_t n_labels) {
  return std::size_t{1} << n_labels;
}

inline void check_labels_equal(const std::vector<int>& a, const std::vector<int>& b,
                               const char* what) {
  if (a != b) throw std::domain_error(std::string(what) + ": register label mismatch");
}

}  // namespace detail

// Square complex matrix on an ordered qubit register.  The first label is
// the most significant bit of the basis index.
struct DenseOperator {
  std::vector<int> labels;
  std::size_t dim = 0;
  std::vector<cx> data;  // row-major
  bool hermitian = false;

  DenseOperator() = default;
  explicit DenseOperator(std::vector<int> labs)
      : labels(std::move(labs)), dim(detail::dim_for_labels(labels.size())), data(dim * dim) {
    if (dim > kMaxDim) throw std::length_error("DenseOperator: dimension exceeds 2^14 cap");
  }

  cx& operator()(std::size_t i, std::size_t j) { return data[i * dim + j]; }
  const cx& operator()(std::size_t i, std::size_t j) const { return data[i * dim + j]; }

  static DenseOperator identity(std::vector<int> labs) {
    DenseOperator op(std::move(labs));
    for (std::size_t i = 0; i < op.dim; ++i) op(i, i) = 1.0;
    op.hermitian = true;
    return op;
  }

  static DenseOperator from_entries(std::vector<int> labs, std::vector<cx> entries) {
    DenseOperator op(std::move(labs));
    if (entries.size() != op.dim * op.dim)
      throw std::invalid_argument("DenseOperator: entry count does not match dimension");
    op.data = std::move(entries);
    return op;
  }

  double max_abs() const {
    double m = 0.0;
    for (const cx& v : data) m = std::max(m, std::abs(v));
    return m;
  }

  // max |A - A^dagger|
  double hermiticity_defect() const {
    double m = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j)
        m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
  }

  bool is_hermitian(double tol = kHermTol) const {
    return hermiticity_defect() < tol * std::max(1.0, max_abs());
  }
};

// Normalized amplitude vector over the computational basis of a register.
struct StateVector {
  std::vector<int> labels;
  std::size_t dim = 0;
  std::vector<cx> amp;

  StateVector() = default;
  explicit StateVector(std::vector<int> labs)
      : labels(std::move(labs)), dim(detail::dim_for_labels(labels.size())), amp(dim) {
    if (dim > kMaxDim) throw std::length_error("StateVector: dimension exceeds 2^14 cap");
  }

  static StateVector basis(std::vector<int> labs, std::size_t index) {
    StateVector s(std::move(labs));
    if (index >= s.dim) throw std::invalid_argument("StateVector::basis: index out of range");
    s.amp[index] = 1.0;
    return s;
  }

  static StateVector from_amplitudes(std::vector<int> labs, std::vector<cx> a) {
    StateVector s(std::move(labs));
    if (a.size() != s.dim)
      throw std::invalid_argument("StateVector: amplitude count does not match dimension");
    s.amp = std::move(a);
    return s;
  }

  double norm() const {
    double n2 = 0.0;
    for (const cx& a : amp) n2 += std::norm(a);
    return std::sqrt(n2);
  }

  void normalize() {
    double n = norm();
    if (n == 0.0) throw std::domain_error("StateVector::normalize: zero vector");
    for (cx& a : amp) a /= n;
  }
};

// -- elementary operator algebra ---------------------------------------------

inline DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  detail::check_labels_equal(a.labels, b.labels, "operator*");
  DenseOperator c(a.labels);
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t k = 0; k < a.dim; ++k) {
      const cx aik = a(i, k);
      if (aik == cx{}) continue;
      for (std::size_t j = 0; j < a.dim; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
  detail::check_labels_equal(a.labels, b.labels, "operator+");
  DenseOperator c = a;
  for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] += b.data[i];
  c.hermitian = a.hermitian && b.hermitian;
  return c;
}

inline DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
  detail::check_labels_equal(a.labels, b.labels, "operator-");
  DenseOperator c = a;
  for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] -= b.data[i];
  c.hermitian = a.hermitian && b.hermitian;
  return c;
}

inline DenseOperator operator*(double s, const DenseOperator& a) {
  DenseOperator c = a;
  for (cx& v : c.data) v *= s;
  return c;
}

inline DenseOperator dagger(const DenseOperator& a) {
  DenseOperator c(a.labels);
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) c(j, i) = std::conj(a(i, j));
  c.hermitian = a.hermitian;
  return c;
}

inline DenseOperator conjugate(const DenseOperator& a) {
  DenseOperator c = a;
  for (cx& v : c.data) v = std::conj(v);
  return c;
}

inline cx trace(const DenseOperator& a) {
  cx t{};
  for (std::size_t i = 0; i < a.dim; ++i) t += a(i, i);
  return t;
}

inline StateVector apply(const DenseOperator& op, const StateVector& psi) {
  detail::check_labels_equal(op.labels, psi.labels, "apply");
  StateVector out(psi.labels);
  for (std::size_t i = 0; i < op.dim; ++i) {
    cx acc{};
    for (std::size_t j = 0; j < op.dim; ++j) acc += op(i, j) * psi.amp[j];
    out.amp[i] = acc;
  }
  return out;
}

inline double max_abs_diff(const DenseOperator& a, const DenseOperator& b) {
  detail::check_labels_equal(a.labels, b.labels, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

// -- single-qubit building blocks --------------------------------------------

inline DenseOperator pauli_x(int label) {
  return DenseOperator::from_entries({label}, {0, 1, 1, 0});
}
inline DenseOperator pauli_y(int label) {
  return DenseOperator::from_entries({label}, {0, cx(0, -1), cx(0, 1), 0});
}
inline DenseOperator pauli_z(int label) {
  return DenseOperator::from_entries({label}, {1, 0, 0, -1});
}
// sigma_+ = (sigma_x + i sigma_y)/2
inline DenseOperator sigma_plus(int label) {
  return DenseOperator::from_entries({label}, {0, 1, 0, 0});
}

// -- Kronecker composition ---------------------------------------------------

inline DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  if (a.dim * b.dim > kMaxDim)
    throw std::length_error("kron: dimension exceeds 2^14 cap");
  std::vector<int> labs = a.labels;
  labs.insert(labs.end(), b.labels.begin(), b.labels.end());
  DenseOperator c(std::move(labs));
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) {
      const cx aij = a(i, j);
      if (aij == cx{}) continue;
      for (std::size_t k = 0; k < b.dim; ++k)
        for (std::size_t l = 0; l < b.dim; ++l)
          c(i * b.dim + k, j * b.dim + l) = aij * b(k, l);
    }
  c.hermitian = a.hermitian && b.hermitian;
  return c;
}

// Embeds a single-site operator into the full register (identity elsewhere).
inline DenseOperator single_site(const std::vector<int>& labels, int site,
                                 const DenseOperator& op2) {
  if (op2.dim != 2) throw std::invalid_argument("single_site: expected a 2x2 operator");
  auto it = std::find(labels.begin(), labels.end(), site);
  if (it == labels.end()) throw std::invalid_argument("single_site: unknown label");
  const std::size_t pos = static_cast<std::size_t>(it - labels.begin());
  DenseOperator out = DenseOperator::identity({labels[0]});
  if (pos == 0) out = DenseOperator::from_entries({site}, op2.data);
  for (std::size_t k = 1; k < labels.size(); ++k) {
    DenseOperator factor = (k == pos) ? DenseOperator::from_entries({labels[k]}, op2.data)
                                      : DenseOperator::identity({labels[k]});
    out = kron(out, factor);
  }
  out.hermitian = op2.hermitian || op2.is_hermitian();
  return out;
}

// -- Hermitian eigendecomposition (cyclic Jacobi) ----------------------------

struct EighResult {
  std::vector<double> eigenvalues;  // ascending
  DenseOperator eigenvectors;       // unitary; k-th column pairs with eigenvalues[k]
};

namespace detail {

// Cyclic Jacobi sweeps with complex rotations.  Runs until the off-diagonal
// Frobenius norm drops below tol (absolute, pre-scaled by the matrix norm).
inline void jacobi_hermitian(std::vector<cx>& a, std::size_t n, std::vector<cx>& v) {
  v.assign(n * n, cx{});
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  double scale = 0.0;
  for (const cx& x : a) scale = std::max(scale, std::abs(x));
  const double tol = 1e-14 * std::max(1.0, scale);
  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a[p * n + q]);
    if (std::sqrt(off) <= tol) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cx apq = a[p * n + q];
        const double mag = std::abs(apq);
        if (mag <= tol / n) continue;
        const cx e = apq / mag;  // phase of the pivot
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // rows p, q of R^dagger A
        for (std::size_t j = 0; j < n; ++j) {
          const cx ap = a[p * n + j], aq = a[q * n + j];
          a[p * n + j] = c * ap - s * e * aq;
          a[q * n + j] = s * std::conj(e) * ap + c * aq;
        }
        // columns p, q of (R^dagger A) R, and accumulate V <- V R
        for (std::size_t i = 0; i < n; ++i) {
          const cx ap = a[i * n + p], aq = a[i * n + q];
          a[i * n + p] = c * ap - s * std::conj(e) * aq;
          a[i * n + q] = s * e * ap + c * aq;
          const cx vp = v[i * n + p], vq = v[i * n + q];
          v[i * n + p] = c * vp - s * std::conj(e) * vq;
          v[i * n + q] = s * e * vp + c * vq;
        }
        a[p * n + q] = a[q * n + p] = cx{};
        a[p * n + p] = a[p * n + p].real();
        a[q * n + q] = a[q * n + q].real();
      }
    }
  }
  throw std::runtime_error("jacobi_hermitian: no convergence in 100 sweeps");
}

// Eigendecomposition of a raw Hermitian matrix, eigenvalues ascending with a
// stable (lowest original index first) tie-break.
inline void eigh_raw(std::vector<cx> a, std::size_t n, std::vector<double>& w,
                     std::vector<cx>& v) {
  std::vector<cx> rot;
  jacobi_hermitian(a, n, rot);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x].real() < a[y * n + y].real();
  });
  w.resize(n);
  v.assign(n * n, cx{});
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = a[order[k] * n + order[k]].real();
    for (std::size_t i = 0; i < n; ++i) v[i * n + k] = rot[i * n + order[k]];
  }
}

}  // namespace detail

inline EighResult eigh(const DenseOperator& h) {
  if (!h.is_hermitian())
    throw std::domain_error("eigh: operator is not Hermitian");
  EighResult r;
  std::vector<cx> v;
  detail::eigh_raw(h.data, h.dim, r.eigenvalues, v);
  r.eigenvectors = DenseOperator::from_entries(h.labels, std::move(v));
  return r;
}

// -- unitary evolution e^{-iHt} ----------------------------------------------

inline StateVector evolve(const DenseOperator& h, double t, const StateVector& psi) {
  detail::check_labels_equal(h.labels, psi.labels, "evolve");
  const EighResult ed = eigh(h);
  const std::size_t n = h.dim;
  std::vector<cx> coef(n);  // V^dagger psi
  for (std::size_t k = 0; k < n; ++k) {
    cx acc{};
    for (std::size_t i = 0; i < n; ++i)
      acc += std::conj(ed.eigenvectors(i, k)) * psi.amp[i];
    coef[k] = acc * std::polar(1.0, -ed.eigenvalues[k] * t);
  }
  StateVector out(psi.labels);
  for (std::size_t i = 0; i < n; ++i) {
    cx acc{};
    for (std::size_t k = 0; k < n; ++k) acc += ed.eigenvectors(i, k) * coef[k];
    out.amp[i] = acc;
  }
  return out;
}

// -- partial trace -----------------------------------------------------------

namespace detail {

struct TraceSplit {
  std::vector<std::size_t> keep_pos;    // bit positions (from msb) kept, register order
  std::vector<std::size_t> trace_pos;   // bit positions traced out
  std::vector<int> kept_labels;
  std::size_t n_bits = 0;

  std::size_t compose(std::size_t kept_index, std::size_t traced_index) const {
    std::size_t idx = 0;
    for (std::size_t b = 0; b < keep_pos.size(); ++b) {
      const std::size_t bit = (kept_index >> (keep_pos.size() - 1 - b)) & 1u;
      idx |= bit << (n_bits - 1 - keep_pos[b]);
    }
    for (std::size_t b = 0; b < trace_pos.size(); ++b) {
      const std::size_t bit = (traced_index >> (trace_pos.size() - 1 - b)) & 1u;
      idx |= bit << (n_bits - 1 - trace_pos[b]);
    }
    return idx;
  }
};

inline TraceSplit make_trace_split(const std::vector<int>& labels,
                                   const std::vector<int>& keep) {
  if (keep.empty()) throw std::domain_error("partial_trace: empty keep set");
  TraceSplit sp;
  sp.n_bits = labels.size();
  for (int lab : keep)
    if (std::find(labels.begin(), labels.end(), lab) == labels.end())
      throw std::domain_error("partial_trace: unknown label in keep set");
  for (std::size_t p = 0; p < labels.size(); ++p) {
    if (std::find(keep.begin(), keep.end(), labels[p]) != keep.end()) {
      sp.keep_pos.push_back(p);
      sp.kept_labels.push_back(labels[p]);
    } else {
      sp.trace_pos.push_back(p);
    }
  }
  return sp;
}

}  // namespace detail

inline DenseOperator partial_trace(const StateVector& psi, const std::vector<int>& keep) {
  const auto sp = detail::make_trace_split(psi.labels, keep);
  DenseOperator rho(sp.kept_labels);
  const std::size_t nk = rho.dim;
  const std::size_t nt = std::size_t{1} << sp.trace_pos.size();
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = 0; j < nk; ++j) {
      cx acc{};
      for (std::size_t t = 0; t < nt; ++t)
        acc += psi.amp[sp.compose(i, t)] * std::conj(psi.amp[sp.compose(j, t)]);
      rho(i, j) = acc;
    }
  rho.hermitian = true;
  return rho;
}

inline DenseOperator partial_trace(const DenseOperator& rho, const std::vector<int>& keep) {
  const auto sp = detail::make_trace_split(rho.labels, keep);
  DenseOperator out(sp.kept_labels);
  const std::size_t nk = out.dim;
  const std::size_t nt = std::size_t{1} << sp.trace_pos.size();
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = 0; j < nk; ++j) {
      cx acc{};
      for (std::size_t t = 0; t < nt; ++t)
        acc += rho(sp.compose(i, t), sp.compose(j, t));
      out(i, j) = acc;
    }
  out.hermitian = rho.hermitian;
  return out;
}

// -- overlaps ----------------------------------------------------------------

inline cx inner(const StateVector& a, const StateVector& b) {
  detail::check_labels_equal(a.labels, b.labels, "inner");
  cx acc{};
  for (std::size_t i = 0; i < a.dim; ++i) acc += std::conj(a.amp[i]) * b.amp[i];
  return acc;
}

// |<a|b>|^2
inline double overlap(const StateVector& a, const StateVector& b) {
  return std::norm(inner(a, b));
}

}  // namespace qprobe
