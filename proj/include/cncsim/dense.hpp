#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

#include "cncsim/tableau.hpp"

namespace cncsim {

// Exact dense ground truth for small systems. This is a test fixture, not a
// simulator: all entries are dyadic rationals times powers of i, so double
// precision is exact up to rounding and 1e-12 absolute comparisons suffice.

using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

constexpr uint32_t kDenseMaxQubits = 6;

inline void require_dense_size(uint32_t n) {
  if (n > kDenseMaxQubits)
    throw std::invalid_argument("dense oracle: capped at n <= 6 qubits");
}

inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline DenseMatrix dense_identity(uint32_t n) {
  require_dense_size(n);
  return DenseMatrix::Identity(1 << n, 1 << n);
}

/// T_a = i^{phi(a)} X^{a_X} Z^{a_Z}; Hermitian with T_a^2 = I.
inline DenseMatrix pauli_matrix(const PauliPoint& a) {
  require_dense_size(a.num_qubits());
  DenseMatrix x(2, 2), z(2, 2), xz(2, 2), id(2, 2);
  id << 1, 0, 0, 1;
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  xz = x * z;
  DenseMatrix out = DenseMatrix::Identity(1, 1);
  for (uint32_t q = 0; q < a.num_qubits(); ++q) {
    bool xb = a.x_bit(q), zb = a.z_bit(q);
    const DenseMatrix& f = xb ? (zb ? xz : x) : (zb ? z : id);
    out = kron(out, f);
  }
  Complex phase = std::pow(Complex(0, 1), phase_exponent(a) % 4);
  return phase * out;
}

/// Pi_b^r = (I + (-1)^r T_b)/2.
inline DenseMatrix projector(const PauliPoint& b, int r) {
  double sgn = (r & 1) ? -1.0 : 1.0;
  return 0.5 * (dense_identity(b.num_qubits()) + sgn * pauli_matrix(b));
}

/// Pi_I^s = (1/|I|) sum_a (-1)^{s(a)} T_a for an independent isotropic basis,
/// computed as the product of the rank-halving projectors.
inline DenseMatrix stab_projector(std::span<const PauliPoint> basis,
                                  std::span<const int> s) {
  if (basis.empty()) throw std::invalid_argument("stab_projector: empty basis");
  uint32_t n = basis[0].num_qubits();
  require_dense_size(n);
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = i + 1; j < basis.size(); ++j)
      if (symplectic_form(basis[i], basis[j]))
        throw std::invalid_argument("stab_projector: basis is not isotropic");
  if (gaussian_elimination(basis, n).rank() != static_cast<int>(basis.size()))
    throw std::invalid_argument("stab_projector: basis is dependent");
  DenseMatrix out = dense_identity(n);
  for (size_t i = 0; i < basis.size(); ++i) out = out * projector(basis[i], s[i]);
  return out;
}

/// A_Omega^gamma = 2^{-n} sum_{a in Omega} (-1)^{gamma(a)} T_a.
inline DenseMatrix cnc_dense(const CncDescriptor& d) {
  require_dense_size(d.n);
  if (auto rep = validate(d); !rep.ok)
    throw std::invalid_argument("cnc_dense: invalid descriptor: " + rep.problems.front());
  OmegaExpansion omega = expand_omega(d);
  DenseMatrix out = DenseMatrix::Zero(1 << d.n, 1 << d.n);
  for (const auto& [p, g] : omega.gamma)
    out += ((g & 1) ? -1.0 : 1.0) * pauli_matrix(p);
  return out / static_cast<double>(1 << d.n);
}

inline DenseMatrix cnc_dense(const CncTableau& t) { return cnc_dense(t.to_descriptor()); }

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Gate unitaries and statevector helpers (qubit 0 is the most significant bit
// of the basis index, matching the tensor order of pauli_matrix).

inline DenseMatrix gate_unitary(uint32_t n, const Gate& g) {
  require_dense_size(n);
  size_t dim = size_t{1} << n;
  DenseMatrix u = DenseMatrix::Zero(dim, dim);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  auto bit_of = [&](size_t idx, uint32_t q) { return (idx >> (n - 1 - q)) & 1; };
  for (size_t col = 0; col < dim; ++col) {
    switch (g.kind) {
      case GateKind::H: {
        size_t flipped = col ^ (size_t{1} << (n - 1 - g.q0));
        u(col, col) += bit_of(col, g.q0) ? -inv_sqrt2 : inv_sqrt2;
        u(flipped, col) += inv_sqrt2;
        break;
      }
      case GateKind::S:
        u(col, col) = bit_of(col, g.q0) ? Complex(0, 1) : Complex(1, 0);
        break;
      case GateKind::CX: {
        size_t row = col;
        if (bit_of(col, g.q0)) row = col ^ (size_t{1} << (n - 1 - g.q1));
        u(row, col) = 1;
        break;
      }
    }
  }
  return u;
}

inline DenseMatrix word_unitary(uint32_t n, std::span<const Gate> gates) {
  DenseMatrix u = dense_identity(n);
  for (const auto& g : gates) u = gate_unitary(n, g) * u;
  return u;
}

inline void sv_apply_h(DenseVector& psi, uint32_t n, uint32_t q) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  size_t mask = size_t{1} << (n - 1 - q);
  for (size_t i = 0; i < static_cast<size_t>(psi.size()); ++i) {
    if (i & mask) continue;
    Complex a = psi(i), b = psi(i | mask);
    psi(i) = inv_sqrt2 * (a + b);
    psi(i | mask) = inv_sqrt2 * (a - b);
  }
}

inline void sv_apply_phase(DenseVector& psi, uint32_t n, uint32_t q, Complex phase) {
  size_t mask = size_t{1} << (n - 1 - q);
  for (size_t i = 0; i < static_cast<size_t>(psi.size()); ++i)
    if (i & mask) psi(i) *= phase;
}

inline void sv_apply_s(DenseVector& psi, uint32_t n, uint32_t q) {
  sv_apply_phase(psi, n, q, Complex(0, 1));
}

inline void sv_apply_t(DenseVector& psi, uint32_t n, uint32_t q, bool dagger = false) {
  double angle = (dagger ? -1.0 : 1.0) * 3.14159265358979323846 / 4;
  sv_apply_phase(psi, n, q, std::polar(1.0, angle));
}

inline void sv_apply_cx(DenseVector& psi, uint32_t n, uint32_t c, uint32_t t) {
  size_t cmask = size_t{1} << (n - 1 - c);
  size_t tmask = size_t{1} << (n - 1 - t);
  for (size_t i = 0; i < static_cast<size_t>(psi.size()); ++i)
    if ((i & cmask) && !(i & tmask)) std::swap(psi(i), psi(i | tmask));
}

// ---------------------------------------------------------------------------
// Measurement-update identity checks

struct UpdateReport {
  MeasureTag tag = MeasureTag::I;
  double max_err = 0.0;
  size_t branches = 0;
};

/// Computes Pi_b^r A Pi_b^r densely and compares it against the update-rule
/// formula assembled from forced tableau branches: delta-weighted identity for
/// Cases I/II, the s-averaged maximal form for Case III, and the single
/// coset update for Case IV.
inline UpdateReport verify_update(const CncDescriptor& desc, const PauliPoint& b, int r) {
  if (desc.n > 4) throw std::invalid_argument("verify_update: capped at n <= 4");
  DenseMatrix lhs = projector(b, r) * cnc_dense(desc) * projector(b, r);

  CncTableau base = CncTableau::from_descriptor(desc);
  MeasurementCase caze = base.case_of(b);
  UpdateReport rep;
  rep.tag = caze.tag;
  SplitRng rng(0);

  DenseMatrix rhs = DenseMatrix::Zero(lhs.rows(), lhs.cols());
  switch (caze.tag) {
    case MeasureTag::I:
    case MeasureTag::II: {
      auto canon = base.canonical_form(b);
      if (!canon) throw std::logic_error("verify_update: deterministic case without value");
      if (canon->sign == (r & 1)) {
        for (int coin = 0; coin < 2; ++coin) {
          CncTableau branch = base;
          MeasureOptions opts;
          opts.branch = coin;
          branch.measure(b, 0, rng, opts);
          rhs += 0.5 * cnc_dense(branch);
          ++rep.branches;
          if (caze.tag == MeasureTag::I) {  // no branch coin in Case I
            rhs += 0.5 * cnc_dense(branch);
            ++rep.branches;
            break;
          }
        }
      }
      break;
    }
    case MeasureTag::III: {
      size_t t = caze.anti_rows.size() / 2;
      size_t terms = size_t{1} << (t - 1);
      for (size_t mask = 0; mask < terms; ++mask) {
        CncTableau branch = base;
        MeasureOptions opts;
        opts.outcome = r;
        std::vector<int> svec(t - 1);
        for (size_t i = 0; i + 1 < t; ++i) svec[i] = (mask >> i) & 1;
        opts.svec = svec;
        branch.measure(b, 0, rng, opts);
        rhs += cnc_dense(branch);
        ++rep.branches;
      }
      rhs *= 0.5 / static_cast<double>(terms);
      break;
    }
    case MeasureTag::IV: {
      CncTableau branch = base;
      MeasureOptions opts;
      opts.outcome = r;
      branch.measure(b, 0, rng, opts);
      rhs = 0.5 * cnc_dense(branch);
      rep.branches = 1;
      break;
    }
  }
  rep.max_err = max_abs_diff(lhs, rhs);
  return rep;
}

}  // namespace cncsim
