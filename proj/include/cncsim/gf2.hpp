#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cncsim/pauli.hpp"

namespace cncsim {

/// Reduced row echelon form of a list of E_n points, computed with
/// deterministic pivoting: lowest column index first, rows scanned in order.
struct Echelon {
  uint32_t n = 0;
  std::vector<PauliPoint> basis;      // reduced rows, one per pivot
  std::vector<uint32_t> pivot_cols;   // ascending column index per basis row

  int rank() const { return static_cast<int>(basis.size()); }

  /// Reduces v against the basis; returns the residual (zero iff v in span).
  PauliPoint reduce(PauliPoint v) const {
    for (size_t i = 0; i < basis.size(); ++i)
      if (v.bit(pivot_cols[i])) v ^= basis[i];
    return v;
  }

  bool contains(const PauliPoint& v) const { return reduce(v).is_zero(); }

  /// Inserts v if independent; returns true when the rank grew.
  bool insert(PauliPoint v) {
    v = reduce(v);
    if (v.is_zero()) return false;
    uint32_t pivot = 0;
    while (!v.bit(pivot)) ++pivot;
    // Back-substitute to keep the form reduced.
    for (auto& row : basis)
      if (row.bit(pivot)) row ^= v;
    size_t pos = 0;
    while (pos < pivot_cols.size() && pivot_cols[pos] < pivot) ++pos;
    basis.insert(basis.begin() + pos, v);
    pivot_cols.insert(pivot_cols.begin() + pos, pivot);
    return true;
  }
};

inline Echelon gaussian_elimination(std::span<const PauliPoint> rows, uint32_t n) {
  Echelon e;
  e.n = n;
  for (const auto& r : rows) {
    if (r.num_qubits() != n)
      throw std::invalid_argument("gaussian_elimination: mixed qubit counts");
    e.insert(r);
  }
  return e;
}

inline Echelon gaussian_elimination(const std::vector<PauliPoint>& rows, uint32_t n) {
  return gaussian_elimination(std::span<const PauliPoint>(rows), n);
}

namespace detail {

// Dense GF(2) row for solving small linear systems in 2n+1 columns
// (coefficients plus an augmented rhs bit).
struct AugRow {
  PauliPoint coeff;
  int rhs;
};

}  // namespace detail

/// Solves the system [g_i, x] = rhs_i over E_n. Returns a deterministic
/// particular solution (free variables zero), or nullopt if inconsistent.
inline std::optional<PauliPoint> solve_commutation(std::span<const PauliPoint> gens,
                                                   std::span<const int> rhs, uint32_t n) {
  // [g, x] = (g_Z | g_X) . (x_X | x_Z): the functional of g is g with swapped halves.
  std::vector<detail::AugRow> rows;
  rows.reserve(gens.size());
  for (size_t i = 0; i < gens.size(); ++i) {
    PauliPoint f(n);
    for (uint32_t q = 0; q < n; ++q) {
      f.set_x(q, gens[i].z_bit(q));
      f.set_z(q, gens[i].x_bit(q));
    }
    rows.push_back({f, rhs[i] & 1});
  }
  // Forward elimination with lowest-column pivots.
  std::vector<uint32_t> pivots;
  std::vector<detail::AugRow> reduced;
  for (auto& r : rows) {
    for (size_t i = 0; i < reduced.size(); ++i)
      if (r.coeff.bit(pivots[i])) {
        r.coeff ^= reduced[i].coeff;
        r.rhs ^= reduced[i].rhs;
      }
    if (r.coeff.is_zero()) {
      if (r.rhs) return std::nullopt;
      continue;
    }
    uint32_t pivot = 0;
    while (!r.coeff.bit(pivot)) ++pivot;
    for (size_t i = 0; i < reduced.size(); ++i)
      if (reduced[i].coeff.bit(pivot)) {
        reduced[i].coeff ^= r.coeff;
        reduced[i].rhs ^= r.rhs;
      }
    size_t pos = 0;
    while (pos < pivots.size() && pivots[pos] < pivot) ++pos;
    pivots.insert(pivots.begin() + pos, pivot);
    reduced.insert(reduced.begin() + pos, r);
  }
  PauliPoint x(n);
  for (size_t i = 0; i < reduced.size(); ++i)
    if (reduced[i].rhs) x.set_bit(pivots[i], true);
  return x;
}

/// Basis of {x : [g_i, x] = 0 for all i}, i.e. the symplectic complement of
/// span(gens). Deterministic: one kernel vector per free column, ascending.
inline std::vector<PauliPoint> commutant_basis(std::span<const PauliPoint> gens, uint32_t n) {
  std::vector<PauliPoint> funcs;
  funcs.reserve(gens.size());
  for (const auto& g : gens) {
    PauliPoint f(n);
    for (uint32_t q = 0; q < n; ++q) {
      f.set_x(q, g.z_bit(q));
      f.set_z(q, g.x_bit(q));
    }
    funcs.push_back(f);
  }
  Echelon e = gaussian_elimination(funcs, n);
  std::vector<PauliPoint> kernel;
  for (uint32_t col = 0; col < 2 * n; ++col) {
    bool is_pivot = false;
    for (uint32_t p : e.pivot_cols)
      if (p == col) is_pivot = true;
    if (is_pivot) continue;
    PauliPoint v(n);
    v.set_bit(col, true);
    for (size_t i = 0; i < e.basis.size(); ++i)
      if (e.basis[i].bit(col)) v.set_bit(e.pivot_cols[i], true);
    kernel.push_back(v);
  }
  return kernel;
}

inline std::vector<PauliPoint> commutant_basis(const std::vector<PauliPoint>& gens, uint32_t n) {
  return commutant_basis(std::span<const PauliPoint>(gens), n);
}

/// Echelon with combination tracking: expresses queried points as XOR
/// combinations of the original generator list.
class SpanSolver {
public:
  SpanSolver(std::span<const PauliPoint> gens, uint32_t n) : n_(n), ngens_(gens.size()) {
    for (size_t g = 0; g < gens.size(); ++g) {
      PauliPoint v = gens[g];
      std::vector<int> combo(gens.size(), 0);
      combo[g] = 1;
      reduce_tracked(v, combo);
      if (v.is_zero()) continue;
      uint32_t pivot = 0;
      while (!v.bit(pivot)) ++pivot;
      for (size_t i = 0; i < rows_.size(); ++i)
        if (rows_[i].bit(pivot)) {
          rows_[i] ^= v;
          xor_combo(combos_[i], combo);
        }
      size_t pos = 0;
      while (pos < pivots_.size() && pivots_[pos] < pivot) ++pos;
      rows_.insert(rows_.begin() + pos, v);
      combos_.insert(combos_.begin() + pos, combo);
      pivots_.insert(pivots_.begin() + pos, pivot);
    }
  }
  SpanSolver(const std::vector<PauliPoint>& gens, uint32_t n)
      : SpanSolver(std::span<const PauliPoint>(gens), n) {}

  int rank() const { return static_cast<int>(rows_.size()); }

  /// Coefficients c with v = XOR of gens[i] over {i : c_i = 1}, if v is in span.
  std::optional<std::vector<int>> express(PauliPoint v) const {
    std::vector<int> combo(ngens_, 0);
    reduce_tracked(v, combo);
    if (!v.is_zero()) return std::nullopt;
    return combo;
  }

  bool contains(const PauliPoint& v) const { return express(v).has_value(); }

private:
  void reduce_tracked(PauliPoint& v, std::vector<int>& combo) const {
    for (size_t i = 0; i < rows_.size(); ++i)
      if (v.bit(pivots_[i])) {
        v ^= rows_[i];
        if (combo.size() == combos_[i].size()) xor_combo(combo, combos_[i]);
      }
  }
  static void xor_combo(std::vector<int>& a, const std::vector<int>& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
  }

  uint32_t n_;
  size_t ngens_;
  std::vector<PauliPoint> rows_;
  std::vector<std::vector<int>> combos_;
  std::vector<uint32_t> pivots_;
};

}  // namespace cncsim
