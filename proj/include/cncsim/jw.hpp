#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cncsim/gf2.hpp"
#include "cncsim/pauli.hpp"

namespace cncsim {

/// A maximal anti-commuting set of 2m+1 points spanning a 2m-dimensional
/// symplectic subspace W of E_n. The degenerate m=0 set is the single zero
/// element, which keeps stabilizer states in the same representation.
struct JwSet {
  uint32_t n = 0;                    // ambient qubit count
  std::vector<PauliPoint> elements;  // 2m+1 entries, pairwise [a_i,a_j]=1, XOR to zero

  uint32_t m() const { return static_cast<uint32_t>((elements.size() - 1) / 2); }

  friend bool operator==(const JwSet&, const JwSet&) = default;
};

/// Checks the JwSet invariants: pairwise anti-commutation, zero sum, and
/// independence of any 2m of the elements.
inline bool jw_set_valid(const JwSet& jw, std::string* why = nullptr) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (jw.elements.empty() || jw.elements.size() % 2 == 0)
    return fail("JW set must have 2m+1 elements");
  PauliPoint sum(jw.n);
  for (const auto& a : jw.elements) {
    if (a.num_qubits() != jw.n) return fail("JW element with wrong qubit count");
    sum ^= a;
  }
  if (!sum.is_zero()) return fail("JW elements do not sum to zero");
  for (size_t i = 0; i < jw.elements.size(); ++i)
    for (size_t j = i + 1; j < jw.elements.size(); ++j)
      if (symplectic_form(jw.elements[i], jw.elements[j]) != 1)
        return fail("JW elements must pairwise anti-commute");
  uint32_t m = jw.m();
  Echelon e = gaussian_elimination(
      std::span<const PauliPoint>(jw.elements.data(), 2 * m), jw.n);
  if (e.rank() != static_cast<int>(2 * m))
    return fail("first 2m JW elements are dependent");
  return true;
}

inline JwSet make_jw_set(std::vector<PauliPoint> elements, uint32_t n) {
  JwSet jw{n, std::move(elements)};
  std::string why;
  if (!jw_set_valid(jw, &why)) throw std::invalid_argument("make_jw_set: " + why);
  return jw;
}

inline JwSet zero_jw_set(uint32_t n) { return JwSet{n, {PauliPoint(n)}}; }

/// Result of symplectic Gram-Schmidt: hyperbolic pairs with [e_i,f_j] =
/// delta_ij, mutually symplectically orthogonal, plus a residual isotropic
/// basis commuting with everything in the span.
struct SgsoResult {
  std::vector<std::pair<PauliPoint, PauliPoint>> pairs;
  std::vector<PauliPoint> residual;
};

inline SgsoResult sgso(std::span<const PauliPoint> gens, uint32_t n) {
  SgsoResult out;
  Echelon span_so_far;
  span_so_far.n = n;
  for (PauliPoint v : gens) {
    if (v.num_qubits() != n) throw std::invalid_argument("sgso: mixed qubit counts");
    // Make v symplectically orthogonal to the existing pairs.
    for (const auto& [e, f] : out.pairs) {
      if (symplectic_form(v, f)) v ^= e;
      if (symplectic_form(v, e)) v ^= f;
    }
    if (!span_so_far.insert(v)) continue;  // no new direction
    size_t partner = out.residual.size();
    for (size_t i = 0; i < out.residual.size(); ++i)
      if (symplectic_form(out.residual[i], v)) {
        partner = i;
        break;
      }
    if (partner == out.residual.size()) {
      out.residual.push_back(v);
      continue;
    }
    PauliPoint e = out.residual[partner];
    out.residual.erase(out.residual.begin() + partner);
    for (auto& w : out.residual) {
      if (symplectic_form(w, v)) w ^= e;
      if (symplectic_form(w, e)) w ^= v;
    }
    out.pairs.emplace_back(std::move(e), std::move(v));
  }
  return out;
}

inline SgsoResult sgso(const std::vector<PauliPoint>& gens, uint32_t n) {
  return sgso(std::span<const PauliPoint>(gens), n);
}

/// JW transform of a symplectic basis {e_i,f_i}: a_1 = e_1, a_2 = f_1,
/// a_{2i-1} = e_i + sum_{k<i}(e_k+f_k), a_{2i} = f_i + sum_{k<i}(e_k+f_k),
/// closed with a_{2m+1} = sum of the rest.
inline JwSet jw_transform(std::span<const std::pair<PauliPoint, PauliPoint>> pairs,
                          uint32_t n) {
  for (size_t i = 0; i < pairs.size(); ++i)
    for (size_t j = 0; j < pairs.size(); ++j) {
      if (symplectic_form(pairs[i].first, pairs[j].second) != (i == j ? 1 : 0) ||
          (i != j && (symplectic_form(pairs[i].first, pairs[j].first) ||
                      symplectic_form(pairs[i].second, pairs[j].second))))
        throw std::invalid_argument("jw_transform: input basis is not symplectic");
    }
  if (pairs.empty()) return zero_jw_set(n);
  std::vector<PauliPoint> a;
  a.reserve(2 * pairs.size() + 1);
  PauliPoint prefix(n);  // sum_{k<i} (e_k + f_k)
  for (const auto& [e, f] : pairs) {
    a.push_back(e ^ prefix);
    a.push_back(f ^ prefix);
    prefix ^= e;
    prefix ^= f;
  }
  PauliPoint last(n);
  for (const auto& v : a) last ^= v;
  a.push_back(last);
  return make_jw_set(std::move(a), n);
}

inline JwSet jw_transform(const std::vector<std::pair<PauliPoint, PauliPoint>>& pairs,
                          uint32_t n) {
  return jw_transform(std::span<const std::pair<PauliPoint, PauliPoint>>(pairs), n);
}

/// Inverse JW transform of the first 2m elements of an anti-commuting set:
/// e_1 = a_1, f_1 = a_2, e_i = a_{2i-1} + sum_{k<=2i-2} a_k, and likewise f_i.
inline std::vector<std::pair<PauliPoint, PauliPoint>> inverse_jw_transform(
    std::span<const PauliPoint> a, uint32_t n) {
  if (a.size() % 2 != 0)
    throw std::invalid_argument("inverse_jw_transform: need an even count of elements");
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j)
      if (symplectic_form(a[i], a[j]) != 1)
        throw std::invalid_argument("inverse_jw_transform: elements must anti-commute");
  std::vector<std::pair<PauliPoint, PauliPoint>> pairs;
  PauliPoint prefix(n);  // sum_{k <= 2i-2} a_k
  for (size_t i = 0; 2 * i < a.size(); ++i) {
    pairs.emplace_back(a[2 * i] ^ prefix, a[2 * i + 1] ^ prefix);
    prefix ^= a[2 * i];
    prefix ^= a[2 * i + 1];
  }
  return pairs;
}

/// Coefficients nu with b = sum_k nu_k a_k over the JW basis (the first 2m
/// elements), via nu_k = [a_{2m+1} + a_k, b]. Throws if b is outside span(W).
inline std::vector<int> jw_expand(const PauliPoint& b, const JwSet& jw) {
  uint32_t m = jw.m();
  std::vector<int> nu(2 * m);
  PauliPoint recon(jw.n);
  const PauliPoint& last = jw.elements[2 * m];
  for (uint32_t k = 0; k < 2 * m; ++k) {
    nu[k] = symplectic_form(last ^ jw.elements[k], b);
    if (nu[k]) recon ^= jw.elements[k];
  }
  if (!(recon == b)) throw std::invalid_argument("jw_expand: point outside span of JW set");
  return nu;
}

/// Index partition of the JW elements into those anti-commuting with b (A_b)
/// and those commuting with b (C_b).
struct CommutationSplit {
  std::vector<uint32_t> anti;
  std::vector<uint32_t> comm;
};

inline CommutationSplit split_commuting(const PauliPoint& b, const JwSet& jw) {
  CommutationSplit s;
  for (uint32_t i = 0; i < jw.elements.size(); ++i) {
    if (symplectic_form(jw.elements[i], b))
      s.anti.push_back(i);
    else
      s.comm.push_back(i);
  }
  return s;
}

/// Extends a non-maximal anti-commuting set to a full JW set of E_n.
/// Deterministic: odd-size steps take the least solution of [a_i,x]=1; even
/// steps take the first canonical basis vector x_1, z_1, x_2, ... outside the
/// current span and correct it through A_c / C_c sums.
inline JwSet complete_to_jw(std::span<const PauliPoint> s, uint32_t n) {
  std::vector<PauliPoint> a(s.begin(), s.end());
  PauliPoint sum(n);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].num_qubits() != n)
      throw std::invalid_argument("complete_to_jw: mixed qubit counts");
    for (size_t j = i + 1; j < a.size(); ++j)
      if (symplectic_form(a[i], a[j]) != 1)
        throw std::invalid_argument("complete_to_jw: input does not anti-commute");
    sum ^= a[i];
  }
  if (!a.empty() && sum.is_zero())
    throw std::invalid_argument("complete_to_jw: input set is already maximal");
  while (a.size() < 2 * n) {
    if (a.size() % 2 == 1) {
      std::vector<int> ones(a.size(), 1);
      auto x = solve_commutation(a, ones, n);
      if (!x) throw std::logic_error("complete_to_jw: no anti-commuting partner");
      a.push_back(*x);
    } else {
      Echelon span = gaussian_elimination(a, n);
      std::optional<PauliPoint> c;
      for (uint32_t q = 0; q < n && !c; ++q) {
        if (PauliPoint v = PauliPoint::x(n, q); !span.contains(v)) {
          c = v;
          break;
        }
        if (PauliPoint v = PauliPoint::z(n, q); !span.contains(v)) c = v;
      }
      if (!c) throw std::logic_error("complete_to_jw: span exhausted early");
      PauliPoint next = *c;
      std::vector<uint32_t> anti, comm;
      for (uint32_t i = 0; i < a.size(); ++i)
        (symplectic_form(a[i], *c) ? anti : comm).push_back(i);
      if (comm.size() % 2 == 1) {
        for (uint32_t i : anti) next ^= a[i];
      } else if (!comm.empty()) {
        for (uint32_t i : comm) next ^= a[i];
      }
      a.push_back(next);
    }
  }
  PauliPoint last(n);
  for (const auto& v : a) last ^= v;
  a.push_back(last);
  return make_jw_set(std::move(a), n);
}

inline JwSet complete_to_jw(const std::vector<PauliPoint>& s, uint32_t n) {
  return complete_to_jw(std::span<const PauliPoint>(s), n);
}

/// E_n = I + W + I' with conjugate isotropic bases and a JW set carried by W.
struct JwDecomposition {
  uint32_t n = 0;
  std::vector<PauliPoint> stabilizer_basis;    // e_1..e_{n-m}, basis of I
  std::vector<PauliPoint> destabilizer_basis;  // f_1..f_{n-m}, basis of I'
  JwSet jw;                                    // lives in W = I^perp cap I'^perp

  uint32_t m() const { return jw.m(); }
};

/// Conjugate basis to a given independent isotropic basis: [e_i, f_j] =
/// delta_ij with the f_i pairwise commuting. `extra_commuting` constrains the
/// f_i to additionally commute with those points.
inline std::vector<PauliPoint> conjugate_basis(std::span<const PauliPoint> e, uint32_t n,
                                               std::span<const PauliPoint> extra_commuting = {}) {
  std::vector<PauliPoint> gens(e.begin(), e.end());
  gens.insert(gens.end(), extra_commuting.begin(), extra_commuting.end());
  std::vector<PauliPoint> f;
  for (size_t i = 0; i < e.size(); ++i) {
    std::vector<int> rhs(gens.size(), 0);
    rhs[i] = 1;
    auto g = solve_commutation(gens, rhs, n);
    if (!g)
      throw std::invalid_argument("conjugate_basis: no conjugate partner (input dependent?)");
    PauliPoint fi = *g;
    for (size_t j = 0; j < f.size(); ++j)
      if (symplectic_form(fi, f[j])) fi ^= e[j];
    f.push_back(fi);
  }
  return f;
}

/// Builds a JW decomposition from an independent isotropic basis of I:
/// solves for the conjugate I', takes W as the joint commutant, and produces
/// the JW set through SGSO followed by the JW transform.
inline JwDecomposition build_jw_decomposition(std::span<const PauliPoint> iso_basis,
                                              uint32_t n) {
  Echelon e = gaussian_elimination(iso_basis, n);
  if (e.rank() != static_cast<int>(iso_basis.size()))
    throw std::invalid_argument("build_jw_decomposition: basis is dependent");
  for (size_t i = 0; i < iso_basis.size(); ++i)
    for (size_t j = i + 1; j < iso_basis.size(); ++j)
      if (symplectic_form(iso_basis[i], iso_basis[j]))
        throw std::invalid_argument("build_jw_decomposition: basis is not isotropic");

  JwDecomposition d;
  d.n = n;
  d.stabilizer_basis.assign(iso_basis.begin(), iso_basis.end());
  d.destabilizer_basis = conjugate_basis(iso_basis, n);

  std::vector<PauliPoint> both = d.stabilizer_basis;
  both.insert(both.end(), d.destabilizer_basis.begin(), d.destabilizer_basis.end());
  std::vector<PauliPoint> w = commutant_basis(both, n);
  SgsoResult sg = sgso(w, n);
  if (!sg.residual.empty())
    throw std::logic_error("build_jw_decomposition: commutant is not symplectic");
  d.jw = jw_transform(sg.pairs, n);
  return d;
}

inline JwDecomposition build_jw_decomposition(const std::vector<PauliPoint>& iso_basis,
                                              uint32_t n) {
  return build_jw_decomposition(std::span<const PauliPoint>(iso_basis), n);
}

}  // namespace cncsim
