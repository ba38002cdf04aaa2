#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cncsim/jw.hpp"

namespace cncsim {

/// Generator-level description of a CNC pair (Omega, gamma): a center basis,
/// an anti-commuting set of representatives, and the value bits on both.
/// gamma on the rest of Omega is recovered by beta-accumulating row products,
/// so storage stays O(n) per generator. Maximal descriptors of type (n,m)
/// carry 2m+1 representatives, non-maximal ones fewer.
struct CncDescriptor {
  uint32_t n = 0;
  std::vector<PauliPoint> center_basis;  // e_1..e_{n-m}
  std::vector<int> center_values;        // gamma(e_i)
  std::vector<PauliPoint> jw_elements;   // a_1..a_N
  std::vector<int> jw_values;            // gamma(a_k)

  uint32_t m() const { return n - static_cast<uint32_t>(center_basis.size()); }
  size_t anti_size() const { return jw_elements.size(); }
  bool is_maximal() const { return jw_elements.size() == 2 * static_cast<size_t>(m()) + 1; }

  friend bool operator==(const CncDescriptor&, const CncDescriptor&) = default;
};

/// Number of points of Omega: (N+1) * 2^{n-m} for N representatives, counting
/// the center once.
inline size_t omega_size(const CncDescriptor& d) {
  size_t iso = size_t{1} << d.center_basis.size();
  size_t nonzero = 0;
  for (const auto& a : d.jw_elements)
    if (!a.is_zero()) ++nonzero;
  return (nonzero + 1) * iso;
}

/// gamma on an arbitrary point of Omega, or nullopt when the point lies
/// outside Omega. Values are accumulated with row products from the stored
/// generator bits.
inline std::optional<int> gamma_of(const CncDescriptor& d, const PauliPoint& p) {
  SpanSolver center(d.center_basis, d.n);
  auto accumulate = [&](const std::vector<int>& combo, std::optional<size_t> k) -> int {
    PhasedRow acc{PauliPoint(d.n), 0};
    if (k) row_multiply(acc, {d.jw_elements[*k], d.jw_values[*k]});
    for (size_t i = 0; i < combo.size(); ++i)
      if (combo[i]) row_multiply(acc, {d.center_basis[i], d.center_values[i]});
    return acc.sign;
  };
  if (auto combo = center.express(p)) return accumulate(*combo, std::nullopt);
  for (size_t k = 0; k < d.jw_elements.size(); ++k)
    if (auto combo = center.express(p ^ d.jw_elements[k])) return accumulate(*combo, k);
  return std::nullopt;
}

struct OmegaExpansion {
  bool consistent = true;
  std::string problem;
  std::map<PauliPoint, int> gamma;  // point -> value
};

/// Expands Omega = union_k <a_k, I> explicitly together with the induced
/// gamma, flagging any point reachable with two different values.
inline OmegaExpansion expand_omega(const CncDescriptor& d) {
  OmegaExpansion out;
  size_t dim = d.center_basis.size();
  auto add = [&](const PhasedRow& row) {
    auto [it, fresh] = out.gamma.emplace(row.point, row.sign);
    if (!fresh && it->second != row.sign) {
      out.consistent = false;
      out.problem = "conflicting values at " + to_pauli_string(row.point);
    }
  };
  std::vector<std::optional<size_t>> starts;
  starts.emplace_back(std::nullopt);
  for (size_t k = 0; k < d.jw_elements.size(); ++k) starts.emplace_back(k);
  for (const auto& k : starts) {
    for (size_t mask = 0; mask < (size_t{1} << dim); ++mask) {
      PhasedRow acc{PauliPoint(d.n), 0};
      if (k) row_multiply(acc, {d.jw_elements[*k], d.jw_values[*k]});
      for (size_t i = 0; i < dim; ++i)
        if ((mask >> i) & 1) row_multiply(acc, {d.center_basis[i], d.center_values[i]});
      add(acc);
      if (!out.consistent) return out;
    }
  }
  return out;
}

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> problems;

  void fail(std::string msg) {
    ok = false;
    problems.push_back(std::move(msg));
  }
  explicit operator bool() const { return ok; }
};

/// Structural and value-assignment checks. The gamma consistency law
/// gamma(a+b) = gamma(a)+gamma(b)+beta(a,b) is verified on all commuting
/// pairs of Omega for n <= 3 and on the generator expansion otherwise.
inline ValidationReport validate(const CncDescriptor& d) {
  ValidationReport r;
  if (d.center_values.size() != d.center_basis.size())
    r.fail("center basis and value counts differ");
  if (d.jw_values.size() != d.jw_elements.size())
    r.fail("JW element and value counts differ");
  if (d.center_basis.size() > d.n) r.fail("center basis larger than n");
  if (d.jw_elements.empty()) r.fail("descriptor needs at least one representative");
  if (!r.ok) return r;

  for (const auto& p : d.center_basis)
    if (p.num_qubits() != d.n) r.fail("center basis qubit count mismatch");
  for (const auto& p : d.jw_elements)
    if (p.num_qubits() != d.n) r.fail("JW element qubit count mismatch");
  if (!r.ok) return r;

  Echelon center = gaussian_elimination(d.center_basis, d.n);
  if (center.rank() != static_cast<int>(d.center_basis.size()))
    r.fail("center basis is dependent");
  for (size_t i = 0; i < d.center_basis.size(); ++i)
    for (size_t j = i + 1; j < d.center_basis.size(); ++j)
      if (symplectic_form(d.center_basis[i], d.center_basis[j]))
        r.fail("center is not isotropic");

  uint32_t m = d.m();
  for (size_t k = 0; k < d.jw_elements.size(); ++k) {
    const auto& a = d.jw_elements[k];
    for (const auto& e : d.center_basis)
      if (symplectic_form(a, e)) r.fail("JW element anti-commutes with the center");
    if (a.is_zero()) {
      // The zero representative only appears in the degenerate stabilizer case.
      if (m != 0 || d.jw_elements.size() != 1) r.fail("zero JW element outside m=0 case");
      if (d.jw_values[k] != 0) r.fail("gamma(0) must be 0");
    } else if (center.contains(a)) {
      r.fail("JW element lies in the center span");
    }
    for (size_t l = k + 1; l < d.jw_elements.size(); ++l)
      if (!a.is_zero() && symplectic_form(a, d.jw_elements[l]) != 1)
        r.fail("JW elements must pairwise anti-commute");
  }
  if (!r.ok) return r;

  if (d.jw_elements.size() > 2 * static_cast<size_t>(m) + 1)
    r.fail("more representatives than 2m+1");

  if (m > 0) {
    // An anti-commuting set is either maximal within its span (projected sum
    // zero, any N-1 elements independent) or linearly independent outright.
    PauliPoint sum(d.n);
    for (const auto& a : d.jw_elements) sum ^= a;
    bool closed_sum = center.contains(sum);
    if (d.is_maximal() && !closed_sum) {
      r.fail("maximal JW elements must sum into the center");
      return r;
    }
    std::vector<PauliPoint> all = d.center_basis;
    size_t take = closed_sum ? d.jw_elements.size() - 1 : d.jw_elements.size();
    for (size_t k = 0; k < take; ++k) all.push_back(d.jw_elements[k]);
    Echelon e = gaussian_elimination(all, d.n);
    if (e.rank() != static_cast<int>(all.size()))
      r.fail("JW elements are dependent modulo the center");
  }
  if (!r.ok) return r;

  if (d.n <= 3) {
    OmegaExpansion omega = expand_omega(d);
    if (!omega.consistent) {
      r.fail("value assignment inconsistent: " + omega.problem);
      return r;
    }
    std::vector<std::pair<PauliPoint, int>> pts(omega.gamma.begin(), omega.gamma.end());
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = 0; j < pts.size(); ++j) {
        if (symplectic_form(pts[i].first, pts[j].first)) continue;
        PauliPoint sum = pts[i].first ^ pts[j].first;
        auto it = omega.gamma.find(sum);
        if (it == omega.gamma.end()) {
          r.fail("Omega is not closed under commuting sums");
          return r;
        }
        int expect =
            (pts[i].second + pts[j].second + beta(pts[i].first, pts[j].first)) & 1;
        if (it->second != expect) {
          r.fail("value assignment violates the consistency law at " +
                 to_pauli_string(pts[i].first) + ", " + to_pauli_string(pts[j].first));
          return r;
        }
      }
  } else {
    OmegaExpansion omega = expand_omega(d);
    if (!omega.consistent) r.fail("value assignment inconsistent: " + omega.problem);
  }
  return r;
}

/// Canonical maximal CNC pair of type (n,m): center <z_1..z_{n-m}>, JW set
/// from the symplectic pairs (x_i, z_i) on the last m qubits, gamma = 0.
inline CncDescriptor canonical_cnc(uint32_t n, uint32_t m) {
  if (m > n) throw std::invalid_argument("canonical_cnc: need 0 <= m <= n");
  CncDescriptor d;
  d.n = n;
  for (uint32_t q = 0; q < n - m; ++q) d.center_basis.push_back(PauliPoint::z(n, q));
  d.center_values.assign(n - m, 0);
  if (m == 0) {
    d.jw_elements = {PauliPoint(n)};
    d.jw_values = {0};
    return d;
  }
  std::vector<std::pair<PauliPoint, PauliPoint>> pairs;
  for (uint32_t i = 0; i < m; ++i)
    pairs.emplace_back(PauliPoint::x(n, n - m + i), PauliPoint::z(n, n - m + i));
  JwSet jw = jw_transform(pairs, n);
  d.jw_elements = jw.elements;
  d.jw_values.assign(d.jw_elements.size(), 0);
  return d;
}

/// Recovers the structure of an explicitly listed closed set: its center and
/// the JW representatives (projections onto W), without value bits.
/// Throws if the set is not closed or admits no anti-commuting decomposition.
inline CncDescriptor classify(const std::vector<PauliPoint>& omega_in, uint32_t n) {
  std::set<PauliPoint> omega(omega_in.begin(), omega_in.end());
  if (omega.empty()) throw std::invalid_argument("classify: empty set");
  for (const auto& a : omega)
    for (const auto& b : omega) {
      if (symplectic_form(a, b)) continue;
      if (!omega.count(a ^ b))
        throw std::invalid_argument("classify: set is not closed under commuting sums");
    }
  std::vector<PauliPoint> central;
  for (const auto& a : omega) {
    bool commutes_all = true;
    for (const auto& b : omega)
      if (symplectic_form(a, b)) {
        commutes_all = false;
        break;
      }
    if (commutes_all) central.push_back(a);
  }
  Echelon ce = gaussian_elimination(central, n);
  CncDescriptor d;
  d.n = n;
  d.center_basis = ce.basis;
  d.center_values.assign(d.center_basis.size(), 0);

  if (omega.size() == (size_t{1} << ce.rank())) {
    // Omega equals its center: the N=1, a_1=0 decomposition.
    d.jw_elements = {PauliPoint(n)};
    d.jw_values = {0};
    return d;
  }

  JwDecomposition decomp = build_jw_decomposition(d.center_basis, n);
  std::set<PauliPoint> reps;
  for (const auto& w : omega) {
    if (ce.contains(w)) continue;
    PauliPoint p = w;
    for (size_t i = 0; i < decomp.destabilizer_basis.size(); ++i)
      if (symplectic_form(decomp.destabilizer_basis[i], w))
        p ^= decomp.stabilizer_basis[i];
    if (symplectic_form(p, w) != 0 || p.is_zero())
      throw std::invalid_argument("classify: set is not contained in I^perp");
    reps.insert(p);
  }
  d.jw_elements.assign(reps.begin(), reps.end());
  for (size_t i = 0; i < d.jw_elements.size(); ++i)
    for (size_t j = i + 1; j < d.jw_elements.size(); ++j)
      if (symplectic_form(d.jw_elements[i], d.jw_elements[j]) != 1)
        throw std::invalid_argument(
            "classify: representatives do not anti-commute (no CNC decomposition)");
  d.jw_values.assign(d.jw_elements.size(), 0);

  // The union of <a_k, I> must reproduce the input exactly.
  OmegaExpansion expansion = expand_omega(d);
  if (expansion.gamma.size() != omega.size())
    throw std::invalid_argument("classify: decomposition does not reproduce the set");
  for (const auto& [p, g] : expansion.gamma)
    if (!omega.count(p))
      throw std::invalid_argument("classify: decomposition does not reproduce the set");
  return d;
}

/// Enlargement procedure 1: grow the center by an isotropic J (commuting with
/// the representatives), extending gamma with the bits s on the new basis.
inline CncDescriptor enlarge_center(const CncDescriptor& d,
                                    const std::vector<PauliPoint>& j_basis,
                                    const std::vector<int>& s) {
  if (d.is_maximal()) throw std::invalid_argument("enlarge_center: descriptor already maximal");
  if (d.anti_size() % 2 == 0 || d.anti_size() < 3)
    throw std::invalid_argument("enlarge_center: need N = 2l+1 representatives with l >= 1");
  size_t l = (d.anti_size() - 1) / 2;
  size_t t = d.m() - l;
  if (j_basis.size() != t)
    throw std::invalid_argument("enlarge_center: need dim J = m - l");
  if (s.size() != t) throw std::invalid_argument("enlarge_center: need one value bit per J vector");

  std::vector<PauliPoint> all = d.center_basis;
  all.insert(all.end(), j_basis.begin(), j_basis.end());
  Echelon e = gaussian_elimination(all, d.n);
  if (e.rank() != static_cast<int>(all.size()))
    throw std::invalid_argument("enlarge_center: J intersects the center");
  for (size_t i = 0; i < j_basis.size(); ++i) {
    for (size_t j = i + 1; j < j_basis.size(); ++j)
      if (symplectic_form(j_basis[i], j_basis[j]))
        throw std::invalid_argument("enlarge_center: J is not isotropic");
    for (const auto& c : d.center_basis)
      if (symplectic_form(j_basis[i], c))
        throw std::invalid_argument("enlarge_center: J must lie in I^perp");
    for (const auto& a : d.jw_elements)
      if (symplectic_form(j_basis[i], a))
        throw std::invalid_argument("enlarge_center: J must commute with the representatives");
  }
  CncDescriptor out = d;
  out.center_basis.insert(out.center_basis.end(), j_basis.begin(), j_basis.end());
  for (int bit : s) out.center_values.push_back(bit & 1);
  if (auto rep = validate(out); !rep.ok)
    throw std::invalid_argument("enlarge_center: result invalid: " + rep.problems.front());
  return out;
}

namespace detail {

// Coordinates of a point of W in the symplectic pair basis, and back.
struct WFrame {
  std::vector<PauliPoint> e, f;  // pair basis of W
  uint32_t m = 0;
  uint32_t n = 0;

  PauliPoint to_ambient(const PauliPoint& c) const {
    PauliPoint w(n);
    for (uint32_t i = 0; i < m; ++i) {
      if (c.x_bit(i)) w ^= e[i];
      if (c.z_bit(i)) w ^= f[i];
    }
    return w;
  }
  PauliPoint to_coords(const PauliPoint& w) const {
    PauliPoint c(m);
    for (uint32_t i = 0; i < m; ++i) {
      c.set_x(i, symplectic_form(f[i], w) != 0);
      c.set_z(i, symplectic_form(e[i], w) != 0);
    }
    return c;
  }
};

inline WFrame w_frame(const CncDescriptor& d) {
  JwDecomposition decomp = build_jw_decomposition(d.center_basis, d.n);
  SgsoResult sg = sgso(std::vector<PauliPoint>(decomp.jw.elements.begin(),
                                               decomp.jw.elements.begin() + 2 * decomp.m()),
                       d.n);
  WFrame fr;
  fr.n = d.n;
  fr.m = decomp.m();
  for (auto& [e, f] : sg.pairs) {
    fr.e.push_back(e);
    fr.f.push_back(f);
  }
  return fr;
}

// Projection onto W along I + I' and the accumulated value of the projected
// representative.
inline PhasedRow project_rep(const CncDescriptor& d, const JwDecomposition& decomp, size_t k) {
  PhasedRow acc{d.jw_elements[k], d.jw_values[k]};
  for (size_t i = 0; i < decomp.destabilizer_basis.size(); ++i)
    if (symplectic_form(decomp.destabilizer_basis[i], acc.point)) {
      // Match the stored center value for that generator.
      size_t idx = 0;
      bool found = false;
      for (; idx < d.center_basis.size(); ++idx)
        if (d.center_basis[idx] == decomp.stabilizer_basis[i]) {
          found = true;
          break;
        }
      int val = found ? d.center_values[idx] : 0;
      row_multiply(acc, {decomp.stabilizer_basis[i], val});
    }
  return acc;
}

}  // namespace detail

/// Enlargement procedure 2: complete the anti-commuting set to a JW set of W
/// with the center fixed, assigning the bits s to the new elements.
inline CncDescriptor enlarge_jw(const CncDescriptor& d, const std::vector<int>& s) {
  if (d.is_maximal()) throw std::invalid_argument("enlarge_jw: descriptor already maximal");
  uint32_t m = d.m();
  size_t missing = 2 * static_cast<size_t>(m) + 1 - d.anti_size();
  if (s.size() != missing)
    throw std::invalid_argument("enlarge_jw: need one value bit per new element");

  JwDecomposition decomp = build_jw_decomposition(d.center_basis, d.n);
  detail::WFrame fr;
  fr.n = d.n;
  fr.m = m;
  {
    SgsoResult sg =
        sgso(std::vector<PauliPoint>(decomp.jw.elements.begin(),
                                     decomp.jw.elements.begin() + 2 * m),
             d.n);
    for (auto& [e, f] : sg.pairs) {
      fr.e.push_back(e);
      fr.f.push_back(f);
    }
  }

  std::vector<PhasedRow> projected;
  std::vector<PauliPoint> coords;
  for (size_t k = 0; k < d.jw_elements.size(); ++k) {
    projected.push_back(detail::project_rep(d, decomp, k));
    coords.push_back(fr.to_coords(projected.back().point));
  }
  JwSet completed = complete_to_jw(coords, m);  // throws when already maximal

  CncDescriptor out;
  out.n = d.n;
  out.center_basis = d.center_basis;
  out.center_values = d.center_values;
  for (size_t k = 0; k < completed.elements.size(); ++k) {
    out.jw_elements.push_back(fr.to_ambient(completed.elements[k]));
    if (k < projected.size())
      out.jw_values.push_back(projected[k].sign);
    else
      out.jw_values.push_back(s[k - projected.size()] & 1);
  }
  if (auto rep = validate(out); !rep.ok)
    throw std::invalid_argument("enlarge_jw: result invalid: " + rep.problems.front());
  return out;
}

// ---------------------------------------------------------------------------
// Counting

struct CncCounts {
  boost::multiprecision::cpp_int sets;       // N_{n,m}
  boost::multiprecision::cpp_int values;     // V_{n,m}
  boost::multiprecision::cpp_int operators;  // M_{n,m} = N * V
};

namespace detail {

inline boost::multiprecision::cpp_int ipow(uint32_t base, uint64_t exp) {
  boost::multiprecision::cpp_int r = 1;
  for (uint64_t i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace detail

/// Exact counts of maximal type-(n,m) CNC sets, value assignments, and
/// operators. Defined for 1 <= m <= n.
inline CncCounts count_formulas(uint32_t n, uint32_t m) {
  using boost::multiprecision::cpp_int;
  using detail::ipow;
  if (m < 1 || m > n) throw std::invalid_argument("count_formulas: need 1 <= m <= n");
  cpp_int num = 1, den = 1;
  for (uint32_t k = 1; k <= n - m; ++k) {
    num *= ipow(4, n - k + 1) - 1;
    den *= ipow(2, k) - 1;
  }
  cpp_int iso = num / den;
  if (iso * den != num) throw std::logic_error("count_formulas: non-integral isotropic count");

  cpp_int sp = ipow(2, uint64_t{m} * m);
  for (uint32_t j = 1; j <= m; ++j) sp *= ipow(4, j) - 1;
  cpp_int fact = 1;
  for (uint32_t j = 2; j <= 2 * m + 1; ++j) fact *= j;
  cpp_int jw = sp / fact;
  if (jw * fact != sp) throw std::logic_error("count_formulas: non-integral JW count");

  CncCounts c;
  c.sets = iso * jw;
  c.values = ipow(2, n + m + 1);
  c.operators = c.sets * c.values;
  return c;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration (small n)

namespace detail {

inline void isotropic_rec(uint32_t n, uint32_t d, Echelon& cur,
                          std::set<std::vector<PauliPoint>>& seen,
                          std::vector<std::vector<PauliPoint>>& out) {
  if (cur.basis.size() == d) {
    if (seen.insert(cur.basis).second) out.push_back(cur.basis);
    return;
  }
  size_t total = size_t{1} << (2 * n);
  for (size_t code = 1; code < total; ++code) {
    PauliPoint v(n);
    for (uint32_t c = 0; c < 2 * n; ++c)
      if ((code >> c) & 1) v.set_bit(c, true);
    if (cur.contains(v)) continue;
    bool commutes = true;
    for (const auto& b : cur.basis)
      if (symplectic_form(v, b)) {
        commutes = false;
        break;
      }
    if (!commutes) continue;
    Echelon next = cur;
    next.insert(v);
    isotropic_rec(n, d, next, seen, out);
  }
}

inline std::vector<std::vector<PauliPoint>> isotropic_subspaces(uint32_t n, uint32_t d) {
  std::vector<std::vector<PauliPoint>> out;
  std::set<std::vector<PauliPoint>> seen;
  Echelon root;
  root.n = n;
  if (d == 0) {
    out.push_back({});
    return out;
  }
  isotropic_rec(n, d, root, seen, out);
  return out;
}

inline void jw_subsets_rec(const std::vector<PauliPoint>& elems, size_t start,
                           std::vector<PauliPoint>& cur, size_t want,
                           std::vector<std::vector<PauliPoint>>& out) {
  if (cur.size() == want) {
    out.push_back(cur);
    return;
  }
  for (size_t i = start; i < elems.size(); ++i) {
    bool ok = true;
    for (const auto& c : cur)
      if (symplectic_form(elems[i], c) != 1) {
        ok = false;
        break;
      }
    if (!ok) continue;
    cur.push_back(elems[i]);
    jw_subsets_rec(elems, i + 1, cur, want, out);
    cur.pop_back();
  }
}

}  // namespace detail

/// All maximal CNC descriptors (sets x value assignments) for n <= 2,
/// deduplicated by canonical center basis plus sorted JW set.
inline std::vector<CncDescriptor> enumerate_maximal(uint32_t n) {
  if (n > 2) throw std::invalid_argument("enumerate_maximal: exhaustive only for n <= 2");
  std::vector<CncDescriptor> out;
  for (uint32_t m = 1; m <= n; ++m) {
    uint32_t d = n - m;
    for (const auto& center : detail::isotropic_subspaces(n, d)) {
      JwDecomposition decomp = build_jw_decomposition(center, n);
      // All nonzero points of W, in sorted order for deterministic output.
      std::vector<PauliPoint> wbasis(decomp.jw.elements.begin(),
                                     decomp.jw.elements.begin() + 2 * m);
      std::set<PauliPoint> wpoints;
      for (size_t mask = 1; mask < (size_t{1} << (2 * m)); ++mask) {
        PauliPoint v(n);
        for (size_t i = 0; i < 2 * static_cast<size_t>(m); ++i)
          if ((mask >> i) & 1) v ^= wbasis[i];
        wpoints.insert(v);
      }
      std::vector<PauliPoint> elems(wpoints.begin(), wpoints.end());
      std::vector<std::vector<PauliPoint>> jwsets;
      std::vector<PauliPoint> cur;
      detail::jw_subsets_rec(elems, 0, cur, 2 * static_cast<size_t>(m) + 1, jwsets);
      for (const auto& jw : jwsets) {
        size_t value_bits = center.size() + jw.size();
        for (size_t vals = 0; vals < (size_t{1} << value_bits); ++vals) {
          CncDescriptor desc;
          desc.n = n;
          desc.center_basis = center;
          desc.jw_elements = jw;
          for (size_t i = 0; i < center.size(); ++i)
            desc.center_values.push_back((vals >> i) & 1);
          for (size_t i = 0; i < jw.size(); ++i)
            desc.jw_values.push_back((vals >> (center.size() + i)) & 1);
          out.push_back(std::move(desc));
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format: "n m", center rows, then JW rows, one per line, each row as a
// 2n-bit string (a_X then a_Z, qubit 1 leftmost) followed by its value bit.

inline std::string descriptor_to_text(const CncDescriptor& d) {
  if (!d.is_maximal())
    throw std::invalid_argument("descriptor_to_text: only maximal descriptors serialize");
  std::ostringstream os;
  os << d.n << ' ' << d.m() << '\n';
  auto row = [&](const PauliPoint& p, int v) {
    for (uint32_t c = 0; c < 2 * d.n; ++c) os << (p.bit(c) ? '1' : '0');
    os << (v & 1) << '\n';
  };
  for (size_t i = 0; i < d.center_basis.size(); ++i) row(d.center_basis[i], d.center_values[i]);
  for (size_t i = 0; i < d.jw_elements.size(); ++i) row(d.jw_elements[i], d.jw_values[i]);
  return os.str();
}

inline CncDescriptor descriptor_from_text(std::istream& in) {
  uint32_t n = 0, m = 0;
  if (!(in >> n >> m)) throw std::invalid_argument("descriptor: missing 'n m' header");
  if (m > n) throw std::invalid_argument("descriptor: m exceeds n");
  CncDescriptor d;
  d.n = n;
  auto read_row = [&](PauliPoint& p, int& v) {
    std::string bits;
    if (!(in >> bits)) throw std::invalid_argument("descriptor: missing row");
    if (bits.size() != 2 * n + 1)
      throw std::invalid_argument("descriptor: row needs 2n+1 bits");
    for (uint32_t c = 0; c < 2 * n; ++c) {
      if (bits[c] != '0' && bits[c] != '1')
        throw std::invalid_argument("descriptor: rows are binary");
      p.set_bit(c, bits[c] == '1');
    }
    v = bits[2 * n] == '1';
  };
  for (uint32_t i = 0; i < n - m; ++i) {
    PauliPoint p(n);
    int v = 0;
    read_row(p, v);
    d.center_basis.push_back(p);
    d.center_values.push_back(v);
  }
  for (uint32_t i = 0; i < 2 * m + 1; ++i) {
    PauliPoint p(n);
    int v = 0;
    read_row(p, v);
    d.jw_elements.push_back(p);
    d.jw_values.push_back(v);
  }
  return d;
}

inline CncDescriptor descriptor_from_text(const std::string& text) {
  std::istringstream is(text);
  return descriptor_from_text(is);
}

}  // namespace cncsim
