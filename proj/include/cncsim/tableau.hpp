#pragma once

#include <algorithm>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cncsim/cnc.hpp"
#include "cncsim/rng.hpp"

namespace cncsim {

enum class GateKind { H, S, CX };

struct Gate {
  GateKind kind;
  uint32_t q0 = 0;  // target (H, S) or control (CX)
  uint32_t q1 = 0;  // CX target

  static Gate h(uint32_t q) { return {GateKind::H, q, 0}; }
  static Gate s(uint32_t q) { return {GateKind::S, q, 0}; }
  static Gate cx(uint32_t c, uint32_t t) { return {GateKind::CX, c, t}; }
};

enum class MeasureTag { I, II, III, IV };

/// Which measurement rule applies for a tableau/operator pair, plus the rule's
/// auxiliary data: the commuting JW row (II), the anti-commuting JW row set
/// (III), or the pivot stabilizer row (IV). Row indices are absolute.
struct MeasurementCase {
  MeasureTag tag;
  uint32_t jw_row = 0;
  std::vector<uint32_t> anti_rows;
  uint32_t pivot = 0;
};

/// Test/estimation hooks: force the sampled outcome, the Case II branch coin,
/// or the Case III extension bits instead of drawing them.
struct MeasureOptions {
  std::optional<int> outcome;
  std::optional<int> branch;
  std::optional<std::vector<int>> svec;
};

struct MeasureResult {
  int outcome = 0;
  MeasureTag tag = MeasureTag::I;
  bool deterministic = false;
};

/// Phase space tableau of type (n,m): a (2n+1)x(2n+1) bit matrix whose rows
/// are the destabilizer basis f_i, the stabilizer (center) basis e_i, and the
/// 2m+1 JW rows, each carrying a value bit in the last column. One extra
/// phased row of scratch space is kept for the update rules.
class CncTableau {
public:
  static CncTableau from_descriptor(const CncDescriptor& desc) {
    if (auto rep = validate(desc); !rep.ok)
      throw std::invalid_argument("from_descriptor: invalid descriptor: " +
                                  rep.problems.front());
    if (!desc.is_maximal())
      throw std::invalid_argument("from_descriptor: descriptor must be maximal");
    CncTableau t;
    t.n_ = desc.n;
    t.m_ = desc.m();
    t.scratch_ = PhasedRow{PauliPoint(desc.n), 0};
    JwDecomposition decomp = build_jw_decomposition(desc.center_basis, desc.n);
    for (const auto& f : decomp.destabilizer_basis) t.rows_.push_back({f, 0});
    for (size_t i = 0; i < desc.center_basis.size(); ++i)
      t.rows_.push_back({desc.center_basis[i], desc.center_values[i]});
    for (size_t k = 0; k < desc.jw_elements.size(); ++k)
      t.rows_.push_back(detail::project_rep(desc, decomp, k));
    t.check_invariants();
    return t;
  }

  CncDescriptor to_descriptor() const {
    CncDescriptor d;
    d.n = n_;
    uint32_t dd = n_ - m_;
    for (uint32_t i = dd; i < 2 * dd; ++i) {
      d.center_basis.push_back(rows_[i].point);
      d.center_values.push_back(rows_[i].sign);
    }
    for (uint32_t i = 2 * dd; i < 2 * n_ + 1; ++i) {
      d.jw_elements.push_back(rows_[i].point);
      d.jw_values.push_back(rows_[i].sign);
    }
    return d;
  }

  uint32_t num_qubits() const { return n_; }
  uint32_t type_m() const { return m_; }
  uint32_t num_rows() const { return 2 * n_ + 1; }
  const PhasedRow& row(uint32_t i) const { return rows_[i]; }

  uint32_t destab_begin() const { return 0; }
  uint32_t stab_begin() const { return n_ - m_; }
  uint32_t jw_begin() const { return 2 * (n_ - m_); }

  // -------------------------------------------------------------------------
  // Clifford updates (standard tableau rules, applied to every row; the
  // destabilizer value bits stay pinned at zero since they are never read).

  void apply_h(uint32_t q) {
    require_qubit(q);
    uint32_t stab0 = stab_begin();
    for (uint32_t i = 0; i < num_rows(); ++i) {
      auto& r = rows_[i];
      bool x = r.point.x_bit(q), z = r.point.z_bit(q);
      if (i >= stab0) r.sign ^= static_cast<int>(x && z);
      r.point.set_x(q, z);
      r.point.set_z(q, x);
    }
  }

  void apply_s(uint32_t q) {
    require_qubit(q);
    uint32_t stab0 = stab_begin();
    for (uint32_t i = 0; i < num_rows(); ++i) {
      auto& r = rows_[i];
      bool x = r.point.x_bit(q), z = r.point.z_bit(q);
      if (i >= stab0) r.sign ^= static_cast<int>(x && z);
      r.point.set_z(q, x != z);
    }
  }

  void apply_cx(uint32_t c, uint32_t t) {
    require_qubit(c);
    require_qubit(t);
    if (c == t) throw std::invalid_argument("apply_cx: control equals target");
    uint32_t stab0 = stab_begin();
    for (uint32_t i = 0; i < num_rows(); ++i) {
      auto& r = rows_[i];
      bool xc = r.point.x_bit(c), zc = r.point.z_bit(c);
      bool xt = r.point.x_bit(t), zt = r.point.z_bit(t);
      if (i >= stab0) r.sign ^= static_cast<int>(xc && zt && (xt == zc));
      r.point.set_x(t, xt != xc);
      r.point.set_z(c, zc != zt);
    }
  }

  void apply(const Gate& g) {
    switch (g.kind) {
      case GateKind::H: apply_h(g.q0); break;
      case GateKind::S: apply_s(g.q0); break;
      case GateKind::CX: apply_cx(g.q0, g.q1); break;
    }
  }

  // -------------------------------------------------------------------------
  // Measurement

  /// Classifies the measured operator with one matrix-vector product over the
  /// whole tableau.
  MeasurementCase case_of(const PauliPoint& b) const {
    b.require_same_n(PauliPoint(n_));
    uint32_t d = n_ - m_;
    MeasurementCase c{MeasureTag::I, 0, {}, 0};
    for (uint32_t i = stab_begin(); i < jw_begin(); ++i)
      if (symplectic_form(rows_[i].point, b)) {
        c.tag = MeasureTag::IV;
        c.pivot = i;
        return c;
      }
    std::vector<uint32_t> anti;
    std::optional<uint32_t> comm;
    for (uint32_t i = jw_begin(); i < num_rows(); ++i) {
      if (symplectic_form(rows_[i].point, b))
        anti.push_back(i);
      else
        comm = comm ? comm : std::optional<uint32_t>(i);
    }
    if (anti.empty()) {
      c.tag = MeasureTag::I;
      return c;
    }
    if (anti.size() == 2 * static_cast<size_t>(m_)) {
      c.tag = MeasureTag::II;
      // The unique commuting JW row.
      for (uint32_t i = jw_begin(); i < num_rows(); ++i)
        if (!symplectic_form(rows_[i].point, b)) c.jw_row = i;
      return c;
    }
    c.tag = MeasureTag::III;
    c.anti_rows = std::move(anti);
    return c;
  }

  /// The phased canonical form (b, gamma(b)) when b lives in Omega, built by
  /// row products over the stabilizer rows selected by destabilizer
  /// anti-commutation, plus the commuting JW row when b is outside the center.
  std::optional<PhasedRow> canonical_form(const PauliPoint& b) const {
    MeasurementCase c = case_of(b);
    if (c.tag == MeasureTag::III || c.tag == MeasureTag::IV) return std::nullopt;
    PhasedRow acc{PauliPoint(n_), 0};
    if (c.tag == MeasureTag::II) acc = rows_[c.jw_row];
    accumulate_center_part(acc, b);
    if (!(acc.point == b)) return std::nullopt;  // b in I^perp \ Omega with m=0 center gap
    return acc;
  }

  /// Measures (-1)^sign T_b with outcome and branch randomness drawn from a
  /// split of rng (one split per call, so traces stay aligned). Returns the
  /// observed outcome; the tableau is updated in place.
  MeasureResult measure(const PauliPoint& b, int sign, SplitRng& rng,
                        const MeasureOptions& opts = {}) {
    SplitRng sub = rng.split();
    MeasurementCase c = case_of(b);
    MeasureResult res;
    res.tag = c.tag;
    switch (c.tag) {
      case MeasureTag::I: {
        PhasedRow acc{PauliPoint(n_), 0};
        accumulate_center_part(acc, b);
        if (!(acc.point == b)) throw std::logic_error("measure: case I reconstruction failed");
        res.outcome = acc.sign ^ sign;
        res.deterministic = true;
        return res;
      }
      case MeasureTag::II: {
        PhasedRow acc = rows_[c.jw_row];
        accumulate_center_part(acc, b);
        if (!(acc.point == b)) throw std::logic_error("measure: case II reconstruction failed");
        res.outcome = acc.sign ^ sign;
        res.deterministic = true;
        int coin = opts.branch ? (*opts.branch & 1) : sub.next_bit();
        if (coin) {
          // gamma + [b,.] flips exactly the JW rows other than the commuting one.
          for (uint32_t i = jw_begin(); i < num_rows(); ++i)
            if (i != c.jw_row) rows_[i].sign ^= 1;
        }
        return res;
      }
      case MeasureTag::III: {
        int r_plus = opts.outcome ? ((*opts.outcome ^ sign) & 1) : sub.next_bit();
        case_iii_update(b, c, r_plus, opts, sub);
        res.outcome = r_plus ^ sign;
        return res;
      }
      case MeasureTag::IV: {
        int r_plus = opts.outcome ? ((*opts.outcome ^ sign) & 1) : sub.next_bit();
        case_iv_update(b, c, r_plus);
        res.outcome = r_plus ^ sign;
        return res;
      }
    }
    throw std::logic_error("measure: unreachable");
  }

  // -------------------------------------------------------------------------
  // Composition and layout

  /// Block-diagonal tensor product with a type-(n',0) tableau; the appended
  /// qubits carry the stabilizer factor and the JW block stays with *this.
  static CncTableau compose(const CncTableau& t1, const CncTableau& t2) {
    if (t2.m_ != 0)
      throw std::invalid_argument("compose: second factor must have type m = 0");
    CncTableau out;
    out.n_ = t1.n_ + t2.n_;
    out.m_ = t1.m_;
    out.scratch_ = PhasedRow{PauliPoint(out.n_), 0};
    auto embed = [&](const PhasedRow& r, uint32_t offset, uint32_t nsrc) {
      PhasedRow e{PauliPoint(out.n_), r.sign};
      for (uint32_t q = 0; q < nsrc; ++q) {
        e.point.set_x(offset + q, r.point.x_bit(q));
        e.point.set_z(offset + q, r.point.z_bit(q));
      }
      return e;
    };
    uint32_t d1 = t1.n_ - t1.m_;
    for (uint32_t i = 0; i < d1; ++i) out.rows_.push_back(embed(t1.rows_[i], 0, t1.n_));
    for (uint32_t i = 0; i < t2.n_; ++i)
      out.rows_.push_back(embed(t2.rows_[i], t1.n_, t2.n_));
    for (uint32_t i = d1; i < 2 * d1; ++i) out.rows_.push_back(embed(t1.rows_[i], 0, t1.n_));
    for (uint32_t i = t2.n_; i < 2 * t2.n_; ++i)
      out.rows_.push_back(embed(t2.rows_[i], t1.n_, t2.n_));
    for (uint32_t i = 2 * d1; i < t1.num_rows(); ++i)
      out.rows_.push_back(embed(t1.rows_[i], 0, t1.n_));
    out.check_invariants();
    return out;
  }

  /// Relabels qubits: old qubit q becomes perm[q]. The symplectic form, beta,
  /// and all invariants are preserved exactly.
  void permute_qubits(const std::vector<uint32_t>& perm) {
    if (perm.size() != n_) throw std::invalid_argument("permute_qubits: size mismatch");
    for (auto& r : rows_) {
      PauliPoint np(n_);
      for (uint32_t q = 0; q < n_; ++q) {
        np.set_x(perm[q], r.point.x_bit(q));
        np.set_z(perm[q], r.point.z_bit(q));
      }
      r.point = np;
    }
  }

  // -------------------------------------------------------------------------
  // Dump format: header "n m", then 2n+1 lines of 2n+1 bits, value bit last.

  std::string dump() const {
    std::ostringstream os;
    os << n_ << ' ' << m_ << '\n';
    for (const auto& r : rows_) {
      for (uint32_t c = 0; c < 2 * n_; ++c) os << (r.point.bit(c) ? '1' : '0');
      os << (r.sign & 1) << '\n';
    }
    return os.str();
  }

  static CncTableau parse(std::istream& in) {
    uint32_t n = 0, m = 0;
    if (!(in >> n >> m)) throw std::invalid_argument("tableau parse: missing 'n m' header");
    if (m > n) throw std::invalid_argument("tableau parse: m exceeds n");
    CncTableau t;
    t.n_ = n;
    t.m_ = m;
    t.scratch_ = PhasedRow{PauliPoint(n), 0};
    for (uint32_t i = 0; i < 2 * n + 1; ++i) {
      std::string bits;
      if (!(in >> bits) || bits.size() != 2 * n + 1)
        throw std::invalid_argument("tableau parse: bad row");
      PhasedRow r{PauliPoint(n), bits[2 * n] == '1'};
      for (uint32_t c = 0; c < 2 * n; ++c) r.point.set_bit(c, bits[c] == '1');
      t.rows_.push_back(std::move(r));
    }
    t.check_invariants();
    return t;
  }

  // -------------------------------------------------------------------------

  /// Verifies the structural invariants; throws std::logic_error with the
  /// first violation found.
  void check_invariants() const {
    uint32_t d = n_ - m_;
    if (rows_.size() != 2 * static_cast<size_t>(n_) + 1)
      throw std::logic_error("tableau: wrong row count");
    auto form = [&](uint32_t i, uint32_t j) {
      return symplectic_form(rows_[i].point, rows_[j].point);
    };
    for (uint32_t i = 0; i < d; ++i) {
      if (rows_[i].sign != 0) throw std::logic_error("tableau: destabilizer value not zero");
      for (uint32_t j = 0; j < d; ++j) {
        if (form(i, j) != 0) throw std::logic_error("tableau: destabilizers must commute");
        if (form(i, d + j) != (i == j ? 1 : 0))
          throw std::logic_error("tableau: conjugacy [e_i,f_j] = delta violated");
      }
    }
    for (uint32_t i = d; i < 2 * d; ++i)
      for (uint32_t j = d; j < 2 * d; ++j)
        if (form(i, j) != 0) throw std::logic_error("tableau: stabilizers must commute");
    PauliPoint sum(n_);
    for (uint32_t i = 2 * d; i < num_rows(); ++i) {
      sum ^= rows_[i].point;
      for (uint32_t j = 0; j < 2 * d; ++j)
        if (form(i, j) != 0)
          throw std::logic_error("tableau: JW rows must commute with (de)stabilizers");
      for (uint32_t j = i + 1; j < num_rows(); ++j)
        if (m_ > 0 && form(i, j) != 1)
          throw std::logic_error("tableau: JW rows must pairwise anti-commute");
    }
    if (!sum.is_zero()) throw std::logic_error("tableau: JW rows must XOR to zero");
    if (m_ == 0 && !rows_[2 * d].point.is_zero())
      throw std::logic_error("tableau: m=0 JW row must be zero");
    std::vector<PauliPoint> pts;
    for (uint32_t i = 0; i + 1 < num_rows(); ++i) pts.push_back(rows_[i].point);
    if (gaussian_elimination(pts, n_).rank() != static_cast<int>(2 * n_))
      throw std::logic_error("tableau: rows do not span E_n");
  }

  friend bool operator==(const CncTableau&, const CncTableau&) = default;

private:
  CncTableau() : scratch_{PauliPoint(1), 0} {}

  void require_qubit(uint32_t q) const {
    if (q >= n_) throw std::out_of_range("tableau: qubit index out of range");
  }

  /// Multiplies into acc the stabilizer rows selected by the destabilizer
  /// anti-commutation pattern of b (the center part of b's expansion).
  void accumulate_center_part(PhasedRow& acc, const PauliPoint& b) const {
    uint32_t d = n_ - m_;
    for (uint32_t i = 0; i < d; ++i)
      if (symplectic_form(rows_[i].point, b)) row_multiply(acc, rows_[d + i]);
  }

  void case_iii_update(const PauliPoint& b, const MeasurementCase& c, int r_plus,
                       const MeasureOptions& opts, SplitRng& sub) {
    uint32_t d = n_ - m_;
    uint32_t jw0 = jw_begin();
    size_t t = c.anti_rows.size() / 2;

    // Stable reorder: anti-commuting JW rows first.
    {
      std::vector<PhasedRow> reordered;
      reordered.reserve(2 * m_ + 1);
      for (uint32_t i : c.anti_rows) reordered.push_back(std::move(rows_[i]));
      for (uint32_t i = jw0; i < num_rows(); ++i) {
        bool is_anti = std::find(c.anti_rows.begin(), c.anti_rows.end(), i) != c.anti_rows.end();
        if (!is_anti) reordered.push_back(std::move(rows_[i]));
      }
      std::move(reordered.begin(), reordered.end(), rows_.begin() + jw0);
    }

    // New first stabilizer: the projection of b onto W with the value bit
    // accumulated through the center part, so that the represented assignment
    // gives gamma(b) = r exactly (not just gamma(b_bar) = r).
    scratch_ = PhasedRow{b, r_plus};
    accumulate_center_part(scratch_, b);
    {
      PauliPoint bbar(n_);
      for (uint32_t i = jw0 + static_cast<uint32_t>(2 * t); i < num_rows(); ++i)
        bbar ^= rows_[i].point;
      if (!(scratch_.point == bbar))
        throw std::logic_error("measure: case III projection mismatch");
    }
    rows_[jw0] = scratch_;
    rows_[jw0 + 1].sign = 0;
    const PhasedRow new_first = rows_[jw0];

    // Remaining hyperbolic pairs via the scratch-row recurrence.
    PauliPoint running = rows_[jw0].point ^ rows_[jw0 + 1].point;
    for (size_t i = 2; i <= t; ++i) {
      int s_i = opts.svec ? ((*opts.svec)[i - 2] & 1) : sub.next_bit();
      auto& stab_row = rows_[jw0 + 2 * i - 2];
      auto& destab_row = rows_[jw0 + 2 * i - 1];
      stab_row.point ^= running;
      stab_row.sign = s_i;
      destab_row.point ^= running;
      destab_row.sign = 0;
      running ^= stab_row.point;
      running ^= destab_row.point;
    }

    // Multiply the commuting JW rows into the new center coset.
    for (uint32_t i = jw0 + static_cast<uint32_t>(2 * t); i < num_rows(); ++i)
      row_multiply(rows_[i], new_first);

    // Relocate: new destabilizers behind the old ones, new stabilizers behind
    // the old stabilizers, surviving JW rows last.
    std::vector<PhasedRow> next;
    next.reserve(rows_.size());
    for (uint32_t i = 0; i < d; ++i) next.push_back(std::move(rows_[i]));
    for (size_t i = 1; i <= t; ++i) next.push_back(std::move(rows_[jw0 + 2 * i - 1]));
    for (uint32_t i = d; i < 2 * d; ++i) next.push_back(std::move(rows_[i]));
    for (size_t i = 1; i <= t; ++i) next.push_back(std::move(rows_[jw0 + 2 * i - 2]));
    for (uint32_t i = jw0 + static_cast<uint32_t>(2 * t); i < num_rows(); ++i)
      next.push_back(std::move(rows_[i]));
    rows_ = std::move(next);
    m_ -= static_cast<uint32_t>(t);
  }

  void case_iv_update(const PauliPoint& b, const MeasurementCase& c, int r_plus) {
    uint32_t d = n_ - m_;
    uint32_t lambda = c.pivot;
    for (uint32_t i = 0; i < num_rows(); ++i) {
      if (i == lambda || !symplectic_form(rows_[i].point, b)) continue;
      if (i < d) {
        rows_[i].point ^= rows_[lambda].point;  // destabilizer values stay zero
      } else {
        row_multiply(rows_[i], rows_[lambda]);
      }
    }
    rows_[lambda - d] = PhasedRow{rows_[lambda].point, 0};
    rows_[lambda] = PhasedRow{b, r_plus};
  }

  uint32_t n_ = 0;
  uint32_t m_ = 0;
  std::vector<PhasedRow> rows_;
  PhasedRow scratch_;
};

}  // namespace cncsim
