#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cncsim {

/// A point of the symplectic space E_n = Z_2^{2n} labeling an n-qubit Pauli
/// operator T_a = i^{phi(a)} X^{a_X} Z^{a_Z} modulo sign.
///
/// The X half and the Z half are packed into separate word runs so that the
/// symplectic form reduces to popcount(aX & bZ) ^ popcount(aZ & bX) per word.
class PauliPoint {
public:
  explicit PauliPoint(uint32_t n)
      : n_(n), words_(word_count(n)), bits_(2 * static_cast<size_t>(words_), 0) {}

  static PauliPoint x(uint32_t n, uint32_t q) {
    PauliPoint p(n);
    p.set_x(q, true);
    return p;
  }
  static PauliPoint z(uint32_t n, uint32_t q) {
    PauliPoint p(n);
    p.set_z(q, true);
    return p;
  }
  static PauliPoint y(uint32_t n, uint32_t q) {
    PauliPoint p(n);
    p.set_x(q, true);
    p.set_z(q, true);
    return p;
  }

  uint32_t num_qubits() const { return n_; }
  uint32_t num_words() const { return words_; }

  // Qubits are 0-based in the API; text formats are 1-based.
  bool x_bit(uint32_t q) const { return get(bits_.data(), q); }
  bool z_bit(uint32_t q) const { return get(bits_.data() + words_, q); }
  void set_x(uint32_t q, bool v) { set(bits_.data(), q, v); }
  void set_z(uint32_t q, bool v) { set(bits_.data() + words_, q, v); }

  // Generic 2n-bit column access, columns 0..n-1 = X part, n..2n-1 = Z part.
  bool bit(uint32_t col) const { return col < n_ ? x_bit(col) : z_bit(col - n_); }
  void set_bit(uint32_t col, bool v) {
    if (col < n_)
      set_x(col, v);
    else
      set_z(col - n_, v);
  }

  std::span<const uint64_t> x_words() const { return {bits_.data(), words_}; }
  std::span<const uint64_t> z_words() const { return {bits_.data() + words_, words_}; }
  std::span<uint64_t> x_words() { return {bits_.data(), words_}; }
  std::span<uint64_t> z_words() { return {bits_.data() + words_, words_}; }

  bool is_zero() const {
    for (uint64_t w : bits_)
      if (w) return false;
    return true;
  }

  PauliPoint& operator^=(const PauliPoint& o) {
    require_same_n(o);
    for (size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= o.bits_[i];
    return *this;
  }
  friend PauliPoint operator^(PauliPoint a, const PauliPoint& b) {
    a ^= b;
    return a;
  }

  friend bool operator==(const PauliPoint&, const PauliPoint&) = default;
  friend std::strong_ordering operator<=>(const PauliPoint& a, const PauliPoint& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    // Lexicographic by column, qubit 1 leftmost, X half before Z half.
    for (uint32_t col = 0; col < 2 * a.n_; ++col) {
      int ba = a.bit(col), bb = b.bit(col);
      if (ba != bb) return bb <=> ba;  // a 1 sorts before a 0 in the same column
    }
    return std::strong_ordering::equal;
  }

  void require_same_n(const PauliPoint& o) const {
    if (n_ != o.n_) throw std::invalid_argument("PauliPoint: mismatched qubit count");
  }

  static uint32_t word_count(uint32_t n) { return (n + 63) / 64; }

private:
  static bool get(const uint64_t* w, uint32_t i) {
    return (w[i >> 6] >> (i & 63)) & 1u;
  }
  static void set(uint64_t* w, uint32_t i, bool v) {
    uint64_t m = uint64_t{1} << (i & 63);
    if (v)
      w[i >> 6] |= m;
    else
      w[i >> 6] &= ~m;
  }

  uint32_t n_;
  uint32_t words_;
  std::vector<uint64_t> bits_;
};

inline int popcount_and(std::span<const uint64_t> a, std::span<const uint64_t> b) {
  int c = 0;
  for (size_t i = 0; i < a.size(); ++i) c += std::popcount(a[i] & b[i]);
  return c;
}

/// Symplectic form [a,b] = a_X.b_Z + a_Z.b_X over Z_2; zero iff T_a, T_b commute.
inline int symplectic_form(const PauliPoint& a, const PauliPoint& b) {
  a.require_same_n(b);
  return (popcount_and(a.x_words(), b.z_words()) ^ popcount_and(a.z_words(), b.x_words())) & 1;
}

/// phi(a) = a_X . a_Z as a plain integer (the i-exponent of T_a before reduction).
inline int phase_exponent(const PauliPoint& a) {
  return popcount_and(a.x_words(), a.z_words());
}

/// Sign bit of T_a T_b = (-1)^beta T_{a+b}; defined for commuting a, b only.
inline int beta(const PauliPoint& a, const PauliPoint& b) {
  if (symplectic_form(a, b) != 0)
    throw std::invalid_argument("beta: operands anti-commute");
  PauliPoint s = a ^ b;
  int num = phase_exponent(a) + phase_exponent(b) +
            2 * popcount_and(a.z_words(), b.x_words()) - phase_exponent(s);
  return (num / 2) & 1;
}

/// Tableau row carrying a Pauli point and its phase/value bit s,
/// representing (-1)^s T_a.
struct PhasedRow {
  PauliPoint point;
  int sign = 0;  // s in Z_2

  friend bool operator==(const PhasedRow&, const PhasedRow&) = default;
};

/// Row product (R(a),s) * (R(b),r) = (R(a)+R(b), s+r+beta(a,b)).
inline PhasedRow row_product(const PhasedRow& a, const PhasedRow& b) {
  int s = (a.sign ^ b.sign ^ beta(a.point, b.point)) & 1;
  return {a.point ^ b.point, s};
}

/// Accumulating variant; keeps the left operand's storage.
inline void row_multiply(PhasedRow& acc, const PhasedRow& b) {
  acc.sign = (acc.sign ^ b.sign ^ beta(acc.point, b.point)) & 1;
  acc.point ^= b.point;
}

inline std::string to_pauli_string(const PauliPoint& a, int sign = 0) {
  std::string s;
  if (sign) s.push_back('-');
  for (uint32_t q = 0; q < a.num_qubits(); ++q) {
    bool x = a.x_bit(q), z = a.z_bit(q);
    s.push_back(x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I'));
  }
  return s;
}

struct ParsedPauli {
  PauliPoint point;
  int sign = 0;
};

/// Parses "XZY" / "-XIZ" style strings; Y carries bits (x=1,z=1) with the
/// i^phi convention absorbed into T_a.
inline ParsedPauli parse_pauli_string(std::string_view s) {
  int sign = 0;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    sign = s.front() == '-' ? 1 : 0;
    s.remove_prefix(1);
  }
  if (s.empty()) throw std::invalid_argument("parse_pauli_string: empty operator");
  PauliPoint p(static_cast<uint32_t>(s.size()));
  for (uint32_t q = 0; q < s.size(); ++q) {
    switch (s[q]) {
      case 'I': break;
      case 'X': p.set_x(q, true); break;
      case 'Z': p.set_z(q, true); break;
      case 'Y': p.set_x(q, true); p.set_z(q, true); break;
      default:
        throw std::invalid_argument("parse_pauli_string: bad character '" +
                                    std::string(1, s[q]) + "'");
    }
  }
  return {p, sign};
}

}  // namespace cncsim
