#pragma once

#include <cstdint>

namespace cncsim {

namespace detail {

inline uint64_t mix64(uint64_t z) {
  // SplitMix64 finalizer.
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based splittable generator. A stream is (key, counter); output
/// word i is a fixed mix of key and i, so identical seeds give identical
/// traces on any platform. split() derives an independent child stream and
/// consumes exactly one position of the parent, which keeps event traces
/// reproducible no matter how many draws the child makes.
class SplitRng {
public:
  explicit SplitRng(uint64_t seed, uint64_t stream = 0)
      : key_(detail::mix64(detail::mix64(seed) ^ (stream * 0xda942042e4dd58b5ULL))) {}

  uint64_t next_word() { return detail::mix64(key_ ^ (ctr_++ * 0xd1342543de82ef95ULL)); }

  int next_bit() {
    if (bits_left_ == 0) {
      bit_buf_ = next_word();
      bits_left_ = 64;
    }
    int b = static_cast<int>(bit_buf_ & 1);
    bit_buf_ >>= 1;
    --bits_left_;
    return b;
  }

  /// Uniform integer in [0, bound) via rejection; bound must be positive.
  uint64_t next_below(uint64_t bound) {
    uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      uint64_t w = next_word();
      if (w >= threshold) return w % bound;
    }
  }

  double next_unit() {
    return static_cast<double>(next_word() >> 11) * 0x1.0p-53;
  }

  SplitRng split() {
    SplitRng child(0);
    child.key_ = detail::mix64(key_ ^ detail::mix64(ctr_++ ^ 0xa0761d6478bd642fULL));
    return child;
  }

  /// Deterministic stream for a (master seed, index) pair, used to derive
  /// per-sample streams that are independent of worker scheduling.
  static SplitRng for_index(uint64_t master_seed, uint64_t index) {
    return SplitRng(detail::mix64(master_seed) ^ index, 0x6a09e667f3bcc909ULL);
  }

private:
  uint64_t key_ = 0;
  uint64_t ctr_ = 0;
  uint64_t bit_buf_ = 0;
  int bits_left_ = 0;
};

}  // namespace cncsim
