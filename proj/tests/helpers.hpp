#pragma once

#include <optional>
#include <vector>

#include "cncsim/rng.hpp"
#include "cncsim/tableau.hpp"

namespace cncsim::testing {

inline Gate random_gate(uint32_t n, SplitRng& rng) {
  switch (rng.next_below(n > 1 ? 3 : 2)) {
    case 0: return Gate::h(static_cast<uint32_t>(rng.next_below(n)));
    case 1: return Gate::s(static_cast<uint32_t>(rng.next_below(n)));
    default: {
      uint32_t c = static_cast<uint32_t>(rng.next_below(n));
      uint32_t t = static_cast<uint32_t>(rng.next_below(n - 1));
      if (t >= c) ++t;
      return Gate::cx(c, t);
    }
  }
}

/// Random maximal CNC tableau: canonical type with random value bits pushed
/// through a random Clifford word (the Clifford action is transitive on each
/// type class).
inline CncTableau random_tableau(uint32_t n, SplitRng& rng,
                                 std::optional<uint32_t> force_m = std::nullopt,
                                 int word_len = 24) {
  uint32_t m = force_m ? *force_m : static_cast<uint32_t>(rng.next_below(n + 1));
  CncDescriptor d = canonical_cnc(n, m);
  for (auto& v : d.center_values) v = rng.next_bit();
  if (m > 0)
    for (auto& v : d.jw_values) v = rng.next_bit();
  CncTableau t = CncTableau::from_descriptor(d);
  for (int i = 0; i < word_len; ++i) t.apply(random_gate(n, rng));
  return t;
}

inline PauliPoint random_point(uint32_t n, SplitRng& rng) {
  PauliPoint p(n);
  for (uint32_t c = 0; c < 2 * n; ++c) p.set_bit(c, rng.next_bit());
  return p;
}

}  // namespace cncsim::testing
