#include <catch2/catch_amalgamated.hpp>

#include "cncsim/gf2.hpp"
#include "cncsim/pauli.hpp"
#include "cncsim/rng.hpp"

using namespace cncsim;

namespace {

PauliPoint random_point(uint32_t n, SplitRng& rng) {
  PauliPoint p(n);
  for (uint32_t c = 0; c < 2 * n; ++c) p.set_bit(c, rng.next_bit());
  return p;
}

}  // namespace

TEST_CASE("symplectic form on canonical pairs") {
  auto x1 = parse_pauli_string("XI").point;
  auto z1 = parse_pauli_string("ZI").point;
  CHECK(symplectic_form(x1, z1) == 1);

  auto xz = parse_pauli_string("XZ").point;
  auto zx = parse_pauli_string("ZX").point;
  CHECK(symplectic_form(xz, zx) == 0);

  SplitRng rng(7);
  for (int i = 0; i < 50; ++i) {
    PauliPoint a = random_point(3, rng);
    CHECK(symplectic_form(a, a) == 0);
  }
}

TEST_CASE("symplectic form is bilinear") {
  SplitRng rng(11);
  for (uint32_t n : {1u, 2u, 3u, 5u, 70u}) {
    for (int i = 0; i < 30; ++i) {
      PauliPoint a = random_point(n, rng), b = random_point(n, rng), c = random_point(n, rng);
      CHECK(symplectic_form(a ^ b, c) == (symplectic_form(a, c) ^ symplectic_form(b, c)));
    }
  }
}

TEST_CASE("symplectic form rejects mismatched sizes") {
  CHECK_THROWS_AS(symplectic_form(PauliPoint(2), PauliPoint(3)), std::invalid_argument);
}

TEST_CASE("beta basics") {
  SplitRng rng(3);
  for (int i = 0; i < 40; ++i) {
    PauliPoint a = random_point(3, rng);
    CHECK(beta(a, a) == 0);  // T_a^2 = I
  }
  auto xi = parse_pauli_string("XI").point;
  auto ix = parse_pauli_string("IX").point;
  CHECK(beta(xi, ix) == 0);  // disjoint supports

  // (X@Z)(Z@X) = (XZ)@(ZX) = (-iY)@(iY) = +Y@Y, so beta = 0.
  auto xz = parse_pauli_string("XZ").point;
  auto zx = parse_pauli_string("ZX").point;
  CHECK(beta(xz, zx) == 0);

  auto x1 = parse_pauli_string("X").point;
  auto z1 = parse_pauli_string("Z").point;
  CHECK_THROWS_AS(beta(x1, z1), std::invalid_argument);
}

TEST_CASE("row product identities") {
  SplitRng rng(5);
  PhasedRow zero{PauliPoint(2), 0};
  for (int i = 0; i < 30; ++i) {
    PhasedRow r{random_point(2, rng), rng.next_bit()};
    CHECK(row_product(r, zero) == r);
    PhasedRow sq = row_product(r, r);
    CHECK(sq.point.is_zero());
    CHECK(sq.sign == 0);
  }
}

TEST_CASE("pauli string round trip") {
  for (const char* s : {"I", "XZY", "-XZY", "IIZX", "YYYY"}) {
    auto parsed = parse_pauli_string(s);
    std::string back = to_pauli_string(parsed.point, parsed.sign);
    std::string expect = (s[0] == '+') ? s + 1 : s;
    CHECK(back == expect);
  }
  CHECK_THROWS_AS(parse_pauli_string("XQ"), std::invalid_argument);
  CHECK_THROWS_AS(parse_pauli_string(""), std::invalid_argument);
}

TEST_CASE("bit packing across word boundaries") {
  uint32_t n = 100;
  auto a = PauliPoint::x(n, 99);
  auto b = PauliPoint::z(n, 99);
  CHECK(symplectic_form(a, b) == 1);
  CHECK(symplectic_form(a, PauliPoint::z(n, 63)) == 0);
  CHECK(phase_exponent(PauliPoint::y(n, 64)) == 1);
}

TEST_CASE("gaussian elimination rank") {
  auto x1 = PauliPoint::x(2, 0);
  std::vector<PauliPoint> dup{x1, x1};
  CHECK(gaussian_elimination(dup, 2).rank() == 1);

  std::vector<PauliPoint> none;
  CHECK(gaussian_elimination(none, 2).rank() == 0);

  // Random invertible set built from the canonical basis by elementary row
  // operations, which keep the determinant nonzero.
  SplitRng rng(19);
  for (uint32_t n : {2u, 3u, 4u}) {
    std::vector<PauliPoint> rows;
    for (uint32_t q = 0; q < n; ++q) {
      rows.push_back(PauliPoint::x(n, q));
      rows.push_back(PauliPoint::z(n, q));
    }
    for (int step = 0; step < 60; ++step) {
      size_t i = rng.next_below(rows.size()), j = rng.next_below(rows.size());
      if (i != j) rows[i] ^= rows[j];
    }
    CHECK(gaussian_elimination(rows, n).rank() == static_cast<int>(2 * n));
  }
}

TEST_CASE("echelon reduce and membership") {
  std::vector<PauliPoint> gens{parse_pauli_string("XI").point, parse_pauli_string("IZ").point};
  Echelon e = gaussian_elimination(gens, 2);
  CHECK(e.contains(parse_pauli_string("XZ").point));
  CHECK(!e.contains(parse_pauli_string("ZI").point));
}

TEST_CASE("solve_commutation finds anti-commuting partners") {
  std::vector<PauliPoint> gens{parse_pauli_string("XI").point, parse_pauli_string("ZI").point};
  std::vector<int> rhs{1, 1};
  auto sol = solve_commutation(gens, rhs, 2);
  REQUIRE(sol.has_value());
  CHECK(symplectic_form(gens[0], *sol) == 1);
  CHECK(symplectic_form(gens[1], *sol) == 1);
}

TEST_CASE("commutant basis spans the symplectic complement") {
  std::vector<PauliPoint> gens{parse_pauli_string("ZI").point};
  auto w = commutant_basis(gens, 2);
  CHECK(w.size() == 3);  // dim I^perp = n + m = 3 for a 1-dim isotropic in E_2
  for (const auto& v : w) CHECK(symplectic_form(gens[0], v) == 0);
}

TEST_CASE("span solver expresses combinations") {
  std::vector<PauliPoint> gens{parse_pauli_string("XI").point, parse_pauli_string("IX").point,
                               parse_pauli_string("ZZ").point};
  SpanSolver solver(gens, 2);
  auto combo = solver.express(parse_pauli_string("XX").point);
  REQUIRE(combo.has_value());
  PauliPoint recon(2);
  for (size_t i = 0; i < gens.size(); ++i)
    if ((*combo)[i]) recon ^= gens[i];
  CHECK(recon == parse_pauli_string("XX").point);
  CHECK(!solver.express(parse_pauli_string("ZI").point).has_value());
}

TEST_CASE("split rng is deterministic and splittable") {
  SplitRng a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.next_word() == b.next_word());
  SplitRng c(42);
  for (int i = 0; i < 10; ++i) c.next_word();
  SplitRng c1 = c.split();
  SplitRng c2 = c.split();
  CHECK(c1.next_word() != c2.next_word());
  CHECK(SplitRng::for_index(9, 4).next_word() == SplitRng::for_index(9, 4).next_word());
  CHECK(SplitRng::for_index(9, 4).next_word() != SplitRng::for_index(9, 5).next_word());
}
