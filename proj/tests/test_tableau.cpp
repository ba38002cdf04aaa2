#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "cncsim/dense.hpp"
#include "helpers.hpp"

using namespace cncsim;
using cncsim::testing::random_gate;
using cncsim::testing::random_point;
using cncsim::testing::random_tableau;

namespace {

PauliPoint pp(const std::string& s) { return parse_pauli_string(s).point; }

}  // namespace

TEST_CASE("from_descriptor canonical forms") {
  SECTION("(n,0) is the computational-basis stabilizer tableau") {
    CncTableau t = CncTableau::from_descriptor(canonical_cnc(3, 0));
    CHECK(t.type_m() == 0);
    for (uint32_t i = 0; i < 3; ++i) {
      CHECK(t.row(i).point == PauliPoint::x(3, i));        // destabilizers
      CHECK(t.row(3 + i).point == PauliPoint::z(3, i));    // stabilizers
      CHECK(t.row(3 + i).sign == 0);
    }
    CHECK(t.row(6).point.is_zero());  // single zero JW row
  }
  SECTION("canonical (n,m) JW block is the triangular form") {
    CncTableau t = CncTableau::from_descriptor(canonical_cnc(2, 2));
    CHECK(t.row(0).point == pp("XI"));
    CHECK(t.row(1).point == pp("ZI"));
    CHECK(t.row(2).point == pp("YX"));
    CHECK(t.row(3).point == pp("YZ"));
    CHECK(t.row(4).point == pp("YY"));
  }
  SECTION("round trip through descriptors") {
    for (uint32_t n = 1; n <= 3; ++n)
      for (uint32_t m = 0; m <= n; ++m) {
        CncDescriptor d = canonical_cnc(n, m);
        if (!d.center_values.empty()) d.center_values.back() = 1;
        CncTableau t = CncTableau::from_descriptor(d);
        CHECK(t.to_descriptor() == d);
      }
  }
  SECTION("invalid descriptor rejected") {
    CncDescriptor bad = canonical_cnc(2, 1);
    bad.jw_values.pop_back();
    CHECK_THROWS_AS(CncTableau::from_descriptor(bad), std::invalid_argument);
  }
}

TEST_CASE("gate updates preserve invariants and match the dense oracle") {
  SplitRng rng(101);
  for (uint32_t n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 12; ++trial) {
      uint32_t m = static_cast<uint32_t>(rng.next_below(n + 1));
      CncDescriptor d = canonical_cnc(n, m);
      for (auto& v : d.center_values) v = rng.next_bit();
      if (m > 0)
        for (auto& v : d.jw_values) v = rng.next_bit();
      CncTableau t = CncTableau::from_descriptor(d);
      DenseMatrix rho = cnc_dense(d);
      std::vector<Gate> word;
      for (int g = 0; g < 16; ++g) word.push_back(random_gate(n, rng));
      for (const auto& g : word) t.apply(g);
      t.check_invariants();
      DenseMatrix u = word_unitary(n, word);
      CHECK(max_abs_diff(cnc_dense(t), u * rho * u.adjoint()) < 1e-12);
    }
  }
}

TEST_CASE("S gate has order four") {
  SplitRng rng(103);
  CncTableau t = random_tableau(3, rng);
  CncTableau before = t;
  for (int i = 0; i < 4; ++i) t.apply_s(1);
  CHECK(t == before);
}

TEST_CASE("gate argument validation") {
  CncTableau t = CncTableau::from_descriptor(canonical_cnc(2, 1));
  CHECK_THROWS_AS(t.apply_h(2), std::out_of_range);
  CHECK_THROWS_AS(t.apply_cx(0, 0), std::invalid_argument);
}

TEST_CASE("case_of canonical examples") {
  SECTION("(2,1) cases") {
    CncTableau t = CncTableau::from_descriptor(canonical_cnc(2, 1));
    CHECK(t.case_of(pp("ZI")).tag == MeasureTag::I);
    CHECK(t.case_of(pp("IX")).tag == MeasureTag::II);
    CHECK(t.case_of(pp("XI")).tag == MeasureTag::IV);
  }
  SECTION("(2,2) case III") {
    CncTableau t = CncTableau::from_descriptor(canonical_cnc(2, 2));
    MeasurementCase c = t.case_of(pp("ZX"));
    REQUIRE(c.tag == MeasureTag::III);
    REQUIRE(c.anti_rows.size() == 2);  // t = 1
    CHECK(t.row(c.anti_rows[0]).point == pp("XI"));
    CHECK(t.row(c.anti_rows[1]).point == pp("YX"));
  }
  SECTION("m=0 reaches only I and IV") {
    SplitRng rng(107);
    CncTableau t = random_tableau(3, rng, 0);
    for (size_t code = 0; code < 64; ++code) {
      PauliPoint b(3);
      for (uint32_t c = 0; c < 6; ++c) b.set_bit(c, (code >> c) & 1);
      auto tag = t.case_of(b).tag;
      CHECK((tag == MeasureTag::I || tag == MeasureTag::IV));
    }
  }
}

TEST_CASE("case_of agrees with brute-force membership") {
  SplitRng rng(109);
  for (uint32_t n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 25; ++trial) {
      CncTableau t = random_tableau(n, rng);
      CncDescriptor d = t.to_descriptor();
      auto omega = expand_omega(d).gamma;
      Echelon center = gaussian_elimination(d.center_basis, n);
      for (size_t code = 0; code < (size_t{1} << (2 * n)); ++code) {
        PauliPoint b(n);
        for (uint32_t c = 0; c < 2 * n; ++c) b.set_bit(c, (code >> c) & 1);
        bool in_center = center.contains(b);
        bool in_omega = omega.count(b) > 0;
        bool in_perp = true;
        for (const auto& e : d.center_basis)
          if (symplectic_form(e, b)) in_perp = false;
        MeasureTag tag = t.case_of(b).tag;
        if (in_center) {
          CHECK(tag == MeasureTag::I);
        } else if (in_omega) {
          CHECK(tag == MeasureTag::II);
        } else if (in_perp) {
          CHECK(tag == MeasureTag::III);
        } else {
          CHECK(tag == MeasureTag::IV);
        }
      }
    }
  }
}

TEST_CASE("case I measurement is deterministic and silent") {
  SplitRng rng(113);
  CncTableau t = CncTableau::from_descriptor(canonical_cnc(2, 1));
  CncTableau before = t;
  auto res = t.measure(pp("ZI"), 0, rng);
  CHECK(res.tag == MeasureTag::I);
  CHECK(res.deterministic);
  CHECK(res.outcome == 0);
  CHECK(t == before);

  // Measuring -Z_1 flips the reported outcome.
  auto res_neg = t.measure(pp("ZI"), 1, rng);
  CHECK(res_neg.outcome == 1);
  CHECK(t == before);
}

TEST_CASE("case IV repeated measurement is reproducible") {
  SplitRng rng(127);
  int seen_zero = 0, seen_one = 0;
  for (int trial = 0; trial < 40; ++trial) {
    CncTableau t = CncTableau::from_descriptor(canonical_cnc(1, 0));
    auto first = t.measure(pp("X"), 0, rng);
    CHECK(first.tag == MeasureTag::IV);
    t.check_invariants();
    (first.outcome ? seen_one : seen_zero)++;
    auto second = t.measure(pp("X"), 0, rng);
    CHECK(second.tag == MeasureTag::I);
    CHECK(second.outcome == first.outcome);
  }
  CHECK(seen_zero > 5);
  CHECK(seen_one > 5);
}

TEST_CASE("measurement determinism for fixed seed") {
  for (uint32_t n = 1; n <= 3; ++n) {
    SplitRng gen(131 + n);
    CncTableau base = random_tableau(n, gen);
    PauliPoint b = random_point(n, gen);
    CncTableau t1 = base, t2 = base;
    SplitRng r1(999), r2(999);
    auto a = t1.measure(b, 0, r1);
    auto c = t2.measure(b, 0, r2);
    CHECK(a.outcome == c.outcome);
    CHECK(t1 == t2);
  }
}

TEST_CASE("update rules match the dense oracle on all four cases") {
  SplitRng rng(137);
  std::set<MeasureTag> seen;
  for (uint32_t n = 1; n <= 3; ++n) {
    int trials = n == 3 ? 60 : 40;
    for (int trial = 0; trial < trials; ++trial) {
      CncTableau t = random_tableau(n, rng);
      CncDescriptor d = t.to_descriptor();
      PauliPoint b = random_point(n, rng);
      int r = rng.next_bit();
      seen.insert(t.case_of(b).tag);
      UpdateReport rep = verify_update(d, b, r);
      INFO("n=" << n << " tag=" << static_cast<int>(rep.tag) << " err=" << rep.max_err);
      CHECK(rep.max_err < 1e-12);
    }
  }
  CHECK(seen.size() == 4);
}

TEST_CASE("sampled branches appear among the formula terms") {
  SplitRng rng(139);
  int covered = 0;
  while (covered < 30) {
    uint32_t n = 2 + static_cast<uint32_t>(rng.next_below(2));
    CncTableau t = random_tableau(n, rng);
    PauliPoint b = random_point(n, rng);
    MeasurementCase c = t.case_of(b);
    if (c.tag == MeasureTag::I) continue;
    ++covered;
    // Enumerate all branch operators of the update formula.
    std::vector<DenseMatrix> terms;
    for (int r = 0; r < 2; ++r) {
      switch (c.tag) {
        case MeasureTag::II: {
          for (int coin = 0; coin < 2; ++coin) {
            CncTableau copy = t;
            MeasureOptions opts;
            opts.branch = coin;
            copy.measure(b, 0, rng, opts);
            terms.push_back(cnc_dense(copy));
          }
          break;
        }
        case MeasureTag::III: {
          size_t tt = c.anti_rows.size() / 2;
          for (size_t mask = 0; mask < (size_t{1} << (tt - 1)); ++mask) {
            CncTableau copy = t;
            MeasureOptions opts;
            opts.outcome = r;
            std::vector<int> svec(tt - 1);
            for (size_t i = 0; i + 1 < tt; ++i) svec[i] = (mask >> i) & 1;
            opts.svec = svec;
            copy.measure(b, 0, rng, opts);
            terms.push_back(cnc_dense(copy));
          }
          break;
        }
        case MeasureTag::IV: {
          CncTableau copy = t;
          MeasureOptions opts;
          opts.outcome = r;
          copy.measure(b, 0, rng, opts);
          terms.push_back(cnc_dense(copy));
          break;
        }
        default: break;
      }
      if (c.tag == MeasureTag::II) break;  // outcome is fixed, no second round
    }
    // Sample a few live branches; each must match some term.
    for (int s = 0; s < 4; ++s) {
      CncTableau copy = t;
      copy.measure(b, 0, rng);
      copy.check_invariants();
      DenseMatrix got = cnc_dense(copy);
      bool matched = false;
      for (const auto& term : terms)
        if (max_abs_diff(got, term) < 1e-12) matched = true;
      CHECK(matched);
    }
  }
}

TEST_CASE("outcome statistics") {
  SplitRng rng(149);
  SECTION("deterministic on Omega") {
    for (int trial = 0; trial < 20; ++trial) {
      CncTableau t = random_tableau(2, rng);
      CncDescriptor d = t.to_descriptor();
      auto omega = expand_omega(d).gamma;
      for (const auto& [p, g] : omega) {
        CncTableau copy = t;
        auto res = copy.measure(p, 0, rng);
        CHECK(res.deterministic);
        CHECK(res.outcome == g);
      }
    }
  }
  SECTION("uniform off Omega") {
    const int trials = 10000;
    CncTableau base = CncTableau::from_descriptor(canonical_cnc(2, 1));
    PauliPoint b = pp("XI");  // case IV for this tableau
    int ones = 0;
    for (int i = 0; i < trials; ++i) {
      CncTableau t = base;
      ones += t.measure(b, 0, rng).outcome;
    }
    double sigma = 0.5 * std::sqrt(static_cast<double>(trials));
    CHECK(std::abs(ones - trials / 2.0) < 4 * sigma);
  }
}

TEST_CASE("case III reduces the type by t") {
  SplitRng rng(151);
  int seen = 0;
  while (seen < 25) {
    uint32_t n = 3;
    CncTableau t = random_tableau(n, rng);
    PauliPoint b = random_point(n, rng);
    MeasurementCase c = t.case_of(b);
    uint32_t m_before = t.type_m();
    CncTableau copy = t;
    copy.measure(b, 0, rng);
    if (c.tag == MeasureTag::III) {
      ++seen;
      CHECK(copy.type_m() == m_before - c.anti_rows.size() / 2);
      copy.check_invariants();
    } else {
      CHECK(copy.type_m() == m_before);
    }
  }
}

TEST_CASE("compose stacks tableaus block-diagonally") {
  SECTION("appending |0> adds a trivially stabilized qubit") {
    CncTableau t1 = CncTableau::from_descriptor(canonical_cnc(2, 1));
    CncTableau zero = CncTableau::from_descriptor(canonical_cnc(1, 0));
    CncTableau out = CncTableau::compose(t1, zero);
    CHECK(out.num_qubits() == 3);
    CHECK(out.type_m() == 1);
    out.check_invariants();
    DenseMatrix z0(2, 2);
    z0 << 1, 0, 0, 0;
    CHECK(max_abs_diff(cnc_dense(out), kron(cnc_dense(t1), z0)) < 1e-13);
  }
  SECTION("compose(canonical(1,1), |0>) matches canonical-like (2,1)") {
    CncTableau got = CncTableau::compose(CncTableau::from_descriptor(canonical_cnc(1, 1)),
                                         CncTableau::from_descriptor(canonical_cnc(1, 0)));
    got.permute_qubits({1, 0});
    CncDescriptor want = canonical_cnc(2, 1);
    auto a = expand_omega(got.to_descriptor()).gamma;
    auto b = expand_omega(want).gamma;
    CHECK(a == b);
  }
  SECTION("dense factorization for random pairs") {
    SplitRng rng(157);
    for (int trial = 0; trial < 10; ++trial) {
      CncTableau a = random_tableau(2, rng);
      CncTableau b = random_tableau(1, rng, 0);
      CncTableau out = CncTableau::compose(a, b);
      out.check_invariants();
      CHECK(max_abs_diff(cnc_dense(out), kron(cnc_dense(a), cnc_dense(b))) < 1e-12);
    }
  }
  SECTION("m > 0 second factor rejected") {
    CncTableau a = CncTableau::from_descriptor(canonical_cnc(1, 0));
    CncTableau b = CncTableau::from_descriptor(canonical_cnc(1, 1));
    CHECK_THROWS_AS(CncTableau::compose(a, b), std::invalid_argument);
  }
}

TEST_CASE("permute_qubits preserves the represented operator") {
  SplitRng rng(163);
  CncTableau t = random_tableau(2, rng);
  DenseMatrix before = cnc_dense(t);
  t.permute_qubits({1, 0});
  t.check_invariants();
  DenseMatrix after = cnc_dense(t);
  DenseMatrix swap = DenseMatrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1;
  CHECK(max_abs_diff(after, swap * before * swap.adjoint()) < 1e-13);
}

TEST_CASE("dump and parse round trip") {
  SplitRng rng(167);
  for (uint32_t n = 1; n <= 3; ++n) {
    CncTableau t = random_tableau(n, rng);
    std::string text = t.dump();
    std::istringstream is(text);
    CncTableau back = CncTableau::parse(is);
    CHECK(back == t);
  }
  std::istringstream bad("2 3\n");
  CHECK_THROWS_AS(CncTableau::parse(bad), std::invalid_argument);
}
