#include <catch2/catch_amalgamated.hpp>

#include "cncsim/circuit.hpp"
#include "cncsim/dense.hpp"

using namespace cncsim;

namespace {

void sv_apply_gate(DenseVector& psi, uint32_t n, const Gate& g) {
  switch (g.kind) {
    case GateKind::H: sv_apply_h(psi, n, g.q0); break;
    case GateKind::S: sv_apply_s(psi, n, g.q0); break;
    case GateKind::CX: sv_apply_cx(psi, n, g.q0, g.q1); break;
  }
}

/// Unitary prefix of a circuit (stops at the first measurement), with T
/// macros applied as exact phase gates.
DenseVector simulate_prefix(const Circuit& c, DenseVector psi) {
  for (const auto& ins : c.instructions) {
    if (const auto* g = std::get_if<CliffordInstr>(&ins)) {
      sv_apply_gate(psi, c.num_qubits, g->gate);
    } else if (const auto* t = std::get_if<TGateInstr>(&ins)) {
      sv_apply_t(psi, c.num_qubits, t->q, t->dagger);
    } else {
      break;
    }
  }
  return psi;
}

struct Branch {
  DenseVector state;
  std::vector<int> outcomes;
  double prob = 1.0;
};

/// Follows every measurement branch of a circuit exactly.
std::vector<Branch> simulate_branches(const Circuit& c, const DenseVector& psi0) {
  std::vector<Branch> live{{psi0, {}, 1.0}};
  for (const auto& ins : c.instructions) {
    std::vector<Branch> next;
    for (auto& br : live) {
      if (const auto* g = std::get_if<CliffordInstr>(&ins)) {
        sv_apply_gate(br.state, c.num_qubits, g->gate);
        next.push_back(std::move(br));
      } else if (const auto* t = std::get_if<TGateInstr>(&ins)) {
        sv_apply_t(br.state, c.num_qubits, t->q, t->dagger);
        next.push_back(std::move(br));
      } else if (const auto* cond = std::get_if<ConditionalInstr>(&ins)) {
        if (br.outcomes[cond->label] == cond->value)
          sv_apply_gate(br.state, c.num_qubits, cond->gate);
        next.push_back(std::move(br));
      } else {
        const auto& m = std::get<PauliMeasureInstr>(ins);
        for (int r = 0; r < 2; ++r) {
          DenseVector proj = projector(m.op, r ^ m.sign) * br.state;
          double p = proj.squaredNorm();
          if (p < 1e-12) continue;
          Branch nb;
          nb.state = proj / std::sqrt(p);
          nb.outcomes = br.outcomes;
          nb.outcomes.push_back(r);
          nb.prob = br.prob * p;
          next.push_back(std::move(nb));
        }
      }
    }
    live = std::move(next);
  }
  return live;
}

DenseVector basis_state(uint32_t n, size_t idx) {
  DenseVector psi = DenseVector::Zero(size_t{1} << n);
  psi(idx) = 1;
  return psi;
}

DenseVector t_magic_state() {
  DenseVector t(2);
  t(0) = 1.0 / std::sqrt(2.0);
  t(1) = std::polar(1.0 / std::sqrt(2.0), 3.14159265358979323846 / 4);
  return t;
}

DenseVector kron_vec(const DenseVector& a, const DenseVector& b) {
  DenseVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
  return out;
}

}  // namespace

TEST_CASE("ccz_decompose is exact with seven T gates") {
  Circuit c(3);
  append_ccz(c, 0, 1, 2);
  CHECK(c.t_count() == 7);

  DenseMatrix u = DenseMatrix::Zero(8, 8);
  for (size_t col = 0; col < 8; ++col) u.col(col) = simulate_prefix(c, basis_state(3, col));
  DenseMatrix ccz = DenseMatrix::Identity(8, 8);
  ccz(7, 7) = -1;
  CHECK(max_abs_diff(u, ccz) < 1e-12);

  CHECK_THROWS_AS(ccz_decompose(0, 0, 1), std::invalid_argument);
}

TEST_CASE("ccx equals H-conjugated ccz") {
  Circuit c(3);
  append_ccx(c, 0, 1, 2);
  DenseMatrix u = DenseMatrix::Zero(8, 8);
  for (size_t col = 0; col < 8; ++col) u.col(col) = simulate_prefix(c, basis_state(3, col));
  DenseMatrix ccx = DenseMatrix::Identity(8, 8);
  ccx(6, 6) = ccx(7, 7) = 0;
  ccx(6, 7) = ccx(7, 6) = 1;
  CHECK(max_abs_diff(u, ccx) < 1e-12);
}

TEST_CASE("expand_gadgets structure") {
  SECTION("no T gates leaves the circuit alone") {
    Circuit c(2);
    c.add_gate(Gate::h(0));
    c.add_measurement(PauliPoint::z(2, 0));
    Circuit e = expand_gadgets(c);
    CHECK(e == c);
  }
  SECTION("each T adds one ancilla and one measurement") {
    Circuit c(2);
    c.add_t(0);
    c.add_t(1, true);
    c.add_measurement(PauliPoint::z(2, 0));
    Circuit e = expand_gadgets(c);
    CHECK(e.num_qubits == 4);
    CHECK(e.num_measurements == 3);
    CHECK(e.t_count() == 0);
  }
  SECTION("conditionals are relabeled across inserted gadget measurements") {
    Circuit c(2);
    int l = c.add_measurement(PauliPoint::z(2, 1));
    c.add_t(0);
    c.add_conditional(Gate::s(1), l, 1);
    Circuit e = expand_gadgets(c);
    // The original measurement keeps label 0, the gadget takes label 1; the
    // original conditional must still reference label 0.
    bool found = false;
    for (const auto& ins : e.instructions)
      if (const auto* cond = std::get_if<ConditionalInstr>(&ins))
        if (cond->gate.kind == GateKind::S && cond->gate.q0 == 1) {
          CHECK(cond->label == 0);
          found = true;
        }
    CHECK(found);
  }
}

TEST_CASE("T gadget implements T on both branches") {
  Circuit c(1);
  c.add_gate(Gate::h(0));  // |+>
  c.add_t(0);
  Circuit e = expand_gadgets(c);
  REQUIRE(e.num_qubits == 2);

  DenseVector init = kron_vec(basis_state(1, 0), t_magic_state());
  auto branches = simulate_branches(e, init);
  REQUIRE(branches.size() == 2);
  DenseVector target = t_magic_state();  // T|+> = |T>
  double total_prob = 0;
  for (const auto& br : branches) {
    total_prob += br.prob;
    CHECK(std::abs(br.prob - 0.5) < 1e-12);
    // Ancilla is collapsed to the observed outcome; slice out the data qubit.
    int r = br.outcomes.at(0);
    DenseVector data(2);
    data(0) = br.state(0 + r);
    data(1) = br.state(2 + r);
    double fidelity = std::norm((target.adjoint() * data)(0, 0));
    CHECK(fidelity == Catch::Approx(1.0).epsilon(1e-10));
  }
  CHECK(total_prob == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("expand_gadgets preserves the ideal channel for two T gates") {
  Circuit c(2);
  c.add_gate(Gate::h(0));
  c.add_t(0);
  c.add_gate(Gate::cx(0, 1));
  c.add_t(1, true);
  c.add_gate(Gate::h(1));

  DenseVector ideal = simulate_prefix(c, basis_state(2, 0));

  Circuit e = expand_gadgets(c);
  REQUIRE(e.num_qubits == 4);
  DenseVector init = kron_vec(kron_vec(basis_state(2, 0), t_magic_state()), t_magic_state());
  auto branches = simulate_branches(e, init);
  double total = 0;
  for (const auto& br : branches) {
    total += br.prob;
    // Data register state: ancillas are collapsed to their outcome bits.
    size_t anc = (static_cast<size_t>(br.outcomes[0]) << 1) | br.outcomes[1];
    DenseVector data(4);
    for (size_t d = 0; d < 4; ++d) data(d) = br.state(d * 4 + anc);
    double fidelity = std::norm((ideal.adjoint() * data)(0, 0));
    CHECK(fidelity == Catch::Approx(1.0).epsilon(1e-10));
  }
  CHECK(total == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hidden shift circuit") {
  SECTION("shape and T count for kappa=1, nu=3") {
    std::vector<int> x(6, 1);
    Circuit c = build_hidden_shift(1, 3, x);
    CHECK(c.num_qubits == 6);
    CHECK(c.t_count() == 14);  // two CCZ blocks
    CHECK(c.num_measurements == 6);
  }
  SECTION("ideal output equals the shift string") {
    SplitRng rng(71);
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<int> x(6);
      size_t idx = 0;
      for (size_t q = 0; q < 6; ++q) {
        x[q] = rng.next_bit();
        idx = (idx << 1) | x[q];
      }
      Circuit c = build_hidden_shift(1, 3, x);
      DenseVector out = simulate_prefix(c, basis_state(6, 0));
      CHECK(std::abs(out(idx)) == Catch::Approx(1.0).epsilon(1e-10));
    }
  }
  SECTION("x = 0 returns the all-zeros state") {
    Circuit c = build_hidden_shift(1, 3, std::vector<int>(6, 0));
    DenseVector out = simulate_prefix(c, basis_state(6, 0));
    CHECK(std::abs(out(0)) == Catch::Approx(1.0).epsilon(1e-10));
  }
  SECTION("constraint violations") {
    CHECK_THROWS_AS(build_hidden_shift(1, 2, std::vector<int>(4, 0)), std::invalid_argument);
    CHECK_THROWS_AS(build_hidden_shift(1, 3, std::vector<int>(5, 0)), std::invalid_argument);
  }
}

TEST_CASE("deutsch-jozsa circuit") {
  SECTION("constant oracle gives p(0^n) = 1") {
    Circuit c = build_deutsch_jozsa(1, 3, false);
    DenseVector out = simulate_prefix(c, basis_state(4, 0));
    double p0 = std::norm(out(0)) + std::norm(out(1));  // target qubit left free
    CHECK(p0 == Catch::Approx(1.0).epsilon(1e-10));
  }
  SECTION("balanced oracle gives p(0^n) = 0") {
    Circuit c = build_deutsch_jozsa(1, 3, true);
    DenseVector out = simulate_prefix(c, basis_state(4, 0));
    double p0 = std::norm(out(0)) + std::norm(out(1));
    CHECK(p0 == Catch::Approx(0.0).margin(1e-10));
  }
  SECTION("n=4 balanced instance uses 7 T gates and a CX tail") {
    Circuit c = build_deutsch_jozsa(1, 4, true);
    CHECK(c.num_qubits == 5);
    CHECK(c.t_count() == 7);
    CHECK(c.num_measurements == 4);
  }
  SECTION("constraint violations") {
    CHECK_THROWS_AS(build_deutsch_jozsa(2, 5, true), std::invalid_argument);
  }
}

TEST_CASE("random clifford experiments are reproducible") {
  auto a = random_clifford_experiment(8, 4, 1.0, 77);
  auto b = random_clifford_experiment(8, 4, 1.0, 77);
  CHECK(a.circuit == b.circuit);
  CHECK(a.initial_m == 4);

  auto c = random_clifford_experiment(8, 4, 1.0, 78);
  CHECK(!(a.circuit == c.circuit));

  size_t expect_gates = static_cast<size_t>(1.0 * 8 * std::log2(8.0));
  size_t gate_count = 0;
  for (const auto& ins : a.circuit.instructions)
    if (std::holds_alternative<CliffordInstr>(ins)) ++gate_count;
  CHECK(gate_count == expect_gates);
  CHECK(a.circuit.num_measurements == 8);
}

TEST_CASE("circuit text round trip") {
  Circuit c(3);
  c.add_gate(Gate::h(0));
  c.add_gate(Gate::cx(0, 2));
  c.add_t(1);
  c.add_t(2, true);
  int l = c.add_measurement(parse_pauli_string("ZII").point, 1);
  c.add_conditional(Gate::s(0), l, 1);
  c.add_measurement(parse_pauli_string("XZY").point, 0);

  std::string text = circuit_to_text(c);
  std::istringstream is(text);
  Circuit back = circuit_from_text(is, 3);
  CHECK(back == c);

  std::istringstream bad("FOO 1\n");
  CHECK_THROWS_AS(circuit_from_text(bad, 2), std::invalid_argument);
  std::istringstream bad2("H 5\n");
  CHECK_THROWS_AS(circuit_from_text(bad2, 2), std::invalid_argument);
}
