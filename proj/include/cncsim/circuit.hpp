#pragma once

#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cncsim/pauli.hpp"
#include "cncsim/rng.hpp"
#include "cncsim/tableau.hpp"

namespace cncsim {

struct CliffordInstr {
  Gate gate;
  friend bool operator==(const CliffordInstr&, const CliffordInstr&) = default;
};

struct PauliMeasureInstr {
  PauliPoint op;
  int sign = 0;   // measure (-1)^sign T_op
  int label = 0;  // sequential measurement index
  friend bool operator==(const PauliMeasureInstr&, const PauliMeasureInstr&) = default;
};

struct ConditionalInstr {
  Gate gate;
  int label = 0;  // applies when measurement `label` returned `value`
  int value = 1;
  friend bool operator==(const ConditionalInstr&, const ConditionalInstr&) = default;
};

struct TGateInstr {
  uint32_t q = 0;
  bool dagger = false;  // macro; expanded into a gadget before simulation
  friend bool operator==(const TGateInstr&, const TGateInstr&) = default;
};

using Instruction =
    std::variant<CliffordInstr, PauliMeasureInstr, ConditionalInstr, TGateInstr>;

inline bool operator==(const Gate& a, const Gate& b) {
  return a.kind == b.kind && a.q0 == b.q0 && a.q1 == b.q1;
}

/// Ordered instruction list over num_qubits wires. Measurement labels are
/// assigned sequentially as instructions are appended.
struct Circuit {
  uint32_t num_qubits = 0;
  std::vector<Instruction> instructions;
  int num_measurements = 0;

  explicit Circuit(uint32_t n = 0) : num_qubits(n) {}

  void check_qubit(uint32_t q) const {
    if (q >= num_qubits) throw std::out_of_range("circuit: qubit index out of range");
  }

  void add_gate(const Gate& g) {
    check_qubit(g.q0);
    if (g.kind == GateKind::CX) {
      check_qubit(g.q1);
      if (g.q0 == g.q1) throw std::invalid_argument("circuit: CX control equals target");
    }
    instructions.push_back(CliffordInstr{g});
  }

  int add_measurement(const PauliPoint& op, int sign = 0) {
    if (op.num_qubits() != num_qubits)
      throw std::invalid_argument("circuit: measurement width mismatch");
    int label = num_measurements++;
    instructions.push_back(PauliMeasureInstr{op, sign & 1, label});
    return label;
  }

  void add_conditional(const Gate& g, int label, int value) {
    check_qubit(g.q0);
    if (g.kind == GateKind::CX) check_qubit(g.q1);
    if (label < 0 || label >= num_measurements)
      throw std::invalid_argument("circuit: conditional references an unknown measurement");
    instructions.push_back(ConditionalInstr{g, label, value & 1});
  }

  void add_t(uint32_t q, bool dagger = false) {
    check_qubit(q);
    instructions.push_back(TGateInstr{q, dagger});
  }

  size_t t_count() const {
    size_t c = 0;
    for (const auto& ins : instructions)
      if (std::holds_alternative<TGateInstr>(ins)) ++c;
    return c;
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

// ---------------------------------------------------------------------------
// Composite gate helpers (everything reduces to {H, S, CX} plus T macros)

inline void append_z(Circuit& c, uint32_t q) {
  c.add_gate(Gate::s(q));
  c.add_gate(Gate::s(q));
}

inline void append_x(Circuit& c, uint32_t q) {
  c.add_gate(Gate::h(q));
  append_z(c, q);
  c.add_gate(Gate::h(q));
}

inline void append_cz(Circuit& c, uint32_t a, uint32_t b) {
  c.add_gate(Gate::h(b));
  c.add_gate(Gate::cx(a, b));
  c.add_gate(Gate::h(b));
}

/// Exact CCZ over {CX, T, Tdg} with seven T-type gates.
inline std::vector<Instruction> ccz_decompose(uint32_t a, uint32_t b, uint32_t c) {
  if (a == b || a == c || b == c)
    throw std::invalid_argument("ccz_decompose: qubits must be distinct");
  std::vector<Instruction> out;
  auto cx = [&](uint32_t x, uint32_t y) { out.push_back(CliffordInstr{Gate::cx(x, y)}); };
  auto t = [&](uint32_t q, bool dg) { out.push_back(TGateInstr{q, dg}); };
  cx(b, c);
  t(c, true);
  cx(a, c);
  t(c, false);
  cx(b, c);
  t(c, true);
  cx(a, c);
  t(b, false);
  t(c, false);
  cx(a, b);
  t(a, false);
  t(b, true);
  cx(a, b);
  return out;
}

inline void append_ccz(Circuit& c, uint32_t a, uint32_t b, uint32_t q) {
  c.check_qubit(a);
  c.check_qubit(b);
  c.check_qubit(q);
  for (auto& ins : ccz_decompose(a, b, q)) c.instructions.push_back(std::move(ins));
}

inline void append_ccx(Circuit& c, uint32_t a, uint32_t b, uint32_t target) {
  c.add_gate(Gate::h(target));
  append_ccz(c, a, b, target);
  c.add_gate(Gate::h(target));
}

// ---------------------------------------------------------------------------
// T gadget expansion

/// Replaces each T macro with the injection gadget: CX into a fresh magic
/// ancilla, a Z measurement there, and an S correction on the data qubit when
/// the outcome is 1. Tdg adds an unconditional S^3 after the gadget. Ancillas
/// are appended after the data qubits in T-gate order and are expected to be
/// prepared in the |T> state.
inline Circuit expand_gadgets(const Circuit& in) {
  uint32_t extra = static_cast<uint32_t>(in.t_count());
  Circuit out(in.num_qubits + extra);
  uint32_t next_ancilla = in.num_qubits;
  std::vector<int> label_map(in.num_measurements, -1);
  auto widen = [&](const PauliPoint& p) {
    PauliPoint w(out.num_qubits);
    for (uint32_t q = 0; q < in.num_qubits; ++q) {
      w.set_x(q, p.x_bit(q));
      w.set_z(q, p.z_bit(q));
    }
    return w;
  };
  for (const auto& ins : in.instructions) {
    if (const auto* g = std::get_if<CliffordInstr>(&ins)) {
      out.add_gate(g->gate);
    } else if (const auto* m = std::get_if<PauliMeasureInstr>(&ins)) {
      label_map[m->label] = out.add_measurement(widen(m->op), m->sign);
    } else if (const auto* cond = std::get_if<ConditionalInstr>(&ins)) {
      if (label_map[cond->label] < 0)
        throw std::invalid_argument("expand_gadgets: conditional precedes its measurement");
      out.add_conditional(cond->gate, label_map[cond->label], cond->value);
    } else {
      const auto& t = std::get<TGateInstr>(ins);
      uint32_t anc = next_ancilla++;
      out.add_gate(Gate::cx(t.q, anc));
      int label = out.add_measurement(PauliPoint::z(out.num_qubits, anc), 0);
      out.add_conditional(Gate::s(t.q), label, 1);
      if (t.dagger)
        for (int k = 0; k < 3; ++k) out.add_gate(Gate::s(t.q));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Benchmark circuit families

/// Hidden shift instance: n = 2*nu qubits, oracles built from kappa CCZ
/// blocks each (c = 2*kappa total), a CZ ladder pairing the two registers,
/// and the shift string folded in as Z gates. The ideal output is |x>.
inline Circuit build_hidden_shift(uint32_t kappa, uint32_t nu, const std::vector<int>& x) {
  if (kappa < 1 || nu < 3 * kappa)
    throw std::invalid_argument("build_hidden_shift: need nu >= 3*kappa >= 3");
  uint32_t n = 2 * nu;
  uint32_t c = 2 * kappa;
  if (x.size() != n) throw std::invalid_argument("build_hidden_shift: shift length must be 2*nu");
  if (3 + (kappa - 1) * c > nu)
    throw std::invalid_argument("build_hidden_shift: CCZ blocks exceed the register");
  Circuit circ(n);
  auto h_layer = [&] {
    for (uint32_t q = 0; q < n; ++q) circ.add_gate(Gate::h(q));
  };
  auto o_g = [&](uint32_t offset) {
    for (uint32_t j = 0; j < kappa; ++j) {
      uint32_t base = offset + j * c;  // 1-based block indices k + j*c
      append_ccz(circ, base, base + 1, base + 2);
    }
  };
  auto cz_ladder = [&] {
    for (uint32_t i = 0; i < nu; ++i) append_cz(circ, i, i + nu);
  };
  h_layer();
  o_g(0);  // O_f = (prod CZ)(O_g x I)
  cz_ladder();
  h_layer();
  for (uint32_t q = 0; q < n; ++q)  // O_f' = (prod CZ)(I x O_g) Z(x)
    if (x[q]) append_z(circ, q);
  o_g(nu);
  cz_ladder();
  h_layer();
  for (uint32_t q = 0; q < n; ++q) circ.add_measurement(PauliPoint::z(n, q));
  return circ;
}

/// Deutsch-Jozsa instance on n data qubits plus one target: the balanced
/// oracle uses c CCX blocks plus a CX tail, the constant oracle is empty.
/// The ideal probability of reading 0^n is 1 (constant) or 0 (balanced).
inline Circuit build_deutsch_jozsa(uint32_t c, uint32_t n, bool balanced) {
  if (balanced && (c < 1 || n < 3 * c))
    throw std::invalid_argument("build_deutsch_jozsa: need n >= 3*c >= 3");
  Circuit circ(n + 1);
  uint32_t target = n;
  append_x(circ, target);
  for (uint32_t q = 0; q <= n; ++q) circ.add_gate(Gate::h(q));
  if (balanced) {
    for (uint32_t j = 0; j < c; ++j) {
      uint32_t base = j * c;  // 1-based block indices k + j*c
      if (base + 2 >= n)
        throw std::invalid_argument("build_deutsch_jozsa: CCX block exceeds the register");
      append_ccx(circ, base, base + 1, base + 2);
      circ.add_gate(Gate::cx(base + 2, target));
    }
    for (uint32_t k = 3 * c; k < n; ++k) circ.add_gate(Gate::cx(k, target));
  }
  for (uint32_t q = 0; q < n; ++q) circ.add_gate(Gate::h(q));
  for (uint32_t q = 0; q < n; ++q) circ.add_measurement(PauliPoint::z(n + 1, q));
  return circ;
}

struct RandomExperiment {
  Circuit circuit;
  uint32_t initial_m = 0;
};

/// floor(beta * n * log2 n) uniform Clifford gates followed by a sequential
/// computational-basis measurement of every qubit; the initial state is the
/// canonical CNC pair of type (n, m).
inline RandomExperiment random_clifford_experiment(uint32_t n, uint32_t m, double beta,
                                                   uint64_t seed) {
  if (m > n) throw std::invalid_argument("random_clifford_experiment: need m <= n");
  if (n < 2) throw std::invalid_argument("random_clifford_experiment: need n >= 2");
  RandomExperiment ex{Circuit(n), m};
  SplitRng rng(seed, 0x52414e44u);
  size_t gates = static_cast<size_t>(beta * n * std::log2(static_cast<double>(n)));
  for (size_t i = 0; i < gates; ++i) {
    switch (rng.next_below(3)) {
      case 0: ex.circuit.add_gate(Gate::h(static_cast<uint32_t>(rng.next_below(n)))); break;
      case 1: ex.circuit.add_gate(Gate::s(static_cast<uint32_t>(rng.next_below(n)))); break;
      default: {
        uint32_t a = static_cast<uint32_t>(rng.next_below(n));
        uint32_t b = static_cast<uint32_t>(rng.next_below(n - 1));
        if (b >= a) ++b;
        ex.circuit.add_gate(Gate::cx(a, b));
      }
    }
  }
  for (uint32_t q = 0; q < n; ++q) ex.circuit.add_measurement(PauliPoint::z(n, q));
  return ex;
}

// ---------------------------------------------------------------------------
// Text format: one instruction per line, qubits 1-based.
//   H q | S q | CX c t | T q | TDG q | MEAS <pauli-string> [-]
//   CIF <label> <value> <gate...>   # labels count measurements from 0

inline std::string circuit_to_text(const Circuit& c) {
  std::ostringstream os;
  os << "# qubits " << c.num_qubits << '\n';
  auto gate_text = [](const Gate& g) {
    std::ostringstream gs;
    switch (g.kind) {
      case GateKind::H: gs << "H " << g.q0 + 1; break;
      case GateKind::S: gs << "S " << g.q0 + 1; break;
      case GateKind::CX: gs << "CX " << g.q0 + 1 << ' ' << g.q1 + 1; break;
    }
    return gs.str();
  };
  for (const auto& ins : c.instructions) {
    if (const auto* g = std::get_if<CliffordInstr>(&ins)) {
      os << gate_text(g->gate) << '\n';
    } else if (const auto* m = std::get_if<PauliMeasureInstr>(&ins)) {
      os << "MEAS " << to_pauli_string(m->op);
      if (m->sign) os << " -";
      os << '\n';
    } else if (const auto* cond = std::get_if<ConditionalInstr>(&ins)) {
      os << "CIF " << cond->label << ' ' << cond->value << ' ' << gate_text(cond->gate)
         << '\n';
    } else {
      const auto& t = std::get<TGateInstr>(ins);
      os << (t.dagger ? "TDG " : "T ") << t.q + 1 << '\n';
    }
  }
  return os.str();
}

namespace detail {

inline Gate parse_gate_tokens(const std::string& kind, std::istringstream& is,
                              uint32_t num_qubits) {
  auto qubit = [&]() -> uint32_t {
    long long q;
    if (!(is >> q) || q < 1 || q > static_cast<long long>(num_qubits))
      throw std::invalid_argument("circuit: bad qubit index");
    return static_cast<uint32_t>(q - 1);
  };
  if (kind == "H") return Gate::h(qubit());
  if (kind == "S") return Gate::s(qubit());
  if (kind == "CX") {
    uint32_t c = qubit(), t = qubit();
    return Gate::cx(c, t);
  }
  throw std::invalid_argument("circuit: unknown gate '" + kind + "'");
}

}  // namespace detail

inline Circuit circuit_from_text(std::istream& in, uint32_t num_qubits) {
  Circuit c(num_qubits);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string op;
    if (!(is >> op)) continue;
    if (op == "H" || op == "S" || op == "CX") {
      c.add_gate(detail::parse_gate_tokens(op, is, num_qubits));
    } else if (op == "T" || op == "TDG") {
      long long q;
      if (!(is >> q) || q < 1 || q > num_qubits)
        throw std::invalid_argument("circuit: bad qubit index");
      c.add_t(static_cast<uint32_t>(q - 1), op == "TDG");
    } else if (op == "MEAS") {
      std::string pauli, sign;
      if (!(is >> pauli)) throw std::invalid_argument("circuit: MEAS needs an operator");
      int s = 0;
      if (is >> sign) {
        if (sign != "-") throw std::invalid_argument("circuit: bad MEAS sign");
        s = 1;
      }
      auto parsed = parse_pauli_string(pauli);
      if (parsed.point.num_qubits() != num_qubits)
        throw std::invalid_argument("circuit: MEAS operator width mismatch");
      c.add_measurement(parsed.point, s ^ parsed.sign);
    } else if (op == "CIF") {
      int label, value;
      std::string kind;
      if (!(is >> label >> value >> kind))
        throw std::invalid_argument("circuit: bad CIF header");
      Gate g = detail::parse_gate_tokens(kind, is, num_qubits);
      c.add_conditional(g, label, value);
    } else {
      throw std::invalid_argument("circuit: unknown instruction '" + op + "'");
    }
  }
  return c;
}

}  // namespace cncsim
