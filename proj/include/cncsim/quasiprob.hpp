#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <thread>

#include "cncsim/circuit.hpp"
#include "cncsim/dense.hpp"

namespace cncsim {

// ---------------------------------------------------------------------------
// Quasi-probability decompositions over maximal CNC descriptors

struct QuasiTerm {
  double weight = 0;
  CncDescriptor desc;
};

struct QuasiDecomposition {
  std::string target_label;  // e.g. "T^2"
  uint32_t n = 0;            // qubits per term
  std::vector<QuasiTerm> terms;
  double one_norm = 0;

  bool all_nonnegative() const {
    for (const auto& t : terms)
      if (t.weight < 0) return false;
    return true;
  }
};

/// Density matrix named by a target label; "T^k" is the k-fold tensor power
/// of the T magic state.
inline DenseMatrix target_density(const std::string& label) {
  if (label.rfind("T^", 0) != 0)
    throw std::invalid_argument("target_density: unknown label '" + label + "'");
  int k = std::stoi(label.substr(2));
  if (k < 1 || k > static_cast<int>(kDenseMaxQubits))
    throw std::invalid_argument("target_density: unsupported power");
  DenseVector t(2);
  t(0) = 1.0 / std::sqrt(2.0);
  t(1) = std::polar(1.0 / std::sqrt(2.0), 3.14159265358979323846 / 4);
  DenseMatrix rho1 = t * t.adjoint();
  DenseMatrix rho = rho1;
  for (int i = 1; i < k; ++i) rho = kron(rho, rho1);
  return rho;
}

// File format: header `target=<label> n=<k> terms=<count>`, then one
// `weight=<decimal> desc=` line per term followed by the descriptor block
// ("n m" and its rows). '#' starts a comment.

inline std::string decomposition_to_text(const QuasiDecomposition& d) {
  std::ostringstream os;
  os << "target=" << d.target_label << " n=" << d.n << " terms=" << d.terms.size() << '\n';
  os << std::setprecision(17);
  for (const auto& t : d.terms) {
    os << "weight=" << t.weight << " desc=\n";
    os << descriptor_to_text(t.desc);
  }
  return os.str();
}

inline QuasiDecomposition parse_decomposition(std::istream& raw) {
  std::stringstream in;
  std::string line;
  while (std::getline(raw, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    in << line << '\n';
  }
  QuasiDecomposition d;
  size_t term_count = 0;
  std::string tok;
  auto expect_kv = [&](const std::string& key) -> std::string {
    if (!(in >> tok) || tok.rfind(key + "=", 0) != 0)
      throw std::invalid_argument("decomposition: expected '" + key + "=...', got '" + tok +
                                  "'");
    return tok.substr(key.size() + 1);
  };
  d.target_label = expect_kv("target");
  d.n = static_cast<uint32_t>(std::stoul(expect_kv("n")));
  term_count = std::stoul(expect_kv("terms"));
  for (size_t i = 0; i < term_count; ++i) {
    QuasiTerm t;
    t.weight = std::stod(expect_kv("weight"));
    if (!(in >> tok) || tok != "desc=")
      throw std::invalid_argument("decomposition: expected 'desc=' after weight");
    t.desc = descriptor_from_text(in);
    d.terms.push_back(std::move(t));
  }
  for (const auto& t : d.terms) d.one_norm += std::abs(t.weight);
  return d;
}

/// Parses and verifies a decomposition: weights sum to one, every descriptor
/// is a valid maximal CNC pair of the advertised width, and (for T^k targets
/// with k <= 4) the dense reconstruction residual stays below 1e-9.
inline QuasiDecomposition load_and_verify(std::istream& in) {
  QuasiDecomposition d = parse_decomposition(in);
  double sum = 0;
  for (const auto& t : d.terms) sum += t.weight;
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("decomposition: weights sum to " + std::to_string(sum) +
                                ", expected 1");
  for (const auto& t : d.terms) {
    if (t.desc.n != d.n)
      throw std::invalid_argument("decomposition: descriptor width mismatch");
    auto rep = validate(t.desc);
    if (!rep.ok)
      throw std::invalid_argument("decomposition: invalid descriptor: " +
                                  rep.problems.front());
    if (!t.desc.is_maximal())
      throw std::invalid_argument("decomposition: descriptors must be maximal");
  }
  if (d.n <= 4) {
    DenseMatrix target = target_density(d.target_label);
    DenseMatrix recon = DenseMatrix::Zero(target.rows(), target.cols());
    for (const auto& t : d.terms) recon += t.weight * cnc_dense(t.desc);
    double residual = max_abs_diff(recon, target);
    if (residual > 1e-9)
      throw std::invalid_argument("decomposition: reconstruction residual " +
                                  std::to_string(residual) + " exceeds 1e-9");
  }
  return d;
}

inline QuasiDecomposition load_and_verify(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("load_and_verify: cannot open " + path);
  return load_and_verify(f);
}

/// Hoeffding sample count ceil((2/eps^2) |W|_1^2 ln(2/delta)).
inline uint64_t hoeffding_samples(double eps, double delta, double one_norm) {
  if (!(eps > 0.0 && eps <= 1.0) || !(delta > 0.0 && delta < 1.0) || !(one_norm >= 1.0))
    throw std::invalid_argument("hoeffding_samples: need eps in (0,1], delta in (0,1), |W| >= 1");
  return static_cast<uint64_t>(
      std::ceil((2.0 / (eps * eps)) * one_norm * one_norm * std::log(2.0 / delta)));
}

// ---------------------------------------------------------------------------
// Chunked input sampler: |0^n> on the data qubits tensored with one sampled
// term per magic-state chunk. At most the first chunk may carry CNC (m > 0)
// terms; the rest must be stabilizer decompositions so that the product is
// itself a CNC tableau.

struct SampledInput {
  CncTableau tableau;
  int sign = 1;
};

class InputSampler {
public:
  InputSampler(uint32_t data_qubits, uint32_t magic_qubits,
               std::vector<QuasiDecomposition> chunks)
      : data_qubits_(data_qubits), magic_qubits_(magic_qubits), chunks_(std::move(chunks)) {
    uint32_t covered = 0;
    for (size_t c = 0; c < chunks_.size(); ++c) {
      const auto& chunk = chunks_[c];
      if (chunk.terms.empty()) throw std::invalid_argument("InputSampler: empty chunk");
      covered += chunk.n;
      bool has_cnc = false;
      for (const auto& t : chunk.terms)
        if (t.desc.m() > 0) has_cnc = true;
      if (has_cnc && c > 0)
        throw std::invalid_argument(
            "InputSampler: only the first chunk may contain CNC terms");
      one_norm_ *= chunk.one_norm;
      nonnegative_ = nonnegative_ && chunk.all_nonnegative();
      ChunkTables tabs;
      double cum = 0;
      for (const auto& t : chunk.terms) {
        tabs.tableaus.push_back(CncTableau::from_descriptor(t.desc));
        tabs.signs.push_back(t.weight < 0 ? -1 : 1);
        cum += std::abs(t.weight) / chunk.one_norm;
        tabs.cumulative.push_back(cum);
      }
      tabs.cumulative.back() = 1.0;  // guard against rounding
      tables_.push_back(std::move(tabs));
    }
    if (covered != magic_qubits_)
      throw std::invalid_argument("InputSampler: chunk sizes must sum to the magic count");
    zero_state_ = std::make_unique<CncTableau>(
        CncTableau::from_descriptor(canonical_cnc(data_qubits_, 0)));
  }

  double one_norm() const { return one_norm_; }
  bool nonnegative() const { return nonnegative_; }
  uint32_t total_qubits() const { return data_qubits_ + magic_qubits_; }

  /// Draws one product tableau laid out as [data qubits][magic ancillas].
  SampledInput sample(SplitRng& rng) const {
    int sign = 1;
    std::optional<CncTableau> acc;
    for (const auto& chunk : tables_) {
      double u = rng.next_unit();
      size_t pick = 0;
      while (pick + 1 < chunk.cumulative.size() && u >= chunk.cumulative[pick]) ++pick;
      sign *= chunk.signs[pick];
      if (!acc)
        acc = chunk.tableaus[pick];
      else
        acc = CncTableau::compose(*acc, chunk.tableaus[pick]);
    }
    CncTableau full = acc ? CncTableau::compose(*acc, *zero_state_) : *zero_state_;
    if (acc) {
      // Composed as [ancillas][data]; rotate the data block to the front.
      std::vector<uint32_t> perm(full.num_qubits());
      for (uint32_t q = 0; q < magic_qubits_; ++q) perm[q] = data_qubits_ + q;
      for (uint32_t q = 0; q < data_qubits_; ++q) perm[magic_qubits_ + q] = q;
      full.permute_qubits(perm);
    }
    return {std::move(full), sign};
  }

private:
  struct ChunkTables {
    std::vector<CncTableau> tableaus;
    std::vector<int> signs;
    std::vector<double> cumulative;
  };

  uint32_t data_qubits_;
  uint32_t magic_qubits_;
  std::vector<QuasiDecomposition> chunks_;
  std::vector<ChunkTables> tables_;
  std::unique_ptr<CncTableau> zero_state_;
  double one_norm_ = 1.0;
  bool nonnegative_ = true;
};

/// Sampler for an expanded circuit: data qubits in |0>, magic ancillas fed by
/// the chunk decompositions in order.
inline InputSampler build_input_sampler(uint32_t data_qubits, uint32_t magic_qubits,
                                        std::vector<QuasiDecomposition> chunks) {
  return InputSampler(data_qubits, magic_qubits, std::move(chunks));
}

// ---------------------------------------------------------------------------
// Circuit execution on a tableau

struct RunResult {
  std::vector<int> outcomes;
  double forced_weight = 1.0;  // product of 1/2 per forced random branch
  bool contradiction = false;  // a forced deterministic outcome disagreed
};

/// Runs a gadget-free circuit on a tableau. The last `forced_x.size()`
/// measurements are forced to the given bits: deterministic disagreements
/// zero out the trajectory, random cases contribute a factor 1/2 each.
inline RunResult run_circuit(CncTableau& t, const Circuit& c, SplitRng& rng,
                             std::span<const int> forced_x = {}) {
  if (c.t_count() != 0)
    throw std::invalid_argument("run_circuit: expand gadgets before simulating");
  if (t.num_qubits() != c.num_qubits)
    throw std::invalid_argument("run_circuit: tableau width mismatch");
  int first_forced = c.num_measurements - static_cast<int>(forced_x.size());
  if (first_forced < 0)
    throw std::invalid_argument("run_circuit: more forced bits than measurements");
  RunResult res;
  res.outcomes.assign(c.num_measurements, 0);
  for (const auto& ins : c.instructions) {
    if (const auto* g = std::get_if<CliffordInstr>(&ins)) {
      t.apply(g->gate);
    } else if (const auto* cond = std::get_if<ConditionalInstr>(&ins)) {
      if (res.outcomes[cond->label] == cond->value) t.apply(cond->gate);
    } else if (const auto* m = std::get_if<PauliMeasureInstr>(&ins)) {
      if (m->label >= first_forced) {
        int want = forced_x[m->label - first_forced] & 1;
        MeasureOptions opts;
        opts.outcome = want;
        auto r = t.measure(m->op, m->sign, rng, opts);
        if (r.deterministic) {
          if (r.outcome != want) {
            res.contradiction = true;
            res.forced_weight = 0.0;
            return res;
          }
        } else {
          res.forced_weight *= 0.5;
        }
        res.outcomes[m->label] = want;
      } else {
        res.outcomes[m->label] = t.measure(m->op, m->sign, rng).outcome;
      }
    } else {
      throw std::invalid_argument("run_circuit: unexpanded T gate");
    }
  }
  return res;
}

/// One weak-simulation trajectory: valid only when the input distribution is
/// a genuine probability distribution.
inline std::vector<int> weak_simulate(const InputSampler& sampler, const Circuit& circuit,
                                      SplitRng& rng) {
  if (!sampler.nonnegative())
    throw std::invalid_argument(
        "weak_simulate: distribution has negative weights; use estimate_born");
  SampledInput in = sampler.sample(rng);
  return run_circuit(in.tableau, circuit, rng).outcomes;
}

// ---------------------------------------------------------------------------
// Born-rule estimation

struct EstimationJob {
  Circuit circuit;             // gadget-free (already expanded)
  std::vector<int> outcome_x;  // target bits for the final measurements
  double epsilon = 0.1;
  double delta = 0.1;
  std::optional<uint64_t> samples;  // overrides the Hoeffding count
  uint64_t seed = 0;
  unsigned workers = 0;  // 0 = hardware concurrency
};

struct EstimationResult {
  double p_hat = 0;
  uint64_t samples = 0;
  double one_norm = 1;
  double seconds = 0;
};

namespace detail {

/// Neumaier compensated sum; order-independent given a fixed partition.
class CompensatedSum {
public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0;
  double comp_ = 0;
};

}  // namespace detail

/// Monte Carlo estimate of p(x): each sample draws a phase space point, runs
/// the circuit, forces the terminal computational-basis outcomes, and
/// contributes sign * |W|_1 * prod(1/2). Per-sample seeds derive from
/// (master seed, index), and the chunked compensated reduction makes the
/// result identical for any worker count.
inline EstimationResult estimate_born(const EstimationJob& job, const InputSampler& sampler) {
  if (job.outcome_x.size() > static_cast<size_t>(job.circuit.num_measurements))
    throw std::invalid_argument("estimate_born: more target bits than measurements");
  // The forced tail must be the computational-basis readout x_1..x_k.
  {
    int seen = 0;
    int first_forced = job.circuit.num_measurements - static_cast<int>(job.outcome_x.size());
    for (const auto& ins : job.circuit.instructions) {
      const auto* m = std::get_if<PauliMeasureInstr>(&ins);
      if (!m || m->label < first_forced) continue;
      uint32_t expect_q = static_cast<uint32_t>(m->label - first_forced);
      if (!(m->op == PauliPoint::z(job.circuit.num_qubits, expect_q)) || m->sign != 0)
        throw std::invalid_argument(
            "estimate_born: forced tail must measure Z on the first k qubits in order");
      ++seen;
    }
    if (seen != static_cast<int>(job.outcome_x.size()))
      throw std::invalid_argument("estimate_born: forced tail not found");
  }
  uint64_t m = job.samples ? *job.samples
                           : hoeffding_samples(job.epsilon, job.delta, sampler.one_norm());
  if (m == 0) throw std::invalid_argument("estimate_born: need a positive sample count");

  auto t0 = std::chrono::steady_clock::now();
  constexpr uint64_t kChunk = 4096;
  uint64_t num_chunks = (m + kChunk - 1) / kChunk;
  std::vector<double> chunk_sums(num_chunks, 0.0);

  unsigned workers = job.workers ? job.workers : std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  std::atomic<uint64_t> next_chunk{0};
  auto worker = [&] {
    for (;;) {
      uint64_t c = next_chunk.fetch_add(1);
      if (c >= num_chunks) return;
      uint64_t begin = c * kChunk, end = std::min(m, begin + kChunk);
      detail::CompensatedSum local;
      for (uint64_t i = begin; i < end; ++i) {
        SplitRng rng = SplitRng::for_index(job.seed, i);
        SampledInput in = sampler.sample(rng);
        RunResult run = run_circuit(in.tableau, job.circuit, rng, job.outcome_x);
        if (!run.contradiction) local.add(in.sign * run.forced_weight);
      }
      chunk_sums[c] = local.value();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  detail::CompensatedSum total;
  for (double s : chunk_sums) total.add(s);

  EstimationResult res;
  res.samples = m;
  res.one_norm = sampler.one_norm();
  res.p_hat = res.one_norm * total.value() / static_cast<double>(m);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace cncsim
