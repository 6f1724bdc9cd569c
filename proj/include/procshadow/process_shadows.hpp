#pragma once

// Process shadows: randomized acquisition against a Kraus channel, single-shot
// Choi shadows, Choi reconstruction and channel-functional estimation.
//
// One record is z = {b_in, U_in, U_out, b_out}. The input state prepared for a
// record is U_in^dag |b_in>, i.e. the same frame projector a state snapshot
// would select, so the record corresponds to
//   |z> = U_in^T |b_in> (x) U_out^dag |b_out>
// on the Choi registers (A = input copy, B = output copy). Shadows use the
// trace-one (normalized) Choi convention; functionals carry the 2^n factor.

#include "procshadow/ensembles.hpp"
#include "procshadow/qcore.hpp"
#include "procshadow/rng.hpp"

#include <cstdint>
#include <vector>

namespace procshadow {

struct ShadowRecord {
  BitString b_in;
  UnitarySpec u_in;
  UnitarySpec u_out;
  BitString b_out;
  Ensemble ensemble_in;
  Ensemble ensemble_out;
};

class ProcessShadow {
 public:
  ProcessShadow(int n_qubits, Ensemble ensemble_in, Ensemble ensemble_out, std::vector<ShadowRecord> records);

  int n_qubits() const { return n_qubits_; }
  Ensemble ensemble_in() const { return ensemble_in_; }
  Ensemble ensemble_out() const { return ensemble_out_; }
  const std::vector<ShadowRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  /// Records [begin, end) as a new shadow.
  ProcessShadow slice(std::size_t begin, std::size_t end) const;

 private:
  int n_qubits_;
  Ensemble ensemble_in_;
  Ensemble ensemble_out_;
  std::vector<ShadowRecord> records_;
};

/// Runs the randomized acquisition once: uniform b_in, frame U_in, channel,
/// frame U_out, computational-basis measurement.
ShadowRecord acquire_record(const Channel& ch, Ensemble ensemble_in, Ensemble ensemble_out, RngStream& rng);

/// m records drawn from per-block substreams (seed, stream, block).
ProcessShadow acquire_process_shadow(const Channel& ch, Ensemble ensemble_in, Ensemble ensemble_out,
                                     std::size_t m, std::uint64_t seed, std::uint64_t stream = 0);

/// Per-qubit Pauli labels of the A-register projector: the prepared
/// eigenstate with the bit flipped on Y axes (transposition conjugates Y).
BitString input_register_bits(const ShadowRecord& r);

/// A-register factor M_in^-1((U_in^dag|b_in><b_in|U_in)^T).
Matrix input_factor(const ShadowRecord& r);
/// Same factor computed from the dense frame matrix, without the Pauli fast path.
Matrix input_factor_dense(const ShadowRecord& r);
/// B-register factor M_out^-1(U_out^dag|b_out><b_out|U_out).
Matrix output_factor(const ShadowRecord& r);

/// Single-shot normalized Choi shadow on 2n qubits (trace one).
DenseOperator materialize_choi_shadow(const ShadowRecord& r);

/// Mean of the Choi shadows, as a normalized Choi matrix.
ChoiMatrix reconstruct_choi(const ProcessShadow& ps);

/// Single-shot values 2^n Tr[zeta_j (M^T (x) O)] for an arbitrary input-side
/// matrix M (a state, or rho A for correlators) and output operator O.
std::vector<Complex> functional_samples(const ProcessShadow& ps, const DenseOperator& input_side,
                                        const DenseOperator& output_side);

/// Median of means estimate of Tr[E(rho) O]; rho and O Hermitian.
double estimate_channel_functional(const ProcessShadow& ps, const DenseOperator& rho, const DenseOperator& o,
                                   int k);

struct BinIndependenceReport {
  /// max |Tr[eta (U_in^T|b><b|U_in^*) (x) I] - 1| over the sampled (U_in, b_in)
  double max_normalization_defect = 0.0;
  /// max |Tr[(P_A (x) I) eta]| over all nontrivial input-register Pauli strings
  double max_traceless_expectation = 0.0;
  int sampled_inputs = 0;
  int pauli_strings_checked = 0;
  bool normalization_ok = false;
  bool traceless_ok = false;
  bool passed() const { return normalization_ok && traceless_ok; }
};

/// Dense check that a uniform b_in is equivalent to measuring the input copy
/// of the Choi state: needs a trace-preserving channel.
BinIndependenceReport verify_bin_independence(const Channel& ch, int samples, RngStream& rng,
                                              Ensemble ensemble_in = Ensemble::Pauli);

}  // namespace procshadow
