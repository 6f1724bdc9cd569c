#pragma once

// Contractions between shadows in the Pauli/Pauli setting: a process shadow
// applied to a state shadow, and two process shadows composed into one. Both
// produce signed quasi-probability sums over record pairs.
//
// Prefactors are fixed so the exact expectation over frames and outcomes
// reproduces the target: applying gives E(rho) (trace one), composing gives
// the normalized Choi matrix of Y after X. Every pair carries
// 4^n prod_q pair_weight(...), i.e. 2^n for the contracted register times the
// factor 2 per qubit hidden in pair_weight's 1/2.

#include "procshadow/ensembles.hpp"
#include "procshadow/process_shadows.hpp"
#include "procshadow/rng.hpp"
#include "procshadow/state_shadows.hpp"

#include <memory>
#include <vector>

namespace procshadow {

/// 1/2 Tr[tau_{b,mu}^T tau_{b',mu'}].
double pair_weight(Axis mu, int b, Axis mu_p, int b_p);

struct PauliLabel {
  Axis axis;
  int bit;
};
using PauliLabels = std::vector<PauliLabel>;

PauliLabels snapshot_labels(const StateSnapshot& s);
/// Labels of the A-register factor (Y-flipped input bits).
PauliLabels record_input_labels(const ShadowRecord& r);
PauliLabels record_output_labels(const ShadowRecord& r);
/// prod_q pair_weight(a_q, b_q).
double pair_weight_product(const PauliLabels& a, const PauliLabels& b);

/// Lazy signed sum over all record pairs; nothing m*m'-sized is stored.
class WeightedSnapshotSum {
 public:
  enum class Kind { Apply, Compose };

  struct Term {
    double weight;
    Matrix factor;
  };

  static WeightedSnapshotSum apply(ProcessShadow ps, ShadowEstimate ss);
  static WeightedSnapshotSum compose(ProcessShadow x, ProcessShadow y);

  Kind kind() const { return kind_; }
  /// Qubits of the summed operator: n for Apply, 2n for Compose.
  int n_qubits() const;
  /// Number of pair terms, m * m'.
  std::size_t size() const;
  /// Term i, pairs enumerated with the second operand varying fastest.
  Term term(std::size_t i) const;

  /// (1/size) sum_i w_i F_i by the factorized fast path.
  Matrix materialize() const;
  /// Same sum by the explicit pair loop; for testing, O(m m').
  Matrix materialize_pairwise() const;
  /// (1/size) sum_i w_i; equals the trace of the materialized sum.
  double mean_weight() const;

 private:
  WeightedSnapshotSum(Kind kind, std::shared_ptr<const ProcessShadow> first,
                      std::shared_ptr<const ProcessShadow> second, std::shared_ptr<const ShadowEstimate> state);

  Kind kind_;
  std::shared_ptr<const ProcessShadow> first_;
  std::shared_ptr<const ProcessShadow> second_;
  std::shared_ptr<const ShadowEstimate> state_;
};

/// Estimates E(rho) from a process shadow and a state shadow of rho.
WeightedSnapshotSum apply_process_to_state_shadow(const ProcessShadow& ps, const ShadowEstimate& ss);
/// Estimates the normalized Choi matrix of ps_y after ps_x.
WeightedSnapshotSum compose_process_shadows(const ProcessShadow& ps_x, const ProcessShadow& ps_y);

struct SignStatistics {
  int n_factors = 0;
  std::size_t samples = 0;
  double p_negative = 0.0;
  double p_positive = 0.0;
  double mean_log_abs = 0.0;
  double std_log_abs = 0.0;
  // closed forms
  double p_negative_exact = 0.0;
  double p_positive_exact = 0.0;
  double mean_log_abs_exact = 0.0;
  /// sqrt(N) times the exact per-factor standard deviation of log|w|.
  double std_log_abs_exact = 0.0;
  /// The rough scale sqrt(N/6) log 5 for the same spread.
  double std_log_abs_heuristic = 0.0;
  /// Histogram of the number of |w| >= 2 factors, k = 0..N, and its binomial form.
  std::vector<double> big_counts;
  std::vector<double> big_counts_exact;
};

/// Monte Carlo over products of N iid draws from {5/2, 1/4, 1/4, 1/4, 1/4, -2},
/// the single-qubit weight distribution for random states.
SignStatistics weight_sign_statistics(int n_factors, std::size_t samples, RngStream& rng);

}  // namespace procshadow
