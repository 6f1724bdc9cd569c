#pragma once

// Classical shadows of density matrices: snapshot acquisition, the inverse
// measurement channels of the two ensembles, reconstruction, and
// median-of-means estimation.

#include "procshadow/ensembles.hpp"
#include "procshadow/qcore.hpp"
#include "procshadow/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace procshadow {

struct StateSnapshot {
  UnitarySpec frame;
  MeasurementOutcome outcome;
  Ensemble ensemble;
};

/// Immutable collection of snapshots sharing a qubit count and ensemble.
class ShadowEstimate {
 public:
  ShadowEstimate(int n_qubits, Ensemble ensemble, std::vector<StateSnapshot> snapshots);

  int n_qubits() const { return n_qubits_; }
  Ensemble ensemble() const { return ensemble_; }
  const std::vector<StateSnapshot>& snapshots() const { return snapshots_; }
  std::size_t size() const { return snapshots_.size(); }

 private:
  int n_qubits_;
  Ensemble ensemble_;
  std::vector<StateSnapshot> snapshots_;
};

/// tau_{b,mu} = 3 |b_mu><b_mu| - I for a single qubit.
const Matrix& pauli_tau(Axis axis, int bit);

/// 3A - Tr(A) I applied on every qubit of A.
DenseOperator inverse_map_pauli(const DenseOperator& a);
/// (2^n + 1) A - Tr(A) I.
DenseOperator inverse_map_clifford(const DenseOperator& a);
DenseOperator inverse_map(Ensemble e, const DenseOperator& a);

StateSnapshot acquire_state_snapshot(const DensityMatrix& rho, Ensemble ensemble, RngStream& rng);

/// m snapshots drawn from per-block substreams of `seed`; identical output for
/// any thread count.
ShadowEstimate acquire_state_shadow(const DensityMatrix& rho, Ensemble ensemble, std::size_t m,
                                    std::uint64_t seed, std::uint64_t stream = 0);

/// Single-shot shadow M^-1(U^dag |b><b| U).
DenseOperator materialize_snapshot(const StateSnapshot& s);
Matrix snapshot_matrix(const StateSnapshot& s);

/// Sample mean of all snapshots.
DenseOperator reconstruct(const ShadowEstimate& est);

/// Median of K equal-size group means. The trailing size mod K values are
/// dropped; an even K averages the two central means.
double median_of_means(std::span<const double> values, int k);

/// Median of means of Tr(sigma_j O); O must be Hermitian.
double estimate_observable(const ShadowEstimate& est, const DenseOperator& o, int k);

}  // namespace procshadow
