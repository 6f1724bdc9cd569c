#pragma once

// Hot loops in two flavours. `serial` is the straightforward reference used by
// the tests; `parallel` is the OpenMP version used everywhere else. Both
// produce identical acquisitions for any thread count: records are drawn in
// fixed-size blocks, block b from the substream (seed, {stream, b}), and
// reductions sum fixed chunks whose partials are combined in chunk order.

#include "procshadow/process_shadows.hpp"
#include "procshadow/state_shadows.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace procshadow::kernels {

inline constexpr std::size_t kBlockSize = 1024;
inline constexpr std::size_t kReductionChunks = 64;

/// Pair term kinds for the shadow-on-shadow contractions.
struct PairTerms {
  /// sum_{j,k} w_jk F_jk over all pairs, where F is the factor kept by the
  /// contraction; the caller divides by the pair count.
  Matrix weighted_sum;
  double weight_sum = 0.0;
};

namespace serial {

std::vector<StateSnapshot> acquire_snapshots(const DensityMatrix& rho, Ensemble ensemble, std::size_t m,
                                             std::uint64_t seed, std::uint64_t stream);
std::vector<ShadowRecord> acquire_records(const Channel& ch, Ensemble ensemble_in, Ensemble ensemble_out,
                                          std::size_t m, std::uint64_t seed, std::uint64_t stream);

Matrix sum_snapshots(std::span<const StateSnapshot> snapshots);
Matrix sum_choi_shadows(std::span<const ShadowRecord> records);

std::vector<double> snapshot_expectations(std::span<const StateSnapshot> snapshots, const Matrix& o);
/// 2^n Tr[A_j mt] Tr[B_j o] per record, mt being the already transposed input-side matrix.
std::vector<Complex> functional_values(std::span<const ShadowRecord> records, const Matrix& mt, const Matrix& o);

/// sum over ordered pairs j != k of Tr[zeta_j zeta_k], by explicit double loop.
double distinct_pair_overlap_sum(std::span<const ShadowRecord> records);

/// Explicit m*m' loop of the shadow-on-shadow application (Pauli only):
/// sum_{j,k} 4^n prod_q w(snapshot k, record j) B_j.
PairTerms apply_pairwise(std::span<const ShadowRecord> records, std::span<const StateSnapshot> snapshots);
/// Explicit loop of the composition Y after X (Pauli only):
/// sum_{j,k} 4^n prod_q w(X_j output, Y_k input) A_Xj (x) B_Yk.
PairTerms compose_pairwise(std::span<const ShadowRecord> x, std::span<const ShadowRecord> y);

}  // namespace serial

namespace parallel {

std::vector<StateSnapshot> acquire_snapshots(const DensityMatrix& rho, Ensemble ensemble, std::size_t m,
                                             std::uint64_t seed, std::uint64_t stream);
std::vector<ShadowRecord> acquire_records(const Channel& ch, Ensemble ensemble_in, Ensemble ensemble_out,
                                          std::size_t m, std::uint64_t seed, std::uint64_t stream);

/// Pauli inputs are binned by label first, so each distinct factor is built once.
Matrix sum_snapshots(std::span<const StateSnapshot> snapshots);
Matrix sum_choi_shadows(std::span<const ShadowRecord> records);

std::vector<double> snapshot_expectations(std::span<const StateSnapshot> snapshots, const Matrix& o);
std::vector<Complex> functional_values(std::span<const ShadowRecord> records, const Matrix& mt, const Matrix& o);

/// Frobenius identity: ||sum zeta||_F^2 - sum Tr[zeta_j^2].
double distinct_pair_overlap_sum(std::span<const ShadowRecord> records);

/// Factorized forms of the pair sums above; same value up to rounding, in
/// O(m + m') instead of O(m m').
PairTerms apply_pairwise(std::span<const ShadowRecord> records, std::span<const StateSnapshot> snapshots);
PairTerms compose_pairwise(std::span<const ShadowRecord> x, std::span<const ShadowRecord> y);

}  // namespace parallel

/// Tr[zeta^2] of one record.
double choi_shadow_square_trace(const ShadowRecord& r);

/// d * sum_{i,j} x(a i, a' j) y(i b, j b'): the normalized Choi matrix of the
/// composition when x and y are normalized Choi matrices of the two stages.
Matrix link_product(const Matrix& x, const Matrix& y, int n_qubits);

}  // namespace procshadow::kernels
