#pragma once

// Estimators built on process shadows: transition probabilities, multitime
// correlators Tr[E(rho A) B], and purity-based unitarity checks.

#include "procshadow/ensembles.hpp"
#include "procshadow/process_shadows.hpp"
#include "procshadow/state_shadows.hpp"

#include <cstdint>

namespace procshadow {

struct TransitionEstimate {
  double raw;
  /// raw clamped to [0, 1]
  double clipped;
};

/// P(i -> f) = sum_a |<f|K_a|i>|^2 from Tr[E(|i><i|) |f><f|].
TransitionEstimate transition_probability(const ProcessShadow& ps, const BitString& i, const BitString& f, int k);

struct CorrelatorSpec {
  /// rho_in; any matrix works since only rho A enters.
  DenseOperator input_state;
  PauliString op_early;
  PauliString op_late;
};

/// Tr[E(rho A) B] by dense evaluation.
Complex correlator_exact(const Channel& ch, const CorrelatorSpec& spec);

/// Per-record values 2^n Tr[zeta_j ((rho A)^T (x) B)].
std::vector<Complex> correlator_samples_generic(const ProcessShadow& ps, const CorrelatorSpec& spec);
/// Same values for Pauli output frames and a one-site late operator: only
/// records measured along B's axis at its site contribute, with 3 (-1)^b_out.
std::vector<Complex> correlator_samples_fast(const ProcessShadow& ps, const CorrelatorSpec& spec);
bool fast_path_applies(const ProcessShadow& ps, const CorrelatorSpec& spec);

/// Median of means of the real and imaginary parts separately. rho A is not
/// Hermitian in general, so the correlator can be complex.
Complex median_of_means_complex(std::span<const Complex> values, int k);

/// Uses the fast path when it applies.
Complex multitime_correlator_exact_input(const ProcessShadow& ps, const CorrelatorSpec& spec, int k);

/// rho replaced by the state shadow ss. Summed over all (record, snapshot)
/// pairs, this is the signed shadow-on-shadow application with A inserted;
/// the snapshot sum is contracted first, leaving one value per record for the
/// median of means.
Complex multitime_correlator_shadow_input(const ProcessShadow& ps, const ShadowEstimate& ss, const PauliString& a,
                                          const PauliString& b, int k);

/// Median of means over groups of the distinct-pair mean of Tr[zeta_j zeta_k],
/// times 4^n: an unbiased estimate of Tr[eta^2] for the unnormalized Choi
/// matrix. Refuses n > 3 unless allow_large.
double purity_estimate(const ProcessShadow& ps, int k, bool allow_large = false);

enum class Verdict { Unitary, Nonunitary, Inconclusive };
std::string to_string(Verdict v);

struct UnitarityOptions {
  /// Decision threshold as a fraction of d^2.
  double threshold_fraction = 0.95;
  double confidence = 0.95;
  int resamples = 200;
  /// Records are bootstrapped in this many contiguous blocks.
  int blocks = 100;
  std::uint64_t seed = 0;
  bool allow_large = false;
};

struct UnitarityResult {
  Verdict verdict;
  double purity;
  double lower;
  double upper;
  double threshold;
  double confidence;
};

/// Unitary when the bootstrap interval of the purity lies at or above the
/// threshold, nonunitary when it lies below, inconclusive otherwise.
UnitarityResult unitarity_verdict(const ProcessShadow& ps, const UnitarityOptions& opts = {});

}  // namespace procshadow
