#pragma once

// Sample budgets for median-of-means shadow estimation, brute-force shadow
// norms, and numeric checks of the Clifford 3-design bound.

#include "procshadow/ensembles.hpp"
#include "procshadow/qcore.hpp"
#include "procshadow/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace procshadow {

/// An operator together with the qubits it acts on. The Pauli-ensemble bound
/// needs the support; it is never guessed from the matrix entries.
struct ObservableSpec {
  DenseOperator op;
  /// Bit q (basis-index layout, qubit 0 = bit n-1) set when qubit q is acted on.
  std::optional<std::uint64_t> support_mask;

  static ObservableSpec from_pauli(const PauliString& p);
  /// |b><b| with the full support.
  static ObservableSpec basis_projector(const BitString& b);
  /// Throws when no mask was declared.
  int support() const;
};

/// 2{[2Tr(O)^2 + Tr(O^2)] I + 2Tr(O) O + 2 O^2}.
DenseOperator s_operator(const DenseOperator& o);

/// 4^supp(O) ||O||^2 for Pauli frames, ||S(O)|| for Cliffords.
double f_value(const ObservableSpec& o, Ensemble e);

struct ComplexityQuery {
  double epsilon = 0.1;
  double delta = 0.1;
  int n_qubits = 1;
  std::vector<ObservableSpec> observables;
  /// Empty for the state-tomography budget.
  std::vector<ObservableSpec> input_states;
  Ensemble ensemble_in = Ensemble::Pauli;
  Ensemble ensemble_out = Ensemble::Pauli;
};

struct PairFValue {
  std::size_t input;
  std::size_t observable;
  double f_in;
  double f_out;
};

struct ShadowNormBounds {
  std::size_t observable;
  /// bound for O - Tr(O)/2^n I
  double shifted;
  /// bound for O itself
  double unshifted;
};

struct ComplexityAnswer {
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  bool process = true;
  std::vector<PairFValue> per_pair_f_values;
  /// State mode only; N uses the smaller of each pair.
  std::vector<ShadowNormBounds> state_bounds;
};

/// Process mode: K = ceil(2 ln(2ML/delta)), N = ceil(34/eps^2 4^n max f_in f_out).
/// State mode (no input states): K = ceil(2 ln(2M/delta)) and
/// N = ceil(34/eps^2 max min{shifted, unshifted}) with closed-form norm bounds.
ComplexityAnswer sample_budget(const ComplexityQuery& q);

/// ceil(x) that ignores relative rounding noise below 1e-9.
std::uint64_t tolerant_ceil(double x);

/// Top eigenvalue of sum_b E_U U^dag|b><b|U <b|U M^-1(O) U^dag|b>^2, by
/// enumerating 3^n Pauli frames (n <= 2) or the 24 single-qubit Cliffords.
double shadow_norm_bruteforce(const DenseOperator& o, Ensemble e);

/// The operator above for the single-qubit Clifford group.
Matrix clifford_shadow_lhs(const DenseOperator& o);
/// sum_b E_U U^dag|b><b|U <b|U B U^dag|b>^2 over the 24 single-qubit Cliffords.
Matrix clifford_third_moment(const DenseOperator& b);
/// 2^n [Tr(B)^2 I + 2Tr(B) B + 2B^2 + Tr(B^2) I] / (2^n (2^n+1)(2^n+2)).
Matrix third_moment_closed_form(const DenseOperator& b);

struct Lemma1Report {
  int trials = 0;
  double max_design_residual = 0.0;
  /// min eigenvalue of 2S(O) - LHS over trials
  double min_eig_bound = 0.0;
  /// min eigenvalue of S(O) - LHS: the bound the 3-design argument actually gives
  double min_eig_tight = 0.0;
  bool design_ok = false;
  bool bound_ok = false;
  bool tight_ok = false;
  bool passed() const { return design_ok && bound_ok; }
};

/// n = 1, random Hermitian O with Gaussian entries.
Lemma1Report verify_lemma1(int trials, RngStream& rng);

Matrix random_hermitian(int n_qubits, RngStream& rng);

}  // namespace procshadow
