#pragma once

// Dense complex linear algebra and the quantum-object vocabulary used by the
// rest of the library. Basis states are indexed with qubit 0 as the most
// significant bit; transposes are always taken in that computational basis.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace procshadow {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kStructuralTol = 1e-9;
inline constexpr double kAlgebraicTol = 1e-10;

/// Largest register handled by the dense layer.
inline constexpr int kMaxQubits = 6;

/// Thrown when a request exceeds what the dense simulator will attempt.
class InfeasibleSizeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

constexpr Eigen::Index dim_of(int n_qubits) { return Eigen::Index{1} << n_qubits; }

/// Inverse of dim_of; throws std::invalid_argument if `dim` is not a power of two.
int qubits_of_dim(Eigen::Index dim);

/// A 2^n x 2^n complex matrix tagged with its qubit count.
class DenseOperator {
 public:
  DenseOperator() = default;
  DenseOperator(int n_qubits, Matrix m);
  explicit DenseOperator(Matrix m);

  static DenseOperator identity(int n_qubits);
  static DenseOperator zero(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return mat_(r, c); }

  Complex trace() const { return mat_.trace(); }
  DenseOperator adjoint() const { return {n_qubits_, mat_.adjoint()}; }
  DenseOperator transpose() const { return {n_qubits_, mat_.transpose()}; }
  /// max |a_ij - conj(a_ji)|
  double hermiticity_defect() const;

  DenseOperator& operator+=(const DenseOperator& o);
  DenseOperator& operator-=(const DenseOperator& o);
  DenseOperator& operator*=(Complex s);

  friend DenseOperator operator+(DenseOperator a, const DenseOperator& b) { return a += b; }
  friend DenseOperator operator-(DenseOperator a, const DenseOperator& b) { return a -= b; }
  friend DenseOperator operator*(DenseOperator a, Complex s) { return a *= s; }
  friend DenseOperator operator*(Complex s, DenseOperator a) { return a *= s; }
  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);

 private:
  int n_qubits_ = 0;
  Matrix mat_;
};

/// Largest absolute entry of a - b; dimensions must agree.
double max_abs_diff(const DenseOperator& a, const DenseOperator& b);

/// Validated density matrix: Hermitian, unit trace, positive up to slack.
class DensityMatrix {
 public:
  explicit DensityMatrix(DenseOperator op);
  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix maximally_mixed(int n_qubits);

  const DenseOperator& op() const { return op_; }
  int n_qubits() const { return op_.n_qubits(); }
  operator const DenseOperator&() const { return op_; }

 private:
  DenseOperator op_;
};

enum class PauliLetter : unsigned char { I, X, Y, Z };

/// Single-qubit Pauli matrix for a letter.
Matrix pauli_matrix(PauliLetter p);

class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<PauliLetter> letters);
  /// Parses e.g. "XIZ"; qubit 0 is the first character.
  static PauliString parse(std::string_view text);
  /// Single non-identity letter `p` at `site`.
  static PauliString single(int n_qubits, int site, PauliLetter p);

  int n_qubits() const { return static_cast<int>(letters_.size()); }
  const std::vector<PauliLetter>& letters() const { return letters_; }
  PauliLetter operator[](int q) const { return letters_[static_cast<std::size_t>(q)]; }
  int support() const;
  std::vector<int> support_sites() const;
  DenseOperator to_operator() const;
  std::string to_string() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::vector<PauliLetter> letters_;
};

/// All 4^n Pauli strings in lexicographic I<X<Y<Z order.
std::vector<PauliString> all_pauli_strings(int n_qubits);

/// CPTP map stored as a Kraus set.
class Channel {
 public:
  /// Validates shape and trace preservation (sum K^dag K = I to 1e-9).
  Channel(int n_qubits, std::vector<Matrix> kraus);
  /// Skips the trace-preservation check. Used for negative controls.
  static Channel unchecked(int n_qubits, std::vector<Matrix> kraus);
  static Channel unitary(const DenseOperator& u);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  /// max |sum K^dag K - I|
  double trace_preservation_defect() const;

  /// Kraus set of `second` after `this`.
  Channel then(const Channel& second) const;

 private:
  Channel() = default;
  int n_qubits_ = 0;
  std::vector<Matrix> kraus_;
};

/// Choi operator on 2n qubits: register A (input copy) holds the more
/// significant qubits, register B (output copy) the less significant ones.
class ChoiMatrix {
 public:
  /// Checks the trace against the normalization flag (1 or 2^n, to 1e-9).
  ChoiMatrix(DenseOperator op, bool normalized);

  const DenseOperator& op() const { return op_; }
  bool normalized() const { return normalized_; }
  int system_qubits() const { return op_.n_qubits() / 2; }

  ChoiMatrix as_normalized() const;
  ChoiMatrix as_unnormalized() const;

  /// Hermitian, PSD (to -1e-9) and the partial-trace condition on B.
  bool satisfies_physical_invariants(double tol = kStructuralTol) const;

 private:
  DenseOperator op_;
  bool normalized_;
};

enum class Register { A, B };

DenseOperator tensor(const DenseOperator& a, const DenseOperator& b);
Matrix kron(const Matrix& a, const Matrix& b);

/// Traces out `reg` of an operator on 2n qubits.
DenseOperator partial_trace(const DenseOperator& a, Register reg);

DenseOperator apply_channel(const Channel& ch, const DenseOperator& rho);

/// Unnormalized Choi matrix sum_mn |m><n| (x) E(|m><n|).
ChoiMatrix choi_of_channel(const Channel& ch);

/// E(rho) = Tr_A[(rho^T (x) I) eta], scaling normalized Choi matrices by 2^n.
DenseOperator channel_of_choi(const ChoiMatrix& eta, const DenseOperator& rho);

/// Largest singular value.
double operator_norm(const DenseOperator& a);
double operator_norm(const Matrix& a);

}  // namespace procshadow
