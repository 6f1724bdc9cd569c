#pragma once

// Measurement-frame ensembles: random per-qubit Pauli bases, uniformly random
// n-qubit Cliffords, Haar unitaries, and computational-basis sampling.
//
// A frame U is applied before a computational-basis measurement, so the
// projector selected by outcome b is U^dag |b><b| U. For Pauli frames that
// projector is the eigenprojector of the chosen axis with eigenvalue (-1)^b.

#include "procshadow/qcore.hpp"
#include "procshadow/rng.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace procshadow {

enum class Axis : unsigned char { X, Y, Z };
enum class Ensemble : unsigned char { Pauli, Clifford };

std::string to_string(Ensemble e);
/// Accepts "pauli" / "clifford" (case-insensitive).
Ensemble parse_ensemble(std::string_view text);
char axis_char(Axis a);

/// n-bit computational-basis label. Character q of the text form is qubit q,
/// which is the most significant bit of the basis index.
class BitString {
 public:
  BitString() = default;
  BitString(int n_bits, std::uint64_t index);
  static BitString parse(std::string_view text);

  int size() const { return n_; }
  std::uint64_t index() const { return index_; }
  int operator[](int q) const { return static_cast<int>((index_ >> (n_ - 1 - q)) & 1u); }
  BitString flipped(int q) const { return {n_, index_ ^ (std::uint64_t{1} << (n_ - 1 - q))}; }
  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  int n_ = 0;
  std::uint64_t index_ = 0;
};

using MeasurementOutcome = BitString;

/// Per-qubit Pauli measurement axes.
struct PauliFrame {
  std::vector<Axis> axes;

  int n_qubits() const { return static_cast<int>(axes.size()); }
  std::string to_string() const;
  static PauliFrame parse(std::string_view text);
  friend bool operator==(const PauliFrame&, const PauliFrame&) = default;
};

/// Stabilizer tableau of an n-qubit Clifford U (up to global phase).
///
/// Row q (q < n) is U X_q U^dag, row n+q is U Z_q U^dag. Each row is packed
/// as x | z << n | sign << 2n, where the x and z masks use the basis-index bit
/// layout (qubit 0 is bit n-1) and x=z=1 on a qubit denotes Y.
class CliffordTableau {
 public:
  /// Validates the symplectic commutation relations.
  CliffordTableau(int n_qubits, std::vector<std::uint64_t> rows);

  int n_qubits() const { return n_; }
  const std::vector<std::uint64_t>& rows() const { return rows_; }
  /// Dense unitary with a fixed (arbitrary) global phase.
  Matrix to_matrix() const;

  friend bool operator==(const CliffordTableau&, const CliffordTableau&) = default;

 private:
  int n_;
  std::vector<std::uint64_t> rows_;
};

struct ExplicitUnitary {
  DenseOperator u;

  friend bool operator==(const ExplicitUnitary& a, const ExplicitUnitary& b) {
    return a.u.dim() == b.u.dim() && a.u.matrix() == b.u.matrix();
  }
};

using UnitarySpec = std::variant<PauliFrame, CliffordTableau, ExplicitUnitary>;

int n_qubits_of(const UnitarySpec& spec);
bool frame_matches(const UnitarySpec& spec, Ensemble e);
Matrix to_matrix(const UnitarySpec& spec);
/// U^dag |b>, the state selected by outcome b.
Vector frame_state(const UnitarySpec& spec, const BitString& b);
/// Single-qubit basis change for a Pauli axis (X: H, Y: H S^dag, Z: I).
Matrix axis_rotation(Axis a);
/// Eigenvector of the axis with eigenvalue (-1)^bit.
Vector axis_eigenstate(Axis a, int bit);

/// Applies a packed Pauli row to a state vector in place.
void apply_pauli_row(std::uint64_t row, int n_qubits, Vector& psi);
/// Symplectic product of two packed rows (0 = commute, 1 = anticommute).
int symplectic_product(std::uint64_t a, std::uint64_t b, int n_qubits);

UnitarySpec sample_pauli_frame(int n_qubits, RngStream& rng);
/// Uniform over the n-qubit Clifford group modulo phase, 1 <= n <= 6.
UnitarySpec sample_clifford(int n_qubits, RngStream& rng);
UnitarySpec sample_frame(Ensemble e, int n_qubits, RngStream& rng);

/// All 24 single-qubit Cliffords modulo phase. Only n = 1 is supported.
std::vector<UnitarySpec> enumerate_clifford_group(int n_qubits);

/// Haar unitary via QR of a complex Ginibre matrix with phase correction.
DenseOperator sample_haar_unitary(int n_qubits, RngStream& rng);

/// Draws an index from a probability vector; tiny negative entries (> -1e-9)
/// are clamped to zero and the mass must be within 1e-6 of one.
std::uint64_t sample_index(std::span<const double> probabilities, RngStream& rng);

MeasurementOutcome measure_computational(const DensityMatrix& rho, RngStream& rng);

}  // namespace procshadow
