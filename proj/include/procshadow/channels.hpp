#pragma once

// Test channels: a few named Kraus sets and random channels from Haar
// unitaries and Stinespring dilations.

#include "procshadow/qcore.hpp"
#include "procshadow/rng.hpp"

#include <string>
#include <string_view>

namespace procshadow {

/// identity, pauli-x (X on qubit 0), hadamard (H on every qubit),
/// depolarizing (global, p = 1 sends everything to I/2^n), dephasing and
/// amplitude-damping (independently on every qubit).
Channel named_channel(std::string_view name, int n_qubits, double parameter = 0.0);

/// "name" or "name:parameter", e.g. "depolarizing:0.25".
Channel parse_named_channel(std::string_view spec, int n_qubits);

/// Single Haar-random Kraus operator, n <= 4.
Channel random_unitary_channel(int n_qubits, RngStream& rng);

struct Dilation {
  /// Haar unitary on ancilla (x) system, ancilla on the more significant qubits.
  DenseOperator unitary;
  int n_sys;
  int n_anc;
};

/// Haar unitary on n_sys + 2 n_sys qubits.
Dilation random_dilation(int n_sys, RngStream& rng);
/// K_j = (<j|_anc (x) I) U (|0>_anc (x) I), j over the ancilla basis.
Channel channel_of_dilation(const Dilation& dil);
/// Tr_anc[U (|0><0|_anc (x) rho) U^dag], the dilation applied directly.
DenseOperator apply_dilation(const Dilation& dil, const DenseOperator& rho);

/// channel_of_dilation(random_dilation(n_sys, rng)); n_sys <= 2.
Channel random_full_rank_channel(int n_sys, RngStream& rng);

/// G G^dag / Tr(G G^dag) for a complex Ginibre G (Hilbert-Schmidt measure).
DensityMatrix random_density_matrix(int n_qubits, RngStream& rng);

}  // namespace procshadow
