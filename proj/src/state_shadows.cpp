#include "procshadow/state_shadows.hpp"

#include "procshadow/kernels.hpp"

#include <algorithm>
#include <array>

namespace procshadow {

ShadowEstimate::ShadowEstimate(int n_qubits, Ensemble ensemble, std::vector<StateSnapshot> snapshots)
    : n_qubits_(n_qubits), ensemble_(ensemble), snapshots_(std::move(snapshots)) {
  for (const auto& s : snapshots_) {
    if (s.ensemble != ensemble_ || !frame_matches(s.frame, ensemble_)) {
      throw std::invalid_argument("snapshot ensemble does not match the shadow");
    }
    if (s.outcome.size() != n_qubits_ || n_qubits_of(s.frame) != n_qubits_) {
      throw std::invalid_argument("snapshot size does not match the shadow");
    }
  }
}

const Matrix& pauli_tau(Axis axis, int bit) {
  static const std::array<Matrix, 6> table = [] {
    std::array<Matrix, 6> t;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 2; ++b) {
        const Vector v = axis_eigenstate(static_cast<Axis>(a), b);
        t[static_cast<std::size_t>(2 * a + b)] = 3.0 * v * v.adjoint() - Matrix::Identity(2, 2);
      }
    }
    return t;
  }();
  return table[static_cast<std::size_t>(2 * static_cast<int>(axis) + bit)];
}

DenseOperator inverse_map_pauli(const DenseOperator& a) {
  const int n = a.n_qubits();
  Matrix m = a.matrix();
  const auto d = a.dim();
  for (int q = 0; q < n; ++q) {
    const Eigen::Index bit = Eigen::Index{1} << (n - 1 - q);
    Matrix next(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        Complex v = 3.0 * m(i, j);
        if (((i ^ j) & bit) == 0) v -= m(i & ~bit, j & ~bit) + m(i | bit, j | bit);
        next(i, j) = v;
      }
    }
    m = std::move(next);
  }
  return {n, std::move(m)};
}

DenseOperator inverse_map_clifford(const DenseOperator& a) {
  const double scale = static_cast<double>(a.dim()) + 1.0;
  Matrix m = scale * a.matrix();
  m.diagonal().array() -= a.trace();
  return {a.n_qubits(), std::move(m)};
}

DenseOperator inverse_map(Ensemble e, const DenseOperator& a) {
  return e == Ensemble::Pauli ? inverse_map_pauli(a) : inverse_map_clifford(a);
}

StateSnapshot acquire_state_snapshot(const DensityMatrix& rho, Ensemble ensemble, RngStream& rng) {
  const int n = rho.n_qubits();
  UnitarySpec frame = sample_frame(ensemble, n, rng);
  const Matrix u = to_matrix(frame);
  const Matrix rotated = u * rho.op().matrix() * u.adjoint();
  std::vector<double> p(static_cast<std::size_t>(rotated.rows()));
  for (Eigen::Index i = 0; i < rotated.rows(); ++i) p[static_cast<std::size_t>(i)] = rotated(i, i).real();
  BitString outcome(n, sample_index(p, rng));
  return {std::move(frame), outcome, ensemble};
}

ShadowEstimate acquire_state_shadow(const DensityMatrix& rho, Ensemble ensemble, std::size_t m,
                                    std::uint64_t seed, std::uint64_t stream) {
  return ShadowEstimate(rho.n_qubits(), ensemble,
                        kernels::parallel::acquire_snapshots(rho, ensemble, m, seed, stream));
}

Matrix snapshot_matrix(const StateSnapshot& s) {
  if (const auto* p = std::get_if<PauliFrame>(&s.frame); p != nullptr && s.ensemble == Ensemble::Pauli) {
    Matrix m = pauli_tau(p->axes.front(), s.outcome[0]);
    for (int q = 1; q < p->n_qubits(); ++q) m = kron(m, pauli_tau(p->axes[static_cast<std::size_t>(q)], s.outcome[q]));
    return m;
  }
  const Vector v = frame_state(s.frame, s.outcome);
  const DenseOperator proj(s.outcome.size(), v * v.adjoint());
  return inverse_map(s.ensemble, proj).matrix();
}

DenseOperator materialize_snapshot(const StateSnapshot& s) {
  return {s.outcome.size(), snapshot_matrix(s)};
}

DenseOperator reconstruct(const ShadowEstimate& est) {
  if (est.size() == 0) throw std::invalid_argument("cannot reconstruct from an empty shadow");
  Matrix sum = kernels::parallel::sum_snapshots(est.snapshots());
  sum /= static_cast<double>(est.size());
  return {est.n_qubits(), std::move(sum)};
}

double median_of_means(std::span<const double> values, int k) {
  if (k < 1) throw std::invalid_argument("median_of_means needs K >= 1");
  if (static_cast<std::size_t>(k) > values.size()) {
    throw std::invalid_argument("median_of_means: K exceeds the number of values");
  }
  const std::size_t group = values.size() / static_cast<std::size_t>(k);
  std::vector<double> means(static_cast<std::size_t>(k));
  for (std::size_t g = 0; g < means.size(); ++g) {
    double s = 0.0;
    for (std::size_t i = g * group; i < (g + 1) * group; ++i) s += values[i];
    means[g] = s / static_cast<double>(group);
  }
  std::sort(means.begin(), means.end());
  const std::size_t mid = means.size() / 2;
  return means.size() % 2 == 1 ? means[mid] : 0.5 * (means[mid - 1] + means[mid]);
}

double estimate_observable(const ShadowEstimate& est, const DenseOperator& o, int k) {
  if (o.n_qubits() != est.n_qubits()) throw std::invalid_argument("observable size mismatch");
  const auto samples = kernels::parallel::snapshot_expectations(est.snapshots(), o.matrix());
  return median_of_means(samples, k);
}

}  // namespace procshadow
