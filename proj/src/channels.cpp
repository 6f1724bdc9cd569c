#include "procshadow/channels.hpp"

#include "procshadow/ensembles.hpp"

#include <cmath>
#include <stdexcept>

namespace procshadow {
namespace {

Matrix identity(int n) { return Matrix::Identity(dim_of(n), dim_of(n)); }

// The same single-qubit Kraus set on every qubit.
std::vector<Matrix> local_kraus(const std::vector<Matrix>& single, int n) {
  std::vector<Matrix> out = single;
  for (int q = 1; q < n; ++q) {
    std::vector<Matrix> next;
    next.reserve(out.size() * single.size());
    for (const auto& a : out) {
      for (const auto& b : single) next.push_back(kron(a, b));
    }
    out = std::move(next);
  }
  return out;
}

void check_probability(double p, std::string_view name) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " parameter must lie in [0, 1]");
}

}  // namespace

Channel named_channel(std::string_view name, int n, double p) {
  if (n < 1 || n > kMaxQubits) throw InfeasibleSizeError("channel size out of range");
  if (name == "identity") return Channel(n, {identity(n)});
  if (name == "pauli-x") {
    return Channel(n, {kron(pauli_matrix(PauliLetter::X), identity(n - 1))});
  }
  if (name == "hadamard") {
    const Matrix h = axis_rotation(Axis::X);
    Matrix u = h;
    for (int q = 1; q < n; ++q) u = kron(u, h);
    return Channel(n, {u});
  }
  if (name == "depolarizing") {
    check_probability(p, name);
    const double share = p / std::pow(4.0, n);
    std::vector<Matrix> kraus;
    for (const auto& s : all_pauli_strings(n)) {
      const double w = s.support() == 0 ? 1.0 - p + share : share;
      if (w > 0.0) kraus.push_back(std::sqrt(w) * s.to_operator().matrix());
    }
    return Channel(n, std::move(kraus));
  }
  if (name == "dephasing") {
    check_probability(p, name);
    return Channel(n, local_kraus({std::sqrt(1.0 - 0.5 * p) * Matrix::Identity(2, 2),
                                   std::sqrt(0.5 * p) * pauli_matrix(PauliLetter::Z)},
                                  n));
  }
  if (name == "amplitude-damping") {
    check_probability(p, name);
    Matrix k0 = Matrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - p);
    Matrix k1 = Matrix::Zero(2, 2);
    k1(0, 1) = std::sqrt(p);
    return Channel(n, local_kraus({k0, k1}, n));
  }
  throw std::invalid_argument("unknown channel name: " + std::string(name));
}

Channel parse_named_channel(std::string_view spec, int n) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) return named_channel(spec, n);
  const std::string value(spec.substr(colon + 1));
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) throw std::invalid_argument("bad channel parameter in " + std::string(spec));
  return named_channel(spec.substr(0, colon), n, p);
}

Channel random_unitary_channel(int n, RngStream& rng) {
  if (n < 1 || n > 4) throw InfeasibleSizeError("random unitary channels support 1 <= n <= 4");
  return Channel::unitary(sample_haar_unitary(n, rng));
}

Dilation random_dilation(int n_sys, RngStream& rng) {
  if (n_sys < 1 || n_sys > 2) throw InfeasibleSizeError("random full-rank channels support n_sys <= 2");
  const int n_anc = 2 * n_sys;
  return {sample_haar_unitary(n_sys + n_anc, rng), n_sys, n_anc};
}

Channel channel_of_dilation(const Dilation& dil) {
  const auto d = dim_of(dil.n_sys);
  const auto d_anc = dim_of(dil.n_anc);
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(d_anc));
  for (Eigen::Index j = 0; j < d_anc; ++j) kraus.push_back(dil.unitary.matrix().block(j * d, 0, d, d));
  return Channel(dil.n_sys, std::move(kraus));
}

DenseOperator apply_dilation(const Dilation& dil, const DenseOperator& rho) {
  const auto d = dim_of(dil.n_sys);
  const auto d_anc = dim_of(dil.n_anc);
  Matrix big = Matrix::Zero(d * d_anc, d * d_anc);
  big.topLeftCorner(d, d) = rho.matrix();
  const Matrix& u = dil.unitary.matrix();
  const Matrix out = u * big * u.adjoint();
  Matrix reduced = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d_anc; ++j) reduced += out.block(j * d, j * d, d, d);
  return {dil.n_sys, std::move(reduced)};
}

Channel random_full_rank_channel(int n_sys, RngStream& rng) { return channel_of_dilation(random_dilation(n_sys, rng)); }

DensityMatrix random_density_matrix(int n, RngStream& rng) {
  if (n < 1 || n > kMaxQubits) throw InfeasibleSizeError("state size out of range");
  const auto d = dim_of(n);
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex{rng.normal(), rng.normal()};
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(DenseOperator(n, std::move(rho)));
}

}  // namespace procshadow
