#include "procshadow/qcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace procshadow {

int qubits_of_dim(Eigen::Index dim) {
  if (dim < 1 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

DenseOperator::DenseOperator(int n_qubits, Matrix m) : n_qubits_(n_qubits), mat_(std::move(m)) {
  if (n_qubits < 0) throw std::invalid_argument("negative qubit count");
  if (mat_.rows() != dim_of(n_qubits) || mat_.cols() != dim_of(n_qubits)) {
    throw std::invalid_argument("operator shape does not match 2^n x 2^n for n = " +
                                std::to_string(n_qubits));
  }
}

// The qubit count is taken before m is moved into the parameter.
DenseOperator::DenseOperator(Matrix m) : n_qubits_(qubits_of_dim(m.rows())), mat_(std::move(m)) {
  if (mat_.cols() != mat_.rows()) throw std::invalid_argument("operator is not square");
}

DenseOperator DenseOperator::identity(int n_qubits) {
  return {n_qubits, Matrix::Identity(dim_of(n_qubits), dim_of(n_qubits))};
}

DenseOperator DenseOperator::zero(int n_qubits) {
  return {n_qubits, Matrix::Zero(dim_of(n_qubits), dim_of(n_qubits))};
}

double DenseOperator::hermiticity_defect() const {
  return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
}

DenseOperator& DenseOperator::operator+=(const DenseOperator& o) {
  if (o.n_qubits_ != n_qubits_) throw std::invalid_argument("qubit count mismatch in +");
  mat_ += o.mat_;
  return *this;
}

DenseOperator& DenseOperator::operator-=(const DenseOperator& o) {
  if (o.n_qubits_ != n_qubits_) throw std::invalid_argument("qubit count mismatch in -");
  mat_ -= o.mat_;
  return *this;
}

DenseOperator& DenseOperator::operator*=(Complex s) {
  mat_ *= s;
  return *this;
}

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("qubit count mismatch in *");
  return {a.n_qubits(), a.matrix() * b.matrix()};
}

double max_abs_diff(const DenseOperator& a, const DenseOperator& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("qubit count mismatch");
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(DenseOperator op) : op_(std::move(op)) {
  if (op_.hermiticity_defect() > kAlgebraicTol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(op_.trace() - Complex{1.0}) > kAlgebraicTol) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(op_.matrix(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kStructuralTol) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  Vector v = psi / psi.norm();
  return DensityMatrix(DenseOperator(Matrix(v * v.adjoint())));
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  return DensityMatrix(DenseOperator::identity(n_qubits) *
                       Complex{1.0 / static_cast<double>(dim_of(n_qubits))});
}

// ---------------------------------------------------------------------------

Matrix pauli_matrix(PauliLetter p) {
  using namespace std::complex_literals;
  Matrix m(2, 2);
  switch (p) {
    case PauliLetter::I: m << 1.0, 0.0, 0.0, 1.0; break;
    case PauliLetter::X: m << 0.0, 1.0, 1.0, 0.0; break;
    case PauliLetter::Y: m << 0.0, -1.0i, 1.0i, 0.0; break;
    case PauliLetter::Z: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return m;
}

PauliString::PauliString(std::vector<PauliLetter> letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw std::invalid_argument("empty Pauli string");
}

PauliString PauliString::parse(std::string_view text) {
  std::vector<PauliLetter> letters;
  letters.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'I': letters.push_back(PauliLetter::I); break;
      case 'X': letters.push_back(PauliLetter::X); break;
      case 'Y': letters.push_back(PauliLetter::Y); break;
      case 'Z': letters.push_back(PauliLetter::Z); break;
      default:
        throw std::invalid_argument("bad Pauli letter '" + std::string(1, c) + "' in \"" +
                                    std::string(text) + "\"");
    }
  }
  return PauliString(std::move(letters));
}

PauliString PauliString::single(int n_qubits, int site, PauliLetter p) {
  if (site < 0 || site >= n_qubits) throw std::out_of_range("Pauli site out of range");
  std::vector<PauliLetter> letters(static_cast<std::size_t>(n_qubits), PauliLetter::I);
  letters[static_cast<std::size_t>(site)] = p;
  return PauliString(std::move(letters));
}

int PauliString::support() const {
  return static_cast<int>(std::count_if(letters_.begin(), letters_.end(),
                                        [](PauliLetter p) { return p != PauliLetter::I; }));
}

std::vector<int> PauliString::support_sites() const {
  std::vector<int> sites;
  for (int q = 0; q < n_qubits(); ++q) {
    if (letters_[static_cast<std::size_t>(q)] != PauliLetter::I) sites.push_back(q);
  }
  return sites;
}

DenseOperator PauliString::to_operator() const {
  Matrix m = pauli_matrix(letters_.front());
  for (std::size_t q = 1; q < letters_.size(); ++q) m = kron(m, pauli_matrix(letters_[q]));
  return DenseOperator(n_qubits(), std::move(m));
}

std::string PauliString::to_string() const {
  static constexpr char kNames[] = {'I', 'X', 'Y', 'Z'};
  std::string s;
  for (auto p : letters_) s.push_back(kNames[static_cast<int>(p)]);
  return s;
}

std::vector<PauliString> all_pauli_strings(int n_qubits) {
  std::vector<PauliString> out;
  const std::size_t count = std::size_t{1} << (2 * n_qubits);
  out.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<PauliLetter> letters(static_cast<std::size_t>(n_qubits));
    std::size_t c = code;
    for (int q = n_qubits - 1; q >= 0; --q) {
      letters[static_cast<std::size_t>(q)] = static_cast<PauliLetter>(c & 3u);
      c >>= 2;
    }
    out.emplace_back(std::move(letters));
  }
  return out;
}

// ---------------------------------------------------------------------------

Channel Channel::unchecked(int n_qubits, std::vector<Matrix> kraus) {
  if (kraus.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
  for (const auto& k : kraus) {
    if (k.rows() != dim_of(n_qubits) || k.cols() != dim_of(n_qubits)) {
      throw std::invalid_argument("Kraus operator shape does not match qubit count");
    }
  }
  Channel ch;
  ch.n_qubits_ = n_qubits;
  ch.kraus_ = std::move(kraus);
  return ch;
}

Channel::Channel(int n_qubits, std::vector<Matrix> kraus)
    : Channel(unchecked(n_qubits, std::move(kraus))) {
  if (trace_preservation_defect() > kStructuralTol) {
    throw std::invalid_argument("Kraus set is not trace preserving");
  }
}

Channel Channel::unitary(const DenseOperator& u) { return Channel(u.n_qubits(), {u.matrix()}); }

double Channel::trace_preservation_defect() const {
  const auto d = dim_of(n_qubits_);
  Matrix s = Matrix::Zero(d, d);
  for (const auto& k : kraus_) s.noalias() += k.adjoint() * k;
  return (s - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

Channel Channel::then(const Channel& second) const {
  if (second.n_qubits_ != n_qubits_) throw std::invalid_argument("composition size mismatch");
  std::vector<Matrix> ks;
  ks.reserve(kraus_.size() * second.kraus_.size());
  for (const auto& b : second.kraus_) {
    for (const auto& a : kraus_) ks.emplace_back(b * a);
  }
  return unchecked(n_qubits_, std::move(ks));
}

// ---------------------------------------------------------------------------

ChoiMatrix::ChoiMatrix(DenseOperator op, bool normalized)
    : op_(std::move(op)), normalized_(normalized) {
  if (op_.n_qubits() % 2 != 0) throw std::invalid_argument("Choi matrix needs an even qubit count");
  const double expected = normalized ? 1.0 : static_cast<double>(dim_of(system_qubits()));
  if (std::abs(op_.trace() - Complex{expected}) > kStructuralTol * std::max(1.0, expected)) {
    throw std::invalid_argument("Choi trace inconsistent with normalization flag");
  }
}

ChoiMatrix ChoiMatrix::as_normalized() const {
  if (normalized_) return *this;
  return ChoiMatrix(op_ * Complex{1.0 / static_cast<double>(dim_of(system_qubits()))}, true);
}

ChoiMatrix ChoiMatrix::as_unnormalized() const {
  if (!normalized_) return *this;
  return ChoiMatrix(op_ * Complex{static_cast<double>(dim_of(system_qubits()))}, false);
}

bool ChoiMatrix::satisfies_physical_invariants(double tol) const {
  if (op_.hermiticity_defect() > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(op_.matrix(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) return false;
  const int n = system_qubits();
  const double scale = normalized_ ? 1.0 / static_cast<double>(dim_of(n)) : 1.0;
  const DenseOperator reduced = partial_trace(op_, Register::B);
  return (reduced.matrix() - scale * Matrix::Identity(dim_of(n), dim_of(n))).cwiseAbs().maxCoeff() <=
         tol;
}

// ---------------------------------------------------------------------------

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DenseOperator tensor(const DenseOperator& a, const DenseOperator& b) {
  return {a.n_qubits() + b.n_qubits(), kron(a.matrix(), b.matrix())};
}

DenseOperator partial_trace(const DenseOperator& a, Register reg) {
  if (a.n_qubits() % 2 != 0) {
    throw std::invalid_argument("partial_trace needs an even number of qubits");
  }
  const int n = a.n_qubits() / 2;
  const auto d = dim_of(n);
  const Matrix& m = a.matrix();
  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Complex s{0.0};
      for (Eigen::Index k = 0; k < d; ++k) {
        s += reg == Register::B ? m(i * d + k, j * d + k) : m(k * d + i, k * d + j);
      }
      out(i, j) = s;
    }
  }
  return {n, std::move(out)};
}

DenseOperator apply_channel(const Channel& ch, const DenseOperator& rho) {
  if (rho.n_qubits() != ch.n_qubits()) throw std::invalid_argument("channel/state size mismatch");
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const auto& k : ch.kraus()) out.noalias() += k * rho.matrix() * k.adjoint();
  return {rho.n_qubits(), std::move(out)};
}

ChoiMatrix choi_of_channel(const Channel& ch) {
  const int n = ch.n_qubits();
  if (2 * n > 2 * kMaxQubits) throw InfeasibleSizeError("Choi matrix too large");
  const auto d = dim_of(n);
  Matrix eta = Matrix::Zero(d * d, d * d);
  Vector v(d * d);
  // (I (x) K)|omega> has entries v[m*d + i] = K(i, m).
  for (const auto& k : ch.kraus()) {
    for (Eigen::Index m = 0; m < d; ++m) v.segment(m * d, d) = k.col(m);
    eta.noalias() += v * v.adjoint();
  }
  return ChoiMatrix(DenseOperator(2 * n, std::move(eta)), false);
}

DenseOperator channel_of_choi(const ChoiMatrix& eta, const DenseOperator& rho) {
  const int n = eta.system_qubits();
  if (rho.n_qubits() != n) throw std::invalid_argument("Choi/state size mismatch");
  const auto d = dim_of(n);
  const Matrix& e = eta.op().matrix();
  const Matrix& r = rho.matrix();
  Matrix out = Matrix::Zero(d, d);
  // out(i,j) = sum_{a,a'} rho(a', a) * eta(a' d + i, a d + j)
  for (Eigen::Index ap = 0; ap < d; ++ap) {
    for (Eigen::Index a = 0; a < d; ++a) {
      const Complex w = r(ap, a);
      if (w == Complex{0.0}) continue;
      out.noalias() += w * e.block(ap * d, a * d, d, d);
    }
  }
  if (eta.normalized()) out *= static_cast<double>(d);
  return {n, std::move(out)};
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double operator_norm(const DenseOperator& a) { return operator_norm(a.matrix()); }

}  // namespace procshadow
