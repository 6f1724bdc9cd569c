#include "procshadow/ensembles.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>

namespace procshadow {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::uint64_t low_mask(int bits) { return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1; }

// Reduces `vectors` to a linearly independent spanning subset over GF(2).
std::vector<std::uint64_t> independent_subset(const std::vector<std::uint64_t>& vectors) {
  std::vector<std::uint64_t> reduced;
  for (auto v : vectors) {
    for (auto r : reduced) v = std::min(v, v ^ r);
    if (v != 0) {
      reduced.push_back(v);
      std::sort(reduced.begin(), reduced.end(), std::greater<>());
    }
  }
  return reduced;
}

// Symplectic form on packed x | z << n vectors (sign bit ignored).
int symp(std::uint64_t a, std::uint64_t b, int n) {
  const auto m = low_mask(n);
  const auto ax = a & m, az = (a >> n) & m, bx = b & m, bz = (b >> n) & m;
  return std::popcount((ax & bz) ^ (az & bx)) & 1;
}

// Uniform element of Sp(2n, GF(2)): images of X_0, Z_0, X_1, Z_1, ... are
// drawn one symplectic pair at a time, each uniformly from the vectors allowed
// given the earlier pairs. Every group element corresponds to exactly one
// sequence of choices and every step has a fixed number of options, so the
// resulting distribution is uniform.
std::vector<std::uint64_t> sample_symplectic(int n, RngStream& rng) {
  std::vector<std::uint64_t> basis(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < 2 * n; ++i) basis[static_cast<std::size_t>(i)] = std::uint64_t{1} << i;
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(2 * n));
  auto draw = [&] {
    std::uint64_t v = 0;
    for (auto b : basis) {
      if (rng.bit()) v ^= b;
    }
    return v;
  };
  for (int j = 0; j < n; ++j) {
    std::uint64_t v = 0;
    do v = draw();
    while (v == 0);
    std::uint64_t w = 0;
    do w = draw();
    while (symp(v, w, n) == 0);
    rows[static_cast<std::size_t>(j)] = v;
    rows[static_cast<std::size_t>(n + j)] = w;
    std::vector<std::uint64_t> projected;
    projected.reserve(basis.size());
    for (auto u : basis) {
      std::uint64_t p = u;
      if (symp(u, w, n)) p ^= v;
      if (symp(u, v, n)) p ^= w;
      projected.push_back(p);
    }
    basis = independent_subset(projected);
  }
  return rows;
}

}  // namespace

std::string to_string(Ensemble e) { return e == Ensemble::Pauli ? "pauli" : "clifford"; }

Ensemble parse_ensemble(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "pauli") return Ensemble::Pauli;
  if (t == "clifford") return Ensemble::Clifford;
  throw std::invalid_argument("unknown ensemble \"" + std::string(text) + "\"");
}

char axis_char(Axis a) {
  switch (a) {
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  return '?';
}

// ---------------------------------------------------------------------------

BitString::BitString(int n_bits, std::uint64_t index) : n_(n_bits), index_(index) {
  if (n_bits < 1 || n_bits > 32) throw std::invalid_argument("bit string length out of range");
  if ((index >> n_bits) != 0) throw std::invalid_argument("bit string index exceeds length");
}

BitString BitString::parse(std::string_view text) {
  if (text.empty() || text.size() > 32) throw std::invalid_argument("bad bit string length");
  std::uint64_t idx = 0;
  for (char c : text) {
    if (c != '0' && c != '1') throw std::invalid_argument("bad bit string \"" + std::string(text) + "\"");
    idx = (idx << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return {static_cast<int>(text.size()), idx};
}

std::string BitString::to_string() const {
  std::string s(static_cast<std::size_t>(n_), '0');
  for (int q = 0; q < n_; ++q) s[static_cast<std::size_t>(q)] = static_cast<char>('0' + (*this)[q]);
  return s;
}

std::string PauliFrame::to_string() const {
  std::string s;
  for (auto a : axes) s.push_back(axis_char(a));
  return s;
}

PauliFrame PauliFrame::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty Pauli frame");
  PauliFrame f;
  for (char c : text) {
    switch (c) {
      case 'X': f.axes.push_back(Axis::X); break;
      case 'Y': f.axes.push_back(Axis::Y); break;
      case 'Z': f.axes.push_back(Axis::Z); break;
      default: throw std::invalid_argument("bad Pauli frame \"" + std::string(text) + "\"");
    }
  }
  return f;
}

// ---------------------------------------------------------------------------

int symplectic_product(std::uint64_t a, std::uint64_t b, int n_qubits) { return symp(a, b, n_qubits); }

void apply_pauli_row(std::uint64_t row, int n, Vector& psi) {
  using namespace std::complex_literals;
  const auto m = low_mask(n);
  const auto x = row & m;
  const auto z = (row >> n) & m;
  const bool negative = ((row >> (2 * n)) & 1u) != 0;
  // Per qubit Y = i X Z, so P = sign * i^{|x&z|} X^x Z^z.
  static constexpr Complex kIPow[4] = {1.0, 1.0i, -1.0, -1.0i};
  Complex phase = kIPow[std::popcount(x & z) & 3];
  if (negative) phase = -phase;
  Vector out(psi.size());
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    const auto ku = static_cast<std::uint64_t>(k);
    const double s = (std::popcount(z & ku) & 1) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(ku ^ x)) = phase * s * psi(k);
  }
  psi = std::move(out);
}

CliffordTableau::CliffordTableau(int n_qubits, std::vector<std::uint64_t> rows)
    : n_(n_qubits), rows_(std::move(rows)) {
  if (n_ < 1 || n_ > kMaxQubits) throw InfeasibleSizeError("Clifford tableau size out of range");
  if (rows_.size() != static_cast<std::size_t>(2 * n_)) throw std::invalid_argument("tableau needs 2n rows");
  const auto full = low_mask(2 * n_ + 1);
  for (int i = 0; i < 2 * n_; ++i) {
    if ((rows_[static_cast<std::size_t>(i)] & ~full) != 0) throw std::invalid_argument("tableau row has stray bits");
    for (int j = i + 1; j < 2 * n_; ++j) {
      const int expected = (j == i + n_) ? 1 : 0;
      if (symp(rows_[static_cast<std::size_t>(i)], rows_[static_cast<std::size_t>(j)], n_) != expected) {
        throw std::invalid_argument("tableau rows violate the symplectic relations");
      }
    }
  }
}

Matrix CliffordTableau::to_matrix() const {
  const auto d = dim_of(n_);
  // U|0> is the joint +1 eigenvector of the Z images; project each basis
  // vector and keep the one with the largest overlap.
  Vector best;
  double best_norm = -1.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    Vector v = Vector::Unit(d, k);
    for (int q = 0; q < n_; ++q) {
      Vector g = v;
      apply_pauli_row(rows_[static_cast<std::size_t>(n_ + q)], n_, g);
      v = 0.5 * (v + g);
    }
    const double nv = v.norm();
    if (nv > best_norm + 1e-12) {
      best_norm = nv;
      best = v;
    }
  }
  const Vector psi0 = best / best_norm;
  Matrix u(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    Vector col = psi0;
    for (int q = 0; q < n_; ++q) {
      if ((static_cast<std::uint64_t>(b) >> (n_ - 1 - q)) & 1u) {
        apply_pauli_row(rows_[static_cast<std::size_t>(q)], n_, col);
      }
    }
    u.col(b) = col;
  }
  return u;
}

// ---------------------------------------------------------------------------

Matrix axis_rotation(Axis a) {
  using namespace std::complex_literals;
  Matrix m(2, 2);
  switch (a) {
    case Axis::X: m << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2; break;
    case Axis::Y: m << kInvSqrt2, -1.0i * kInvSqrt2, kInvSqrt2, 1.0i * kInvSqrt2; break;
    case Axis::Z: m << 1.0, 0.0, 0.0, 1.0; break;
  }
  return m;
}

Vector axis_eigenstate(Axis a, int bit) {
  using namespace std::complex_literals;
  Vector v(2);
  const double s = bit ? -1.0 : 1.0;
  switch (a) {
    case Axis::X: v << kInvSqrt2, s * kInvSqrt2; break;
    case Axis::Y: v << kInvSqrt2, s * 1.0i * kInvSqrt2; break;
    case Axis::Z:
      if (bit) v << 0.0, 1.0;
      else v << 1.0, 0.0;
      break;
  }
  return v;
}

int n_qubits_of(const UnitarySpec& spec) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PauliFrame>) return s.n_qubits();
        else if constexpr (std::is_same_v<T, CliffordTableau>) return s.n_qubits();
        else return s.u.n_qubits();
      },
      spec);
}

bool frame_matches(const UnitarySpec& spec, Ensemble e) {
  if (e == Ensemble::Pauli) return std::holds_alternative<PauliFrame>(spec);
  return std::holds_alternative<CliffordTableau>(spec) || std::holds_alternative<ExplicitUnitary>(spec);
}

Matrix to_matrix(const UnitarySpec& spec) {
  if (const auto* p = std::get_if<PauliFrame>(&spec)) {
    Matrix m = axis_rotation(p->axes.front());
    for (std::size_t q = 1; q < p->axes.size(); ++q) m = kron(m, axis_rotation(p->axes[q]));
    return m;
  }
  if (const auto* c = std::get_if<CliffordTableau>(&spec)) return c->to_matrix();
  return std::get<ExplicitUnitary>(spec).u.matrix();
}

Vector frame_state(const UnitarySpec& spec, const BitString& b) {
  if (n_qubits_of(spec) != b.size()) throw std::invalid_argument("frame/outcome size mismatch");
  if (const auto* p = std::get_if<PauliFrame>(&spec)) {
    Vector v = axis_eigenstate(p->axes.front(), b[0]);
    for (int q = 1; q < p->n_qubits(); ++q) {
      const Vector f = axis_eigenstate(p->axes[static_cast<std::size_t>(q)], b[q]);
      Vector next(v.size() * 2);
      for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(2 * i, 2) = v(i) * f;
      v = std::move(next);
    }
    return v;
  }
  const Matrix u = to_matrix(spec);
  return u.row(static_cast<Eigen::Index>(b.index())).adjoint();
}

// ---------------------------------------------------------------------------

UnitarySpec sample_pauli_frame(int n_qubits, RngStream& rng) {
  if (n_qubits < 1) throw std::invalid_argument("n must be >= 1");
  PauliFrame f;
  f.axes.reserve(static_cast<std::size_t>(n_qubits));
  for (int q = 0; q < n_qubits; ++q) f.axes.push_back(static_cast<Axis>(rng.below(3)));
  return f;
}

UnitarySpec sample_clifford(int n_qubits, RngStream& rng) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw InfeasibleSizeError("uniform Clifford sampling supports 1 <= n <= 6");
  }
  auto rows = sample_symplectic(n_qubits, rng);
  for (auto& r : rows) {
    if (rng.bit()) r |= std::uint64_t{1} << (2 * n_qubits);
  }
  return CliffordTableau(n_qubits, std::move(rows));
}

UnitarySpec sample_frame(Ensemble e, int n_qubits, RngStream& rng) {
  return e == Ensemble::Pauli ? sample_pauli_frame(n_qubits, rng) : sample_clifford(n_qubits, rng);
}

std::vector<UnitarySpec> enumerate_clifford_group(int n_qubits) {
  if (n_qubits != 1) throw std::invalid_argument("Clifford enumeration is only provided for n = 1");
  std::vector<UnitarySpec> out;
  for (std::uint64_t v = 1; v < 4; ++v) {
    for (std::uint64_t w = 1; w < 4; ++w) {
      if (symp(v, w, 1) == 0) continue;
      for (std::uint64_t s = 0; s < 4; ++s) {
        out.emplace_back(CliffordTableau(1, {v | ((s & 1u) << 2), w | ((s >> 1) << 2)}));
      }
    }
  }
  return out;
}

DenseOperator sample_haar_unitary(int n_qubits, RngStream& rng) {
  if (n_qubits < 1 || n_qubits > 8) throw InfeasibleSizeError("Haar sampling supports dimensions up to 256");
  const auto d = dim_of(n_qubits);
  Matrix g(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(r, c) = Complex{re, im} * kInvSqrt2;
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double a = std::abs(rii);
    q.col(i) *= a > 0.0 ? rii / a : Complex{1.0};
  }
  return {n_qubits, std::move(q)};
}

std::uint64_t sample_index(std::span<const double> probabilities, RngStream& rng) {
  double total = 0.0;
  for (double p : probabilities) {
    if (p < -kStructuralTol) throw std::invalid_argument("negative outcome probability");
    total += std::max(p, 0.0);
  }
  if (std::abs(total - 1.0) > 1e-6) throw std::invalid_argument("outcome probabilities do not sum to one");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::uint64_t last_nonzero = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double p = std::max(probabilities[i], 0.0);
    if (p > 0.0) last_nonzero = i;
    acc += p;
    if (u < acc) return i;
  }
  return last_nonzero;
}

MeasurementOutcome measure_computational(const DensityMatrix& rho, RngStream& rng) {
  const auto& m = rho.op().matrix();
  std::vector<double> p(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) p[static_cast<std::size_t>(i)] = m(i, i).real();
  return {rho.n_qubits(), sample_index(p, rng)};
}

}  // namespace procshadow
