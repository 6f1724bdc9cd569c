#include "procshadow/complexity.hpp"

#include "procshadow/state_shadows.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace procshadow {
namespace {

double min_eigenvalue(const Matrix& h) {
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const Matrix& h) {
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

DenseOperator traceless_part(const DenseOperator& o) {
  Matrix m = o.matrix();
  m.diagonal().array() -= o.trace() / static_cast<double>(o.dim());
  return {o.n_qubits(), std::move(m)};
}

// sum_b E_U U^dag|b><b|U |<b|U X U^dag|b>|^2 over an explicit list of frames.
Matrix frame_moment(const std::vector<UnitarySpec>& frames, const Matrix& x) {
  const auto d = x.rows();
  const int n = qubits_of_dim(d);
  Matrix acc = Matrix::Zero(d, d);
  for (const auto& f : frames) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const Vector v = frame_state(f, BitString(n, static_cast<std::uint64_t>(b)));
      const double w = std::norm(v.dot(x * v));
      acc += w * v * v.adjoint();
    }
  }
  return acc / static_cast<double>(frames.size());
}

std::vector<UnitarySpec> all_pauli_frames(int n) {
  std::vector<UnitarySpec> out;
  std::size_t count = 1;
  for (int q = 0; q < n; ++q) count *= 3;
  for (std::size_t c = 0; c < count; ++c) {
    PauliFrame f;
    std::size_t v = c;
    for (int q = 0; q < n; ++q) {
      f.axes.push_back(static_cast<Axis>(v % 3));
      v /= 3;
    }
    out.emplace_back(std::move(f));
  }
  return out;
}

}  // namespace

ObservableSpec ObservableSpec::from_pauli(const PauliString& p) {
  std::uint64_t mask = 0;
  for (int q : p.support_sites()) mask |= std::uint64_t{1} << (p.n_qubits() - 1 - q);
  return {p.to_operator(), mask};
}

ObservableSpec ObservableSpec::basis_projector(const BitString& b) {
  const auto d = dim_of(b.size());
  Matrix m = Matrix::Zero(d, d);
  m(static_cast<Eigen::Index>(b.index()), static_cast<Eigen::Index>(b.index())) = 1.0;
  return {DenseOperator(b.size(), std::move(m)), (std::uint64_t{1} << b.size()) - 1};
}

int ObservableSpec::support() const {
  if (!support_mask) throw std::invalid_argument("operator support is unknown; declare a support mask");
  return std::popcount(*support_mask);
}

DenseOperator s_operator(const DenseOperator& o) {
  const Complex tr = o.trace();
  const Complex tr2 = (o.matrix() * o.matrix()).trace();
  Matrix m = 2.0 * tr * o.matrix() + 2.0 * o.matrix() * o.matrix();
  m.diagonal().array() += 2.0 * tr * tr + tr2;
  return {o.n_qubits(), 2.0 * m};
}

double f_value(const ObservableSpec& o, Ensemble e) {
  if (e == Ensemble::Pauli) {
    const double norm = operator_norm(o.op);
    return std::pow(4.0, o.support()) * norm * norm;
  }
  return operator_norm(s_operator(o.op));
}

std::uint64_t tolerant_ceil(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("budget is not a finite nonnegative number");
  return static_cast<std::uint64_t>(std::ceil(x - 1e-9 * x));
}

ComplexityAnswer sample_budget(const ComplexityQuery& q) {
  if (!(q.epsilon > 0.0 && q.epsilon <= 1.0) || !(q.delta > 0.0 && q.delta <= 1.0)) {
    throw std::invalid_argument("epsilon and delta must lie in (0, 1]");
  }
  if (q.observables.empty()) throw std::invalid_argument("budget needs at least one observable");
  for (const auto* list : {&q.observables, &q.input_states}) {
    for (const auto& o : *list) {
      if (o.op.n_qubits() != q.n_qubits) throw std::invalid_argument("operator size differs from n_qubits");
    }
  }
  ComplexityAnswer a;
  const double big_m = static_cast<double>(q.observables.size());
  const double scale = 34.0 / (q.epsilon * q.epsilon);
  if (q.input_states.empty()) {
    a.process = false;
    a.k = std::max<std::uint64_t>(1, tolerant_ceil(2.0 * std::log(2.0 * big_m / q.delta)));
    double worst = 0.0;
    for (std::size_t j = 0; j < q.observables.size(); ++j) {
      const auto& o = q.observables[j];
      const DenseOperator o0 = traceless_part(o.op);
      ShadowNormBounds b{j, 0.0, 0.0};
      if (q.ensemble_out == Ensemble::Pauli) {
        const double n0 = operator_norm(o0);
        const double n1 = operator_norm(o.op);
        b.shifted = std::pow(4.0, o.support()) * n0 * n0;
        b.unshifted = std::pow(4.0, o.support()) * n1 * n1;
      } else {
        b.shifted = 3.0 * (o.op.matrix() * o.op.matrix()).trace().real();
        b.unshifted = operator_norm(s_operator(o.op));
      }
      worst = std::max(worst, std::min(b.shifted, b.unshifted));
      a.state_bounds.push_back(b);
    }
    a.n = std::max<std::uint64_t>(1, tolerant_ceil(scale * worst));
  } else {
    const double big_l = static_cast<double>(q.input_states.size());
    a.k = std::max<std::uint64_t>(1, tolerant_ceil(2.0 * std::log(2.0 * big_m * big_l / q.delta)));
    double worst = 0.0;
    for (std::size_t l = 0; l < q.input_states.size(); ++l) {
      const double f_in = f_value(q.input_states[l], q.ensemble_in);
      for (std::size_t j = 0; j < q.observables.size(); ++j) {
        const double f_out = f_value(q.observables[j], q.ensemble_out);
        a.per_pair_f_values.push_back({l, j, f_in, f_out});
        worst = std::max(worst, f_in * f_out);
      }
    }
    a.n = std::max<std::uint64_t>(1, tolerant_ceil(scale * std::pow(4.0, q.n_qubits) * worst));
  }
  a.m = a.n * a.k;
  return a;
}

double shadow_norm_bruteforce(const DenseOperator& o, Ensemble e) {
  const int n = o.n_qubits();
  if (e == Ensemble::Pauli) {
    if (n > 2) throw InfeasibleSizeError("brute-force Pauli shadow norms support n <= 2");
    return max_eigenvalue(frame_moment(all_pauli_frames(n), inverse_map_pauli(o).matrix()));
  }
  if (n != 1) throw InfeasibleSizeError("brute-force Clifford shadow norms support n = 1");
  return max_eigenvalue(clifford_shadow_lhs(o));
}

Matrix clifford_shadow_lhs(const DenseOperator& o) {
  if (o.n_qubits() != 1) throw std::invalid_argument("Clifford enumeration is single-qubit");
  return frame_moment(enumerate_clifford_group(1), inverse_map_clifford(o).matrix());
}

Matrix clifford_third_moment(const DenseOperator& b) {
  if (b.n_qubits() != 1) throw std::invalid_argument("Clifford enumeration is single-qubit");
  return frame_moment(enumerate_clifford_group(1), b.matrix());
}

Matrix third_moment_closed_form(const DenseOperator& b) {
  const double d = static_cast<double>(b.dim());
  const Complex tr = b.trace();
  const Complex tr2 = (b.matrix() * b.matrix()).trace();
  Matrix m = 2.0 * tr * b.matrix() + 2.0 * b.matrix() * b.matrix();
  m.diagonal().array() += tr * tr + tr2;
  return d * m / (d * (d + 1.0) * (d + 2.0));
}

Matrix random_hermitian(int n, RngStream& rng) {
  const auto d = dim_of(n);
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex{rng.normal(), rng.normal()};
  }
  return 0.5 * (g + g.adjoint());
}

Lemma1Report verify_lemma1(int trials, RngStream& rng) {
  Lemma1Report rep;
  rep.trials = trials;
  rep.min_eig_bound = INFINITY;
  rep.min_eig_tight = INFINITY;
  for (int t = 0; t < trials; ++t) {
    const DenseOperator o(1, random_hermitian(1, rng));
    const Matrix lhs = clifford_shadow_lhs(o);
    const Matrix s = s_operator(o).matrix();
    rep.min_eig_bound = std::min(rep.min_eig_bound, min_eigenvalue(2.0 * s - lhs));
    rep.min_eig_tight = std::min(rep.min_eig_tight, min_eigenvalue(s - lhs));
    const DenseOperator b(1, random_hermitian(1, rng));
    const double residual = (clifford_third_moment(b) - third_moment_closed_form(b)).cwiseAbs().maxCoeff();
    rep.max_design_residual = std::max(rep.max_design_residual, residual);
  }
  rep.design_ok = rep.max_design_residual < 1e-10;
  rep.bound_ok = rep.min_eig_bound >= -kStructuralTol;
  rep.tight_ok = rep.min_eig_tight >= -kStructuralTol;
  return rep;
}

}  // namespace procshadow
