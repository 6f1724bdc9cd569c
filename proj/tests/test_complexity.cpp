#include "oracles.hpp"

#include "procshadow/channels.hpp"
#include "procshadow/complexity.hpp"
#include "procshadow/process_shadows.hpp"

#include <gtest/gtest.h>

using namespace procshadow;

namespace {

Matrix hand_s_operator(const Matrix& o) {
  const Complex tr = o.trace();
  const Complex tr2 = (o * o).trace();
  const Matrix id = Matrix::Identity(o.rows(), o.cols());
  return 2.0 * ((2.0 * tr * tr + tr2) * id + 2.0 * tr * o + 2.0 * o * o);
}

ComplexityQuery pauli_query() {
  ComplexityQuery q;
  q.epsilon = 0.1;
  q.delta = 0.1;
  q.n_qubits = 1;
  q.observables = {ObservableSpec::from_pauli(PauliString::parse("Z"))};
  q.input_states = {ObservableSpec::basis_projector(BitString::parse("0"))};
  return q;
}

}  // namespace

TEST(SOperator, IdentityAndFormula) {
  EXPECT_LT((s_operator(DenseOperator::identity(1)).matrix() - 32.0 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-13);
  RngStream rng(80);
  const Matrix o = random_hermitian(2, rng);
  EXPECT_LT((s_operator(DenseOperator(2, o)).matrix() - hand_s_operator(o)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SOperator, DensityMatricesBoundedByFourteen) {
  RngStream rng(81);
  for (int n : {1, 2, 3}) {
    for (int t = 0; t < 100; ++t) {
      const DensityMatrix rho = random_density_matrix(n, rng);
      EXPECT_LE(operator_norm(s_operator(rho.op())), 14.0 + 1e-9);
    }
  }
}

TEST(FValue, CaseSplit) {
  EXPECT_NEAR(f_value(ObservableSpec::from_pauli(PauliString::parse("ZI")), Ensemble::Pauli), 4.0, 1e-12);
  EXPECT_NEAR(f_value(ObservableSpec::from_pauli(PauliString::parse("ZZ")), Ensemble::Pauli), 16.0, 1e-12);
  const ObservableSpec rho0 = ObservableSpec::basis_projector(BitString::parse("0"));
  EXPECT_LE(f_value(rho0, Ensemble::Clifford), 14.0 + 1e-12);
  const ObservableSpec no_mask{DenseOperator::identity(1), std::nullopt};
  EXPECT_THROW(f_value(no_mask, Ensemble::Pauli), std::invalid_argument);
  EXPECT_NO_THROW(f_value(no_mask, Ensemble::Clifford));
}

TEST(Budget, HandCheckedExample) {
  const ComplexityAnswer a = sample_budget(pauli_query());
  EXPECT_TRUE(a.process);
  EXPECT_EQ(a.k, 6u);
  EXPECT_EQ(a.n, 217600u);
  EXPECT_EQ(a.m, 6u * 217600u);
  ASSERT_EQ(a.per_pair_f_values.size(), 1u);
  EXPECT_NEAR(a.per_pair_f_values[0].f_in, 4.0, 1e-12);
  EXPECT_NEAR(a.per_pair_f_values[0].f_out, 4.0, 1e-12);
}

TEST(Budget, CliffordInputAndMonotoneDelta) {
  ComplexityQuery q = pauli_query();
  q.ensemble_in = Ensemble::Clifford;
  const ComplexityAnswer a = sample_budget(q);
  // S(|0><0|) = 2 (3 I + 4 |0><0|), norm 14: the density-matrix bound is attained
  EXPECT_NEAR(a.per_pair_f_values[0].f_in, 14.0, 1e-12);
  EXPECT_EQ(a.n, 761600u);
  std::uint64_t prev = 0;
  for (double delta : {0.5, 0.1, 0.01, 1e-4}) {
    q.delta = delta;
    const auto b = sample_budget(q);
    EXPECT_GE(b.k, prev);
    EXPECT_EQ(b.n, a.n);
    prev = b.k;
  }
}

TEST(Budget, StateModeReportsBothBounds) {
  ComplexityQuery q;
  q.n_qubits = 2;
  q.observables = {ObservableSpec::from_pauli(PauliString::parse("ZI")),
                   ObservableSpec::from_pauli(PauliString::parse("XX"))};
  const ComplexityAnswer a = sample_budget(q);
  EXPECT_FALSE(a.process);
  EXPECT_EQ(a.k, tolerant_ceil(2.0 * std::log(40.0)));
  ASSERT_EQ(a.state_bounds.size(), 2u);
  EXPECT_NEAR(a.state_bounds[1].shifted, 16.0, 1e-12);
  EXPECT_NEAR(a.state_bounds[1].unshifted, 16.0, 1e-12);
  EXPECT_EQ(a.n, tolerant_ceil(3400.0 * 16.0));

  q.ensemble_out = Ensemble::Clifford;
  const ComplexityAnswer c = sample_budget(q);
  // traceless Pauli on two qubits: 3 Tr(O^2) = 12
  EXPECT_NEAR(c.state_bounds[0].shifted, 12.0, 1e-12);
  EXPECT_NEAR(c.state_bounds[0].unshifted, operator_norm(hand_s_operator(PauliString::parse("ZI").to_operator().matrix())), 1e-12);
}

TEST(Budget, Validation) {
  ComplexityQuery q = pauli_query();
  q.epsilon = 0.0;
  EXPECT_THROW(sample_budget(q), std::invalid_argument);
  q = pauli_query();
  q.observables.clear();
  EXPECT_THROW(sample_budget(q), std::invalid_argument);
  q = pauli_query();
  q.n_qubits = 2;
  EXPECT_THROW(sample_budget(q), std::invalid_argument);
}

TEST(TolerantCeil, IgnoresRoundingNoise) {
  EXPECT_EQ(tolerant_ceil(6.0), 6u);
  EXPECT_EQ(tolerant_ceil(6.0 * (1 + 1e-13)), 6u);
  EXPECT_EQ(tolerant_ceil(6.01), 7u);
  EXPECT_EQ(tolerant_ceil(217600.00000000003), 217600u);
  EXPECT_EQ(tolerant_ceil(2.0 * std::log(20.0)), 6u);
  EXPECT_THROW(tolerant_ceil(-1.0), std::invalid_argument);
}

TEST(ShadowNorm, BruteForceWithinClosedFormBounds) {
  EXPECT_LE(shadow_norm_bruteforce(PauliString::parse("Z").to_operator(), Ensemble::Pauli), 4.0 + 1e-12);
  // exact single-qubit Pauli value: E_frame sum_b <b|M^-1(Z)|b>^2 over the Z frame is 9/3 = 3
  EXPECT_NEAR(shadow_norm_bruteforce(PauliString::parse("Z").to_operator(), Ensemble::Pauli), 3.0, 1e-12);
  EXPECT_NEAR(shadow_norm_bruteforce(PauliString::parse("ZZ").to_operator(), Ensemble::Pauli), 9.0, 1e-12);
  RngStream rng(82);
  for (int t = 0; t < 20; ++t) {
    Matrix o = random_hermitian(1, rng);
    o.diagonal().array() -= o.trace() / 2.0;
    const DenseOperator od(1, o);
    EXPECT_LE(shadow_norm_bruteforce(od, Ensemble::Clifford), 3.0 * (o * o).trace().real() + 1e-9);
    const double opn = operator_norm(o);
    EXPECT_LE(shadow_norm_bruteforce(od, Ensemble::Pauli), 4.0 * opn * opn + 1e-9);
  }
  EXPECT_NEAR(shadow_norm_bruteforce(DenseOperator::zero(1), Ensemble::Clifford), 0.0, 1e-14);
  EXPECT_THROW(shadow_norm_bruteforce(DenseOperator::identity(3), Ensemble::Pauli), InfeasibleSizeError);
}

TEST(Lemma1, DesignIdentityAndBound) {
  RngStream rng(83);
  const Lemma1Report r = verify_lemma1(100, rng);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.design_ok);
  EXPECT_LT(r.max_design_residual, 1e-10);
  EXPECT_GE(r.min_eig_bound, -1e-9);
  EXPECT_TRUE(r.tight_ok);
  // identity operator: the 3-design identity in closed form
  const DenseOperator id = DenseOperator::identity(1);
  EXPECT_LT((clifford_third_moment(id) - third_moment_closed_form(id)).cwiseAbs().maxCoeff(), 1e-12);
  // E_U sum_b U^dag|b><b|U = I, each weighted by <b|U I U^dag|b>^2 = 1
  EXPECT_LT((clifford_third_moment(id) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SingleShotVariance, BelowTheoremProxy) {
  RngStream rng(84);
  for (int n : {1, 2}) {
    for (int t = 0; t < 5; ++t) {
      const Channel ch = random_full_rank_channel(n, rng);
      const PauliString o_p = PauliString::single(n, n - 1, PauliLetter::Z);
      const DensityMatrix rho = random_density_matrix(n, rng);
      const ProcessShadow ps = acquire_process_shadow(ch, Ensemble::Pauli, Ensemble::Pauli, 20000, 5, t);
      const auto v = functional_samples(ps, rho.op(), o_p.to_operator());
      double mean = 0.0;
      for (const auto& x : v) mean += x.real();
      mean /= static_cast<double>(v.size());
      double var = 0.0;
      for (const auto& x : v) var += (x.real() - mean) * (x.real() - mean);
      var /= static_cast<double>(v.size() - 1);
      // f_in for a density matrix with full support is 4^n ||rho||^2 <= 4^n
      const double proxy = std::pow(4.0, n) * f_value(ObservableSpec{rho.op(), (1u << n) - 1}, Ensemble::Pauli) *
                           f_value(ObservableSpec::from_pauli(o_p), Ensemble::Pauli);
      EXPECT_LE(var, proxy);
    }
  }
}
