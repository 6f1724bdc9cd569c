#include "oracles.hpp"

#include "procshadow/channels.hpp"
#include "procshadow/process_shadows.hpp"

#include <gtest/gtest.h>

using namespace procshadow;

namespace {

Matrix expected_choi_shadow(const std::vector<oracle::Weighted<ShadowRecord>>& dist) {
  Matrix acc;
  for (const auto& w : dist) {
    const Matrix z = materialize_choi_shadow(w.item).matrix();
    if (acc.size() == 0) acc = Matrix::Zero(z.rows(), z.cols());
    acc += w.p * z;
  }
  return acc;
}

}  // namespace

TEST(ChoiShadow, ExhaustivePauliAverageIsNormalizedChoi) {
  RngStream rng(31);
  for (int n : {1, 2}) {
    for (int trial = 0; trial < 3; ++trial) {
      const Channel ch = trial == 0 ? random_unitary_channel(n, rng) : random_full_rank_channel(n, rng);
      const auto frames = oracle::pauli_frames(n);
      const auto dist = oracle::record_distribution(ch.kraus(), n, frames, Ensemble::Pauli, frames, Ensemble::Pauli);
      EXPECT_LT((expected_choi_shadow(dist) - oracle::normalized_choi(ch.kraus())).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(ChoiShadow, ExhaustiveCliffordAndMixedEnsembles) {
  RngStream rng(32);
  const Channel ch = random_full_rank_channel(1, rng);
  const auto cliffords = enumerate_clifford_group(1);
  const auto paulis = oracle::pauli_frames(1);
  const Matrix want = oracle::normalized_choi(ch.kraus());
  const auto cc = oracle::record_distribution(ch.kraus(), 1, cliffords, Ensemble::Clifford, cliffords, Ensemble::Clifford);
  const auto pc = oracle::record_distribution(ch.kraus(), 1, paulis, Ensemble::Pauli, cliffords, Ensemble::Clifford);
  const auto cp = oracle::record_distribution(ch.kraus(), 1, cliffords, Ensemble::Clifford, paulis, Ensemble::Pauli);
  EXPECT_LT((expected_choi_shadow(cc) - want).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((expected_choi_shadow(pc) - want).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((expected_choi_shadow(cp) - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ChoiShadow, FactorsAndTrace) {
  RngStream rng(33);
  const Channel ch = random_full_rank_channel(2, rng);
  for (Ensemble ein : {Ensemble::Pauli, Ensemble::Clifford}) {
    for (Ensemble eout : {Ensemble::Pauli, Ensemble::Clifford}) {
      const ProcessShadow ps = acquire_process_shadow(ch, ein, eout, 50, 3);
      for (const auto& r : ps.records()) {
        EXPECT_LT((input_factor(r) - input_factor_dense(r)).cwiseAbs().maxCoeff(), 1e-12);
        const DenseOperator z = materialize_choi_shadow(r);
        EXPECT_NEAR(z.trace().real(), 1.0, 1e-12);
        EXPECT_LT(z.hermiticity_defect(), 1e-12);
      }
    }
  }
}

TEST(ChoiShadow, InputRegisterBitsFlipOnY) {
  ShadowRecord r{BitString::parse("010"), PauliFrame::parse("YYZ"), PauliFrame::parse("ZZZ"), BitString::parse("000"),
                 Ensemble::Pauli, Ensemble::Pauli};
  EXPECT_EQ(input_register_bits(r).to_string(), "100");
}

TEST(ProcessShadow, ReconstructionConverges) {
  RngStream rng(34);
  const Channel ch = random_unitary_channel(1, rng);
  const ProcessShadow ps = acquire_process_shadow(ch, Ensemble::Pauli, Ensemble::Pauli, 40000, 5);
  const ChoiMatrix zeta = reconstruct_choi(ps);
  EXPECT_TRUE(zeta.normalized());
  EXPECT_NEAR(zeta.op().trace().real(), 1.0, 1e-12);
  EXPECT_LT(operator_norm(zeta.op().matrix() - oracle::normalized_choi(ch.kraus())), 0.08);
}

TEST(ProcessShadow, FunctionalEstimate) {
  RngStream rng(35);
  const Channel ch = random_full_rank_channel(1, rng);
  const Matrix rho = oracle::random_state(1, 12);
  const DenseOperator z = PauliString::parse("Z").to_operator();
  const double exact = (oracle::apply_kraus(ch.kraus(), rho) * z.matrix()).trace().real();
  const ProcessShadow ps = acquire_process_shadow(ch, Ensemble::Pauli, Ensemble::Pauli, 50000, 6);
  // single-shot sd is at most 8 here, so 0.1 is about three standard errors
  EXPECT_NEAR(estimate_channel_functional(ps, DenseOperator(1, rho), z, 1), exact, 0.1);
  EXPECT_NEAR(estimate_channel_functional(ps, DenseOperator(1, rho), z, 6), exact, 0.12);
}

TEST(ProcessShadow, FunctionalSamplesMatchDenseTrace) {
  RngStream rng(36);
  const Channel ch = random_full_rank_channel(2, rng);
  const ProcessShadow ps = acquire_process_shadow(ch, Ensemble::Clifford, Ensemble::Pauli, 30, 7);
  const DenseOperator m(2, oracle::random_state(2, 13));
  const DenseOperator o = PauliString::parse("XY").to_operator();
  const auto vals = functional_samples(ps, m, o);
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const Matrix z = materialize_choi_shadow(ps.records()[j]).matrix();
    const Complex want = 4.0 * (z * oracle::kron(m.matrix().transpose(), o.matrix())).trace();
    EXPECT_LT(std::abs(vals[j] - want), 1e-12);
  }
}

TEST(ProcessShadow, RejectsInconsistentRecords) {
  const ShadowRecord r{BitString(1, 0), PauliFrame::parse("X"), PauliFrame::parse("Z"), BitString(1, 1),
                       Ensemble::Pauli, Ensemble::Pauli};
  EXPECT_NO_THROW(ProcessShadow(1, Ensemble::Pauli, Ensemble::Pauli, {r}));
  EXPECT_THROW(ProcessShadow(1, Ensemble::Pauli, Ensemble::Clifford, {r}), std::invalid_argument);
  EXPECT_THROW(ProcessShadow(2, Ensemble::Pauli, Ensemble::Pauli, {r}), std::invalid_argument);
  ShadowRecord wrong_kind = r;
  wrong_kind.ensemble_out = Ensemble::Clifford;
  EXPECT_THROW(ProcessShadow(1, Ensemble::Pauli, Ensemble::Clifford, {wrong_kind}), std::invalid_argument);
  EXPECT_THROW(reconstruct_choi(ProcessShadow(1, Ensemble::Pauli, Ensemble::Pauli, {})), std::invalid_argument);
}

TEST(ProcessShadow, SliceKeepsOrder) {
  const ProcessShadow ps = acquire_process_shadow(named_channel("hadamard", 1), Ensemble::Pauli, Ensemble::Pauli, 10, 1);
  const ProcessShadow s = ps.slice(3, 7);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s.records()[0].b_out, ps.records()[3].b_out);
  EXPECT_EQ(ps.slice(5, 11).size(), 5u);
  EXPECT_EQ(ps.slice(8, 2).size(), 0u);
}

TEST(BinIndependence, HoldsForRandomChannels) {
  RngStream rng(37);
  for (int t = 0; t < 3; ++t) {
    const Channel ch = random_full_rank_channel(2, rng);
    for (Ensemble e : {Ensemble::Pauli, Ensemble::Clifford}) {
      const BinIndependenceReport rep = verify_bin_independence(ch, 20, rng, e);
      EXPECT_TRUE(rep.passed());
      EXPECT_EQ(rep.pauli_strings_checked, 15);
      EXPECT_LT(rep.max_normalization_defect, 1e-9);
    }
  }
}

TEST(BinIndependence, FailsWithoutTracePreservation) {
  RngStream rng(38);
  Matrix k = Matrix::Zero(2, 2);
  k(0, 0) = 1.0;
  const BinIndependenceReport rep = verify_bin_independence(Channel::unchecked(1, {k}), 10, rng);
  EXPECT_FALSE(rep.passed());
}
