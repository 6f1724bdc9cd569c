#include "oracles.hpp"

#include "procshadow/channels.hpp"

#include <gtest/gtest.h>

using namespace procshadow;

namespace {

Matrix act(const Channel& ch, const Matrix& rho) { return oracle::apply_kraus(ch.kraus(), rho); }

double maxdiff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(NamedChannels, IdentityPauliXHadamard) {
  const Matrix rho = oracle::random_state(2, 1);
  EXPECT_LT(maxdiff(act(named_channel("identity", 2), rho), rho), 1e-15);
  const Matrix x0 = oracle::kron(oracle::px(), oracle::id2());
  EXPECT_LT(maxdiff(act(named_channel("pauli-x", 2), rho), x0 * rho * x0), 1e-15);
  const Matrix h = (oracle::px() + oracle::pz()) / std::sqrt(2.0);
  const Matrix hh = oracle::kron(h, h);
  EXPECT_LT(maxdiff(act(named_channel("hadamard", 2), rho), hh * rho * hh), 1e-14);
}

TEST(NamedChannels, FullDepolarizingHasFlatChoi) {
  const Channel dep = named_channel("depolarizing", 1, 1.0);
  EXPECT_LT(maxdiff(oracle::normalized_choi(dep.kraus()), Matrix::Identity(4, 4) / 4.0), 1e-14);
  EXPECT_LT(maxdiff(choi_of_channel(dep).op().matrix(), Matrix::Identity(4, 4) / 2.0), 1e-14);
  const Matrix rho = oracle::random_state(2, 2);
  EXPECT_LT(maxdiff(act(named_channel("depolarizing", 2, 1.0), rho), Matrix::Identity(4, 4) / 4.0), 1e-14);
  const double p = 0.3;
  EXPECT_LT(maxdiff(act(named_channel("depolarizing", 2, p), rho), (1 - p) * rho + p * Matrix::Identity(4, 4) / 4.0),
            1e-14);
}

TEST(NamedChannels, DephasingAndAmplitudeDamping) {
  const Matrix rho = oracle::random_state(1, 3);
  const double p = 0.4;
  Matrix want = rho;
  want(0, 1) *= 1 - p;
  want(1, 0) *= 1 - p;
  EXPECT_LT(maxdiff(act(named_channel("dephasing", 1, p), rho), want), 1e-14);

  const double g = 0.25;
  Matrix ad(2, 2);
  ad << rho(0, 0) + g * rho(1, 1), std::sqrt(1 - g) * rho(0, 1), std::sqrt(1 - g) * rho(1, 0), (1 - g) * rho(1, 1);
  EXPECT_LT(maxdiff(act(named_channel("amplitude-damping", 1, g), rho), ad), 1e-14);
  EXPECT_LT(maxdiff(act(named_channel("amplitude-damping", 1, 0.0), rho), rho), 1e-15);

  const Matrix rho2 = oracle::random_state(2, 4);
  Matrix zero = Matrix::Zero(4, 4);
  zero(0, 0) = 1.0;
  EXPECT_LT(maxdiff(act(named_channel("amplitude-damping", 2, 1.0), rho2), zero), 1e-14);
}

TEST(NamedChannels, ParsingAndErrors) {
  const Channel c = parse_named_channel("depolarizing:0.25", 1);
  EXPECT_NEAR(c.trace_preservation_defect(), 0.0, 1e-14);
  EXPECT_EQ(parse_named_channel("identity", 3).n_qubits(), 3);
  EXPECT_THROW(parse_named_channel("bogus", 1), std::invalid_argument);
  EXPECT_THROW(parse_named_channel("dephasing:1.5", 1), std::invalid_argument);
  EXPECT_THROW(parse_named_channel("dephasing:abc", 1), std::invalid_argument);
  EXPECT_THROW(parse_named_channel("dephasing:", 1), std::invalid_argument);
  EXPECT_THROW(named_channel("identity", 9), InfeasibleSizeError);
}

TEST(RandomChannels, UnitaryChannelIsPure) {
  RngStream rng(90);
  for (int n : {1, 2, 3}) {
    const Channel ch = random_unitary_channel(n, rng);
    ASSERT_EQ(ch.kraus().size(), 1u);
    const Matrix eta = choi_of_channel(ch).op().matrix();
    EXPECT_NEAR((eta * eta).trace().real(), std::pow(4.0, n), 1e-9);
  }
  EXPECT_THROW(random_unitary_channel(5, rng), InfeasibleSizeError);
  RngStream a(3);
  RngStream b(3);
  EXPECT_EQ(random_unitary_channel(2, a).kraus().front(), random_unitary_channel(2, b).kraus().front());
}

TEST(RandomChannels, DilationMatchesKrausForm) {
  RngStream rng(91);
  for (int n : {1, 2}) {
    const Dilation dil = random_dilation(n, rng);
    EXPECT_EQ(dil.n_anc, 2 * n);
    const Channel ch = channel_of_dilation(dil);
    EXPECT_LT(ch.trace_preservation_defect(), 1e-12);
    const Matrix rho = oracle::random_state(n, 10 + n);
    EXPECT_LT(maxdiff(apply_dilation(dil, DenseOperator(n, rho)).matrix(), act(ch, rho)), 1e-12);
  }
}

TEST(RandomChannels, FullRankChoi) {
  RngStream rng(92);
  for (int n : {1, 2}) {
    const Channel ch = random_full_rank_channel(n, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(choi_of_channel(ch).op().matrix());
    EXPECT_GT(es.eigenvalues().minCoeff(), 1e-6);
  }
  EXPECT_THROW(random_full_rank_channel(3, rng), InfeasibleSizeError);
}

TEST(RandomChannels, DensityMatricesAreValid) {
  RngStream rng(93);
  for (int n : {1, 2, 3}) {
    const DensityMatrix rho = random_density_matrix(n, rng);
    EXPECT_NEAR(rho.op().trace().real(), 1.0, 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.op().matrix());
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
  }
}
