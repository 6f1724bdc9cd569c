#include "oracles.hpp"

#include "procshadow/ensembles.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace procshadow;

namespace {

// Dense Pauli operator of a packed tableau row, decoded independently.
Matrix row_operator(std::uint64_t row, int n) {
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  const std::uint64_t x = row & mask;
  const std::uint64_t z = (row >> n) & mask;
  const bool neg = ((row >> (2 * n)) & 1u) != 0;
  std::vector<Matrix> factors;
  for (int q = 0; q < n; ++q) {
    const int bit = n - 1 - q;
    const bool xq = ((x >> bit) & 1u) != 0;
    const bool zq = ((z >> bit) & 1u) != 0;
    factors.push_back(xq && zq ? oracle::py() : xq ? oracle::px() : zq ? oracle::pz() : oracle::id2());
  }
  return oracle::kron_all(factors) * (neg ? -1.0 : 1.0);
}

bool equal_up_to_phase(const Matrix& a, const Matrix& b) {
  const double d = static_cast<double>(a.rows());
  return std::abs(std::abs((a.adjoint() * b).trace()) - d) < 1e-9;
}

}  // namespace

TEST(BitString, IndexLayout) {
  const BitString b = BitString::parse("10");
  EXPECT_EQ(b.index(), 2u);
  EXPECT_EQ(b[0], 1);
  EXPECT_EQ(b[1], 0);
  EXPECT_EQ(b.flipped(1).to_string(), "11");
  EXPECT_THROW(BitString::parse("102"), std::invalid_argument);
  EXPECT_THROW(BitString(2, 4), std::invalid_argument);
}

TEST(Ensemble, ParseIsCaseInsensitive) {
  EXPECT_EQ(parse_ensemble("Clifford"), Ensemble::Clifford);
  EXPECT_EQ(parse_ensemble("pauli"), Ensemble::Pauli);
  EXPECT_THROW(parse_ensemble("haar"), std::invalid_argument);
  EXPECT_EQ(to_string(Ensemble::Clifford), "clifford");
}

TEST(PauliFrame, EigenstatesAndRotations) {
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    for (int b : {0, 1}) {
      const Vector v = axis_eigenstate(a, b);
      const double sign = b == 0 ? 1.0 : -1.0;
      EXPECT_LT((oracle::pauli_of(a) * v - sign * v).norm(), 1e-14);
      // The rotation maps the eigenstate onto |b> up to phase.
      const Vector r = axis_rotation(a) * oracle::eigvec(a, b);
      EXPECT_NEAR(std::abs(r(b)), 1.0, 1e-14);
    }
  }
}

TEST(PauliFrame, FrameStateIsProductEigenstate) {
  const PauliFrame f = PauliFrame::parse("XYZ");
  EXPECT_EQ(f.to_string(), "XYZ");
  for (std::uint64_t idx = 0; idx < 8; ++idx) {
    const BitString b(3, idx);
    const Vector got = frame_state(f, b);
    const Vector want = oracle::pauli_state(f.axes, b);
    EXPECT_NEAR(std::abs(want.dot(got)), 1.0, 1e-13);
  }
}

TEST(CliffordTableau, MatrixConjugatesGeneratorsToRows) {
  RngStream rng(3);
  for (int n : {1, 2, 3}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto spec = sample_clifford(n, rng);
      const auto& t = std::get<CliffordTableau>(spec);
      const Matrix u = t.to_matrix();
      EXPECT_LT((u * u.adjoint() - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff(), 1e-12);
      for (int q = 0; q < n; ++q) {
        std::vector<Matrix> xs(static_cast<std::size_t>(n), oracle::id2());
        std::vector<Matrix> zs = xs;
        xs[static_cast<std::size_t>(q)] = oracle::px();
        zs[static_cast<std::size_t>(q)] = oracle::pz();
        const Matrix ux = u * oracle::kron_all(xs) * u.adjoint();
        const Matrix uz = u * oracle::kron_all(zs) * u.adjoint();
        EXPECT_LT((ux - row_operator(t.rows()[static_cast<std::size_t>(q)], n)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((uz - row_operator(t.rows()[static_cast<std::size_t>(n + q)], n)).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

TEST(CliffordTableau, RejectsNonSymplecticRows) {
  // X and X do not anticommute as an X/Z pair must.
  EXPECT_THROW(CliffordTableau(1, {0b01, 0b01}), std::invalid_argument);
}

TEST(CliffordGroup, EnumerationHasTwentyFourDistinctElements) {
  const auto group = enumerate_clifford_group(1);
  ASSERT_EQ(group.size(), 24u);
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (std::size_t j = i + 1; j < group.size(); ++j) {
      EXPECT_FALSE(equal_up_to_phase(to_matrix(group[i]), to_matrix(group[j])));
    }
  }
  EXPECT_THROW(enumerate_clifford_group(2), std::invalid_argument);
}

TEST(CliffordGroup, SamplerIsUniformOnOneQubit) {
  const auto group = enumerate_clifford_group(1);
  RngStream rng(21);
  const int draws = 24000;
  std::vector<int> counts(group.size(), 0);
  for (int s = 0; s < draws; ++s) {
    const Matrix u = to_matrix(sample_clifford(1, rng));
    int hit = -1;
    for (std::size_t g = 0; g < group.size(); ++g) {
      if (equal_up_to_phase(u, to_matrix(group[g]))) hit = static_cast<int>(g);
    }
    ASSERT_GE(hit, 0);
    ++counts[static_cast<std::size_t>(hit)];
  }
  // Each cell is Binomial(24000, 1/24): mean 1000, sd about 31.
  for (int c : counts) EXPECT_NEAR(c, 1000, 160);
}

TEST(CliffordGroup, TwoQubitSamplerCoversFullGroup) {
  // Tableaux with signs label C_2 mod phase exactly, 11520 elements. The
  // number of distinct values among 2000 uniform draws is 11520 (1 - e^{-2000/11520})
  // ~ 1836 with sd ~ 12; a sampler confined to a proper subgroup lands far below.
  RngStream rng(8);
  std::map<std::vector<std::uint64_t>, int> seen;
  for (int s = 0; s < 2000; ++s) ++seen[std::get<CliffordTableau>(sample_clifford(2, rng)).rows()];
  EXPECT_GT(seen.size(), 1780u);
  EXPECT_LT(seen.size(), 1890u);
}

TEST(Haar, UnitaryAndSeedDeterministic) {
  RngStream a(4);
  RngStream b(4);
  const DenseOperator u = sample_haar_unitary(3, a);
  const DenseOperator v = sample_haar_unitary(3, b);
  EXPECT_EQ(u.matrix(), v.matrix());
  EXPECT_LT((u.matrix() * u.matrix().adjoint() - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Haar, FirstMomentIsMaximallyMixed) {
  RngStream rng(10);
  Matrix acc = Matrix::Zero(2, 2);
  const int draws = 20000;
  for (int s = 0; s < draws; ++s) {
    const Matrix u = sample_haar_unitary(1, rng).matrix();
    acc += u.col(0) * u.col(0).adjoint();
  }
  acc /= draws;
  EXPECT_LT((acc - Matrix::Identity(2, 2) * 0.5).cwiseAbs().maxCoeff(), 0.02);
}

TEST(SampleIndex, ClampsTinyNegativesAndChecksMass) {
  RngStream rng(1);
  const std::vector<double> p{-1e-12, 1.0};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_index(p, rng), 1u);
  const std::vector<double> bad{0.5, 0.2};
  EXPECT_THROW(sample_index(bad, rng), std::invalid_argument);
  const std::vector<double> neg{-0.1, 1.1};
  EXPECT_THROW(sample_index(neg, rng), std::invalid_argument);
}

TEST(FrameMatches, KindsAgreeWithEnsembles) {
  RngStream rng(2);
  EXPECT_TRUE(frame_matches(sample_frame(Ensemble::Pauli, 2, rng), Ensemble::Pauli));
  EXPECT_TRUE(frame_matches(sample_frame(Ensemble::Clifford, 2, rng), Ensemble::Clifford));
  EXPECT_FALSE(frame_matches(sample_frame(Ensemble::Pauli, 2, rng), Ensemble::Clifford));
}
