#include "oracles.hpp"

#include "procshadow/channels.hpp"
#include "procshadow/kernels.hpp"
#include "procshadow/shadow_algebra.hpp"

#include <gtest/gtest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace procshadow;
namespace ks = procshadow::kernels;

namespace {

void set_threads(int t) {
#ifdef _OPENMP
  omp_set_num_threads(t);
#else
  (void)t;
#endif
}

bool same_record(const ShadowRecord& a, const ShadowRecord& b) {
  return a.b_in == b.b_in && a.b_out == b.b_out && a.u_in == b.u_in && a.u_out == b.u_out &&
         a.ensemble_in == b.ensemble_in && a.ensemble_out == b.ensemble_out;
}

double rel(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff()); }

class Kernels : public ::testing::TestWithParam<std::pair<Ensemble, Ensemble>> {};

}  // namespace

TEST_P(Kernels, SerialAndParallelAcquisitionAgree) {
  const auto [ein, eout] = GetParam();
  RngStream rng(50);
  const Channel ch = random_full_rank_channel(2, rng);
  const std::size_t m = 2 * ks::kBlockSize + 77;
  const auto ref = ks::serial::acquire_records(ch, ein, eout, m, 9, 4);
  for (int threads : {1, 3}) {
    set_threads(threads);
    const auto par = ks::parallel::acquire_records(ch, ein, eout, m, 9, 4);
    ASSERT_EQ(par.size(), ref.size());
    for (std::size_t j = 0; j < m; ++j) ASSERT_TRUE(same_record(par[j], ref[j])) << "record " << j;
  }
  set_threads(1);
}

TEST_P(Kernels, SumsAndFunctionalsAgree) {
  const auto [ein, eout] = GetParam();
  RngStream rng(51);
  const Channel ch = random_full_rank_channel(2, rng);
  const auto recs = ks::serial::acquire_records(ch, ein, eout, 1500, 2, 0);
  EXPECT_LT(rel(ks::parallel::sum_choi_shadows(recs), ks::serial::sum_choi_shadows(recs)), 1e-12);

  const Matrix mt = oracle::random_state(2, 3).transpose();
  const Matrix o = PauliString::parse("ZX").to_operator().matrix();
  const auto a = ks::serial::functional_values(recs, mt, o);
  const auto b = ks::parallel::functional_values(recs, mt, o);
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_LT(std::abs(a[j] - b[j]), 1e-12);

  const double s = ks::serial::distinct_pair_overlap_sum(std::span(recs).first(300));
  const double p = ks::parallel::distinct_pair_overlap_sum(std::span(recs).first(300));
  EXPECT_NEAR(p, s, 1e-9 * std::max(1.0, std::abs(s)));
}

INSTANTIATE_TEST_SUITE_P(Ensembles, Kernels,
                         ::testing::Values(std::pair{Ensemble::Pauli, Ensemble::Pauli},
                                           std::pair{Ensemble::Clifford, Ensemble::Pauli},
                                           std::pair{Ensemble::Pauli, Ensemble::Clifford},
                                           std::pair{Ensemble::Clifford, Ensemble::Clifford}));

TEST(KernelsSnapshots, SerialAndParallelAgree) {
  const DensityMatrix rho(DenseOperator(3, oracle::random_state(3, 4)));
  for (Ensemble e : {Ensemble::Pauli, Ensemble::Clifford}) {
    const auto ref = ks::serial::acquire_snapshots(rho, e, 3000, 5, 1);
    const auto par = ks::parallel::acquire_snapshots(rho, e, 3000, 5, 1);
    ASSERT_EQ(ref.size(), par.size());
    for (std::size_t j = 0; j < ref.size(); ++j) {
      ASSERT_TRUE(ref[j].frame == par[j].frame && ref[j].outcome == par[j].outcome);
    }
    EXPECT_LT(rel(ks::parallel::sum_snapshots(par), ks::serial::sum_snapshots(ref)), 1e-12);
    const Matrix o = PauliString::parse("XYZ").to_operator().matrix();
    const auto a = ks::serial::snapshot_expectations(ref, o);
    const auto b = ks::parallel::snapshot_expectations(par, o);
    for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(a[j], b[j], 1e-12);
  }
}

TEST(KernelsPairs, FactorizedApplyMatchesExplicitLoop) {
  RngStream rng(52);
  for (int n : {1, 2, 3}) {
    const Channel ch = random_full_rank_channel(std::min(n, 2), rng);
    const Channel use = n == 3 ? random_unitary_channel(3, rng) : ch;
    const auto recs = ks::serial::acquire_records(use, Ensemble::Pauli, Ensemble::Pauli, 120, 1, 0);
    const DensityMatrix rho(DenseOperator(n, oracle::random_state(n, 5)));
    const auto snaps = ks::serial::acquire_snapshots(rho, Ensemble::Pauli, 90, 1, 1);
    const auto s = ks::serial::apply_pairwise(recs, snaps);
    const auto p = ks::parallel::apply_pairwise(recs, snaps);
    EXPECT_LT(rel(p.weighted_sum, s.weighted_sum), 1e-10);
    EXPECT_NEAR(p.weight_sum, s.weight_sum, 1e-9 * std::max(1.0, std::abs(s.weight_sum)));
  }
}

TEST(KernelsPairs, FactorizedComposeMatchesExplicitLoop) {
  RngStream rng(53);
  for (int n : {1, 2}) {
    const Channel x = random_full_rank_channel(n, rng);
    const Channel y = random_unitary_channel(n, rng);
    const auto rx = ks::serial::acquire_records(x, Ensemble::Pauli, Ensemble::Pauli, 60, 1, 0);
    const auto ry = ks::serial::acquire_records(y, Ensemble::Pauli, Ensemble::Pauli, 70, 1, 1);
    const auto s = ks::serial::compose_pairwise(rx, ry);
    const auto p = ks::parallel::compose_pairwise(rx, ry);
    EXPECT_LT(rel(p.weighted_sum, s.weighted_sum), 1e-10);
    EXPECT_NEAR(p.weight_sum, s.weight_sum, 1e-9 * std::max(1.0, std::abs(s.weight_sum)));
  }
}

TEST(KernelsDeterminism, ResultsIndependentOfThreadCount) {
  RngStream rng(54);
  const Channel ch = random_full_rank_channel(2, rng);
  const DensityMatrix rho(DenseOperator(2, oracle::random_state(2, 6)));
  set_threads(1);
  const auto recs1 = ks::parallel::acquire_records(ch, Ensemble::Pauli, Ensemble::Pauli, 5000, 3, 0);
  const auto snaps1 = ks::parallel::acquire_snapshots(rho, Ensemble::Pauli, 5000, 3, 1);
  const Matrix sum1 = ks::parallel::sum_choi_shadows(recs1);
  const Matrix app1 = ks::parallel::apply_pairwise(recs1, snaps1).weighted_sum;
  const double ov1 = ks::parallel::distinct_pair_overlap_sum(recs1);
  for (int threads : {2, 4, 7}) {
    set_threads(threads);
    const auto recs = ks::parallel::acquire_records(ch, Ensemble::Pauli, Ensemble::Pauli, 5000, 3, 0);
    const auto snaps = ks::parallel::acquire_snapshots(rho, Ensemble::Pauli, 5000, 3, 1);
    EXPECT_EQ(ks::parallel::sum_choi_shadows(recs), sum1);
    EXPECT_EQ(ks::parallel::apply_pairwise(recs, snaps).weighted_sum, app1);
    EXPECT_EQ(ks::parallel::distinct_pair_overlap_sum(recs), ov1);
  }
  set_threads(1);
}

TEST(LinkProduct, ComposesExactChoiMatrices) {
  RngStream rng(55);
  for (int n : {1, 2}) {
    const Channel x = random_full_rank_channel(n, rng);
    const Channel y = random_full_rank_channel(n, rng);
    const Matrix got = ks::link_product(oracle::normalized_choi(x.kraus()), oracle::normalized_choi(y.kraus()), n);
    EXPECT_LT((got - oracle::normalized_choi(x.then(y).kraus())).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ChoiShadowSquareTrace, MatchesDense) {
  RngStream rng(56);
  const Channel ch = random_full_rank_channel(2, rng);
  for (Ensemble e : {Ensemble::Pauli, Ensemble::Clifford}) {
    const auto recs = ks::serial::acquire_records(ch, e, e, 20, 1, 0);
    for (const auto& r : recs) {
      const Matrix z = materialize_choi_shadow(r).matrix();
      EXPECT_NEAR(ks::choi_shadow_square_trace(r), (z * z).trace().real(), 1e-9);
    }
  }
}
