// Serial reference kernels against their OpenMP counterparts.
// Thread count follows OMP_NUM_THREADS.

#include "procshadow/channels.hpp"
#include "procshadow/kernels.hpp"

#include <benchmark/benchmark.h>

#include <map>

using namespace procshadow;

namespace {

Channel bench_channel(int n) {
  RngStream rng(42);
  return n <= 2 ? random_full_rank_channel(n, rng) : random_unitary_channel(n, rng);
}

const std::vector<ShadowRecord>& records(int n, std::size_t m) {
  static std::map<std::pair<int, std::size_t>, std::vector<ShadowRecord>> cache;
  auto& r = cache[{n, m}];
  if (r.empty()) r = kernels::parallel::acquire_records(bench_channel(n), Ensemble::Pauli, Ensemble::Pauli, m, 1, 0);
  return r;
}

template <bool Parallel>
void acquire(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const Channel ch = bench_channel(n);
  for (auto _ : st) {
    auto r = Parallel ? kernels::parallel::acquire_records(ch, Ensemble::Pauli, Ensemble::Pauli, 4096, 1, 0)
                      : kernels::serial::acquire_records(ch, Ensemble::Pauli, Ensemble::Pauli, 4096, 1, 0);
    benchmark::DoNotOptimize(r.data());
  }
  st.SetItemsProcessed(st.iterations() * 4096);
}

template <bool Parallel>
void choi_sum(benchmark::State& st) {
  const auto& r = records(static_cast<int>(st.range(0)), 20000);
  for (auto _ : st) {
    Matrix s = Parallel ? kernels::parallel::sum_choi_shadows(r) : kernels::serial::sum_choi_shadows(r);
    benchmark::DoNotOptimize(s.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(r.size()));
}

template <bool Parallel>
void overlap(benchmark::State& st) {
  const auto& r = records(1, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    double v = Parallel ? kernels::parallel::distinct_pair_overlap_sum(r) : kernels::serial::distinct_pair_overlap_sum(r);
    benchmark::DoNotOptimize(v);
  }
}

template <bool Parallel>
void compose(benchmark::State& st) {
  const auto& x = records(1, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    auto t = Parallel ? kernels::parallel::compose_pairwise(x, x) : kernels::serial::compose_pairwise(x, x);
    benchmark::DoNotOptimize(t.weight_sum);
  }
}

}  // namespace

BENCHMARK(acquire<false>)->Name("acquire/serial")->Arg(1)->Arg(2)->Arg(3);
BENCHMARK(acquire<true>)->Name("acquire/parallel")->Arg(1)->Arg(2)->Arg(3);
BENCHMARK(choi_sum<false>)->Name("choi_sum/serial")->Arg(1)->Arg(2);
BENCHMARK(choi_sum<true>)->Name("choi_sum/parallel")->Arg(1)->Arg(2);
BENCHMARK(overlap<false>)->Name("pair_overlap/serial")->Arg(500)->Arg(2000);
BENCHMARK(overlap<true>)->Name("pair_overlap/parallel")->Arg(500)->Arg(2000);
BENCHMARK(compose<false>)->Name("compose/serial")->Arg(300)->Arg(1000);
BENCHMARK(compose<true>)->Name("compose/parallel")->Arg(300)->Arg(1000);

BENCHMARK_MAIN();
