#include "procshadow/kernels.hpp"

#include "procshadow/shadow_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace procshadow::kernels {
namespace {

std::size_t block_count(std::size_t m) { return (m + kBlockSize - 1) / kBlockSize; }

std::pair<std::size_t, std::size_t> chunk_range(std::size_t total, std::size_t chunks, std::size_t c) {
  return {total * c / chunks, total * (c + 1) / chunks};
}

// Base-6 label keys: digit 2*axis + bit per qubit, most significant first.
constexpr int kMaxBinnedDigits = 6;

std::size_t pow6(int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= 6;
  return r;
}

std::size_t append_key(std::size_t key, const PauliLabels& labels) {
  for (const auto& l : labels) key = key * 6 + static_cast<std::size_t>(2 * static_cast<int>(l.axis) + l.bit);
  return key;
}

Matrix tau_product_from_key(std::size_t key, int digits) {
  std::vector<int> d(static_cast<std::size_t>(digits));
  for (int i = digits - 1; i >= 0; --i) {
    d[static_cast<std::size_t>(i)] = static_cast<int>(key % 6);
    key /= 6;
  }
  Matrix m = pauli_tau(static_cast<Axis>(d[0] / 2), d[0] % 2);
  for (int i = 1; i < digits; ++i) {
    m = kron(m, pauli_tau(static_cast<Axis>(d[static_cast<std::size_t>(i)] / 2), d[static_cast<std::size_t>(i)] % 2));
  }
  return m;
}

bool all_pauli(std::span<const ShadowRecord> records) {
  return std::all_of(records.begin(), records.end(), [](const ShadowRecord& r) {
    return r.ensemble_in == Ensemble::Pauli && r.ensemble_out == Ensemble::Pauli;
  });
}

bool all_pauli(std::span<const StateSnapshot> snapshots) {
  return std::all_of(snapshots.begin(), snapshots.end(),
                     [](const StateSnapshot& s) { return s.ensemble == Ensemble::Pauli; });
}

void require_pauli(std::span<const ShadowRecord> records) {
  if (!all_pauli(records)) throw std::invalid_argument("pair contractions need Pauli frames on both sides");
}

// Sum of count[key] * tau_product(key) over all keys, in fixed chunks.
Matrix sum_binned(const std::vector<std::uint64_t>& counts, int digits, Eigen::Index dim) {
  std::vector<Matrix> partial(kReductionChunks, Matrix::Zero(dim, dim));
#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < kReductionChunks; ++c) {
    const auto [lo, hi] = chunk_range(counts.size(), kReductionChunks, c);
    for (std::size_t key = lo; key < hi; ++key) {
      if (counts[key] != 0) partial[c] += static_cast<double>(counts[key]) * tau_product_from_key(key, digits);
    }
  }
  Matrix total = Matrix::Zero(dim, dim);
  for (const auto& p : partial) total += p;
  return total;
}

template <typename Item, typename KeyFn>
std::vector<std::uint64_t> histogram(std::span<const Item> items, std::size_t bins, KeyFn key) {
  std::vector<std::vector<std::uint64_t>> partial(kReductionChunks);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < kReductionChunks; ++c) {
    const auto [lo, hi] = chunk_range(items.size(), kReductionChunks, c);
    if (lo == hi) continue;
    partial[c].assign(bins, 0);
    for (std::size_t i = lo; i < hi; ++i) ++partial[c][key(items[i])];
  }
  std::vector<std::uint64_t> counts(bins, 0);
  for (const auto& p : partial) {
    for (std::size_t b = 0; b < p.size(); ++b) counts[b] += p[b];
  }
  return counts;
}

template <typename Item, typename Fn>
Matrix chunked_sum(std::span<const Item> items, Eigen::Index dim, Fn materialize) {
  std::vector<Matrix> partial(kReductionChunks, Matrix::Zero(dim, dim));
#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < kReductionChunks; ++c) {
    const auto [lo, hi] = chunk_range(items.size(), kReductionChunks, c);
    for (std::size_t i = lo; i < hi; ++i) partial[c] += materialize(items[i]);
  }
  Matrix total = Matrix::Zero(dim, dim);
  for (const auto& p : partial) total += p;
  return total;
}

// Tr[x^T y] = sum_ab x(a,b) y(a,b).
Complex transpose_overlap(const Matrix& x, const Matrix& y) { return x.cwiseProduct(y).sum(); }

Complex functional_value(const ShadowRecord& r, const Matrix& mt, const Matrix& o, double d) {
  const Complex in = (input_factor(r).cwiseProduct(mt.transpose())).sum();
  const Complex out = (output_factor(r).cwiseProduct(o.transpose())).sum();
  return d * in * out;
}

int record_qubits(std::span<const ShadowRecord> records) { return records.front().b_in.size(); }

}  // namespace

double choi_shadow_square_trace(const ShadowRecord& r) {
  return input_factor(r).squaredNorm() * output_factor(r).squaredNorm();
}

Matrix link_product(const Matrix& x, const Matrix& y, int n_qubits) {
  const Eigen::Index d = dim_of(n_qubits);
  if (x.rows() != d * d || y.rows() != d * d) throw std::invalid_argument("link_product size mismatch");
  Matrix out = Matrix::Zero(d * d, d * d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index a2 = 0; a2 < d; ++a2) {
      // c(i, j) = x(a i, a2 j): the middle-register block of x.
      const Matrix c = x.block(a * d, a2 * d, d, d);
      for (Eigen::Index b = 0; b < d; ++b) {
        for (Eigen::Index b2 = 0; b2 < d; ++b2) {
          Complex s{0.0};
          for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) s += c(i, j) * y(i * d + b, j * d + b2);
          }
          out(a * d + b, a2 * d + b2) = static_cast<double>(d) * s;
        }
      }
    }
  }
  return out;
}

namespace serial {

std::vector<StateSnapshot> acquire_snapshots(const DensityMatrix& rho, Ensemble ensemble, std::size_t m,
                                             std::uint64_t seed, std::uint64_t stream) {
  std::vector<StateSnapshot> out;
  out.reserve(m);
  for (std::size_t b = 0; b < block_count(m); ++b) {
    RngStream rng(seed, {stream, b});
    const std::size_t hi = std::min(m, (b + 1) * kBlockSize);
    for (std::size_t i = b * kBlockSize; i < hi; ++i) out.push_back(acquire_state_snapshot(rho, ensemble, rng));
  }
  return out;
}

std::vector<ShadowRecord> acquire_records(const Channel& ch, Ensemble ensemble_in, Ensemble ensemble_out,
                                          std::size_t m, std::uint64_t seed, std::uint64_t stream) {
  std::vector<ShadowRecord> out;
  out.reserve(m);
  for (std::size_t b = 0; b < block_count(m); ++b) {
    RngStream rng(seed, {stream, b});
    const std::size_t hi = std::min(m, (b + 1) * kBlockSize);
    for (std::size_t i = b * kBlockSize; i < hi; ++i) out.push_back(acquire_record(ch, ensemble_in, ensemble_out, rng));
  }
  return out;
}

Matrix sum_snapshots(std::span<const StateSnapshot> snapshots) {
  if (snapshots.empty()) throw std::invalid_argument("no snapshots to sum");
  const auto d = dim_of(snapshots.front().outcome.size());
  Matrix total = Matrix::Zero(d, d);
  for (const auto& s : snapshots) total += snapshot_matrix(s);
  return total;
}

Matrix sum_choi_shadows(std::span<const ShadowRecord> records) {
  if (records.empty()) throw std::invalid_argument("no records to sum");
  const auto d = dim_of(2 * record_qubits(records));
  Matrix total = Matrix::Zero(d, d);
  for (const auto& r : records) total += materialize_choi_shadow(r).matrix();
  return total;
}

std::vector<double> snapshot_expectations(std::span<const StateSnapshot> snapshots, const Matrix& o) {
  std::vector<double> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) out.push_back((snapshot_matrix(s) * o).trace().real());
  return out;
}

std::vector<Complex> functional_values(std::span<const ShadowRecord> records, const Matrix& mt, const Matrix& o) {
  std::vector<Complex> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    const double d = static_cast<double>(dim_of(r.b_in.size()));
    const Matrix full = materialize_choi_shadow(r).matrix();
    out.push_back(d * (full * kron(mt, o)).trace());
  }
  return out;
}

double distinct_pair_overlap_sum(std::span<const ShadowRecord> records) {
  std::vector<Matrix> zeta;
  zeta.reserve(records.size());
  for (const auto& r : records) zeta.push_back(materialize_choi_shadow(r).matrix());
  double total = 0.0;
  for (std::size_t j = 0; j < zeta.size(); ++j) {
    for (std::size_t k = 0; k < zeta.size(); ++k) {
      if (j != k) total += (zeta[j] * zeta[k]).trace().real();
    }
  }
  return total;
}

PairTerms apply_pairwise(std::span<const ShadowRecord> records, std::span<const StateSnapshot> snapshots) {
  require_pauli(records);
  if (!all_pauli(snapshots)) throw std::invalid_argument("state shadow must use Pauli frames");
  const int n = record_qubits(records);
  const double scale = std::pow(4.0, n);
  PairTerms out{Matrix::Zero(dim_of(n), dim_of(n)), 0.0};
  for (const auto& r : records) {
    const PauliLabels in = record_input_labels(r);
    const Matrix b = output_factor(r);
    for (const auto& s : snapshots) {
      const double w = scale * pair_weight_product(snapshot_labels(s), in);
      out.weighted_sum += w * b;
      out.weight_sum += w;
    }
  }
  return out;
}

PairTerms compose_pairwise(std::span<const ShadowRecord> x, std::span<const ShadowRecord> y) {
  require_pauli(x);
  require_pauli(y);
  const int n = record_qubits(x);
  const double scale = std::pow(4.0, n);
  PairTerms out{Matrix::Zero(dim_of(2 * n), dim_of(2 * n)), 0.0};
  for (const auto& rx : x) {
    const PauliLabels mid = record_output_labels(rx);
    const Matrix a = input_factor(rx);
    for (const auto& ry : y) {
      const double w = scale * pair_weight_product(mid, record_input_labels(ry));
      out.weighted_sum += w * kron(a, output_factor(ry));
      out.weight_sum += w;
    }
  }
  return out;
}

}  // namespace serial

namespace parallel {

std::vector<StateSnapshot> acquire_snapshots(const DensityMatrix& rho, Ensemble ensemble, std::size_t m,
                                             std::uint64_t seed, std::uint64_t stream) {
  std::vector<StateSnapshot> out(m);
  const std::size_t blocks = block_count(m);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t b = 0; b < blocks; ++b) {
    RngStream rng(seed, {stream, b});
    const std::size_t hi = std::min(m, (b + 1) * kBlockSize);
    for (std::size_t i = b * kBlockSize; i < hi; ++i) out[i] = acquire_state_snapshot(rho, ensemble, rng);
  }
  return out;
}

std::vector<ShadowRecord> acquire_records(const Channel& ch, Ensemble ensemble_in, Ensemble ensemble_out,
                                          std::size_t m, std::uint64_t seed, std::uint64_t stream) {
  std::vector<ShadowRecord> out(m);
  const std::size_t blocks = block_count(m);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t b = 0; b < blocks; ++b) {
    RngStream rng(seed, {stream, b});
    const std::size_t hi = std::min(m, (b + 1) * kBlockSize);
    for (std::size_t i = b * kBlockSize; i < hi; ++i) out[i] = acquire_record(ch, ensemble_in, ensemble_out, rng);
  }
  return out;
}

Matrix sum_snapshots(std::span<const StateSnapshot> snapshots) {
  if (snapshots.empty()) throw std::invalid_argument("no snapshots to sum");
  const int n = snapshots.front().outcome.size();
  const auto d = dim_of(n);
  if (all_pauli(snapshots) && n <= kMaxBinnedDigits) {
    const auto counts = histogram(snapshots, pow6(n), [](const StateSnapshot& s) {
      return append_key(0, snapshot_labels(s));
    });
    return sum_binned(counts, n, d);
  }
  return chunked_sum(snapshots, d, [](const StateSnapshot& s) { return snapshot_matrix(s); });
}

Matrix sum_choi_shadows(std::span<const ShadowRecord> records) {
  if (records.empty()) throw std::invalid_argument("no records to sum");
  const int n = record_qubits(records);
  const auto d = dim_of(2 * n);
  if (all_pauli(records) && 2 * n <= kMaxBinnedDigits) {
    const auto counts = histogram(records, pow6(2 * n), [](const ShadowRecord& r) {
      return append_key(append_key(0, record_input_labels(r)), record_output_labels(r));
    });
    return sum_binned(counts, 2 * n, d);
  }
  return chunked_sum(records, d, [](const ShadowRecord& r) { return materialize_choi_shadow(r).matrix(); });
}

std::vector<double> snapshot_expectations(std::span<const StateSnapshot> snapshots, const Matrix& o) {
  std::vector<double> out(snapshots.size());
  const Matrix ot = o.transpose();
  const auto count = static_cast<std::ptrdiff_t>(snapshots.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = snapshot_matrix(snapshots[idx]).cwiseProduct(ot).sum().real();
  }
  return out;
}

std::vector<Complex> functional_values(std::span<const ShadowRecord> records, const Matrix& mt, const Matrix& o) {
  std::vector<Complex> out(records.size());
  if (records.empty()) return out;
  const double d = static_cast<double>(dim_of(record_qubits(records)));
  const auto count = static_cast<std::ptrdiff_t>(records.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = functional_value(records[idx], mt, o, d);
  }
  return out;
}

double distinct_pair_overlap_sum(std::span<const ShadowRecord> records) {
  if (records.size() < 2) return 0.0;
  const Matrix s = sum_choi_shadows(records);
  std::vector<double> partial(kReductionChunks, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < kReductionChunks; ++c) {
    const auto [lo, hi] = chunk_range(records.size(), kReductionChunks, c);
    for (std::size_t i = lo; i < hi; ++i) partial[c] += choi_shadow_square_trace(records[i]);
  }
  double diag = 0.0;
  for (double p : partial) diag += p;
  return s.squaredNorm() - diag;
}

PairTerms apply_pairwise(std::span<const ShadowRecord> records, std::span<const StateSnapshot> snapshots) {
  require_pauli(records);
  if (!all_pauli(snapshots)) throw std::invalid_argument("state shadow must use Pauli frames");
  const int n = record_qubits(records);
  const double d = static_cast<double>(dim_of(n));
  // sum_k 4^n prod_q w(k, j) = 2^n Tr[S^T A_j] with S the summed state shadow.
  const Matrix s = sum_snapshots(snapshots);
  std::vector<Matrix> partial(kReductionChunks, Matrix::Zero(dim_of(n), dim_of(n)));
  std::vector<double> wpartial(kReductionChunks, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < kReductionChunks; ++c) {
    const auto [lo, hi] = chunk_range(records.size(), kReductionChunks, c);
    for (std::size_t i = lo; i < hi; ++i) {
      const double w = d * transpose_overlap(s, input_factor(records[i])).real();
      partial[c] += w * output_factor(records[i]);
      wpartial[c] += w;
    }
  }
  PairTerms out{Matrix::Zero(dim_of(n), dim_of(n)), 0.0};
  for (std::size_t c = 0; c < kReductionChunks; ++c) {
    out.weighted_sum += partial[c];
    out.weight_sum += wpartial[c];
  }
  return out;
}

PairTerms compose_pairwise(std::span<const ShadowRecord> x, std::span<const ShadowRecord> y) {
  require_pauli(x);
  require_pauli(y);
  const int n = record_qubits(x);
  const Matrix sx = sum_choi_shadows(x);
  const Matrix sy = sum_choi_shadows(y);
  PairTerms out{link_product(sx, sy, n), 0.0};
  out.weight_sum = out.weighted_sum.trace().real();
  return out;
}

}  // namespace parallel
}  // namespace procshadow::kernels
