#include "procshadow/applications.hpp"

#include "procshadow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace procshadow {
namespace {

Matrix basis_projector(const BitString& b) {
  const auto d = dim_of(b.size());
  Matrix p = Matrix::Zero(d, d);
  p(static_cast<Eigen::Index>(b.index()), static_cast<Eigen::Index>(b.index())) = 1.0;
  return p;
}

Matrix inserted_input(const CorrelatorSpec& spec) {
  const int n = spec.input_state.n_qubits();
  if (spec.op_early.n_qubits() != n || spec.op_late.n_qubits() != n) {
    throw std::invalid_argument("correlator operators differ in size from the input state");
  }
  return spec.input_state.matrix() * spec.op_early.to_operator().matrix();
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return (1.0 - t) * v[lo] + t * v[hi];
}

}  // namespace

TransitionEstimate transition_probability(const ProcessShadow& ps, const BitString& i, const BitString& f, int k) {
  if (i.size() != ps.n_qubits() || f.size() != ps.n_qubits()) throw std::invalid_argument("bit string size mismatch");
  const int n = ps.n_qubits();
  const double raw =
      estimate_channel_functional(ps, DenseOperator(n, basis_projector(i)), DenseOperator(n, basis_projector(f)), k);
  return {raw, std::clamp(raw, 0.0, 1.0)};
}

Complex correlator_exact(const Channel& ch, const CorrelatorSpec& spec) {
  const int n = ch.n_qubits();
  const DenseOperator out = apply_channel(ch, DenseOperator(n, inserted_input(spec)));
  return (out.matrix() * spec.op_late.to_operator().matrix()).trace();
}

std::vector<Complex> correlator_samples_generic(const ProcessShadow& ps, const CorrelatorSpec& spec) {
  const int n = ps.n_qubits();
  return functional_samples(ps, DenseOperator(n, inserted_input(spec)), spec.op_late.to_operator());
}

bool fast_path_applies(const ProcessShadow& ps, const CorrelatorSpec& spec) {
  return ps.ensemble_out() == Ensemble::Pauli && spec.op_late.support() == 1;
}

std::vector<Complex> correlator_samples_fast(const ProcessShadow& ps, const CorrelatorSpec& spec) {
  if (!fast_path_applies(ps, spec)) throw std::invalid_argument("fast correlator path needs Pauli output frames and a one-site B");
  const int site = spec.op_late.support_sites().front();
  const auto letter = spec.op_late[site];
  // Axis order X, Y, Z matches PauliLetter X, Y, Z shifted by one.
  const auto axis = static_cast<Axis>(static_cast<int>(letter) - 1);
  const Matrix mt = inserted_input(spec).transpose();
  const double d = static_cast<double>(dim_of(ps.n_qubits()));
  const auto& records = ps.records();
  std::vector<Complex> out(records.size(), Complex{0.0});
  const auto count = static_cast<std::ptrdiff_t>(records.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    if (std::get<PauliFrame>(r.u_out).axes[static_cast<std::size_t>(site)] != axis) continue;
    const double sign = r.b_out[site] == 0 ? 3.0 : -3.0;
    out[static_cast<std::size_t>(i)] = d * sign * input_factor(r).cwiseProduct(mt.transpose()).sum();
  }
  return out;
}

Complex median_of_means_complex(std::span<const Complex> values, int k) {
  std::vector<double> re(values.size());
  std::vector<double> im(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    re[i] = values[i].real();
    im[i] = values[i].imag();
  }
  return {median_of_means(re, k), median_of_means(im, k)};
}

Complex multitime_correlator_exact_input(const ProcessShadow& ps, const CorrelatorSpec& spec, int k) {
  const auto samples =
      fast_path_applies(ps, spec) ? correlator_samples_fast(ps, spec) : correlator_samples_generic(ps, spec);
  return median_of_means_complex(samples, k);
}

Complex multitime_correlator_shadow_input(const ProcessShadow& ps, const ShadowEstimate& ss, const PauliString& a,
                                          const PauliString& b, int k) {
  if (ps.ensemble_in() != Ensemble::Pauli || ps.ensemble_out() != Ensemble::Pauli ||
      ss.ensemble() != Ensemble::Pauli) {
    throw std::invalid_argument("shadow-input correlators need Pauli ensembles throughout");
  }
  if (ss.n_qubits() != ps.n_qubits()) throw std::invalid_argument("state and process shadow sizes differ");
  const CorrelatorSpec spec{reconstruct(ss), a, b};
  return multitime_correlator_exact_input(ps, spec, k);
}

double purity_estimate(const ProcessShadow& ps, int k, bool allow_large) {
  if (ps.size() < 2) throw std::invalid_argument("purity needs at least two records");
  if (ps.n_qubits() > 3 && !allow_large) {
    throw InfeasibleSizeError("purity estimation costs grow as 16^n; n > 3 needs an explicit override");
  }
  if (k < 1 || ps.size() / static_cast<std::size_t>(k) < 2) throw std::invalid_argument("each group needs two records");
  const std::size_t group = ps.size() / static_cast<std::size_t>(k);
  std::vector<double> means(static_cast<std::size_t>(k));
  for (std::size_t g = 0; g < means.size(); ++g) {
    const std::span<const ShadowRecord> part(ps.records().data() + g * group, group);
    const double pairs = static_cast<double>(group) * static_cast<double>(group - 1);
    means[g] = kernels::parallel::distinct_pair_overlap_sum(part) / pairs;
  }
  return std::pow(4.0, ps.n_qubits()) * median_of_means(means, k);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Unitary: return "unitary";
    case Verdict::Nonunitary: return "nonunitary";
    case Verdict::Inconclusive: break;
  }
  return "inconclusive";
}

UnitarityResult unitarity_verdict(const ProcessShadow& ps, const UnitarityOptions& opts) {
  if (ps.size() < 2) throw std::invalid_argument("unitarity check needs at least two records");
  if (ps.n_qubits() > 3 && !opts.allow_large) {
    throw InfeasibleSizeError("purity estimation costs grow as 16^n; n > 3 needs an explicit override");
  }
  if (opts.resamples < 2 || opts.blocks < 1) throw std::invalid_argument("bootstrap needs resamples >= 2, blocks >= 1");
  const double d2 = std::pow(4.0, ps.n_qubits());
  const std::size_t m = ps.size();
  const std::size_t blocks = std::min<std::size_t>(static_cast<std::size_t>(opts.blocks), m);

  std::vector<Matrix> sums(blocks);
  std::vector<double> diag(blocks, 0.0);
  std::vector<double> sizes(blocks, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = m * b / blocks;
    const std::size_t hi = m * (b + 1) / blocks;
    const std::span<const ShadowRecord> part(ps.records().data() + lo, hi - lo);
    sums[b] = kernels::parallel::sum_choi_shadows(part);
    for (const auto& r : part) diag[b] += kernels::choi_shadow_square_trace(r);
    sizes[b] = static_cast<double>(hi - lo);
  }

  // A block drawn c times contributes c^2 to the diagonal: copies of the same
  // record are never counted as a distinct pair.
  auto statistic = [&](const std::vector<double>& c) {
    Matrix s = Matrix::Zero(sums.front().rows(), sums.front().cols());
    double dsum = 0.0;
    double total = 0.0;
    double self = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
      if (c[b] == 0.0) continue;
      s += c[b] * sums[b];
      dsum += c[b] * c[b] * diag[b];
      total += c[b] * sizes[b];
      self += c[b] * c[b] * sizes[b];
    }
    const double pairs = total * total - self;
    return pairs > 0.0 ? d2 * (s.squaredNorm() - dsum) / pairs : std::nan("");
  };

  const double purity = statistic(std::vector<double>(blocks, 1.0));
  RngStream rng(opts.seed, {0x756e6974u});
  std::vector<double> boot;
  boot.reserve(static_cast<std::size_t>(opts.resamples));
  std::vector<double> c(blocks);
  for (int r = 0; r < opts.resamples; ++r) {
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < blocks; ++i) c[rng.below(blocks)] += 1.0;
    const double v = statistic(c);
    if (std::isfinite(v)) boot.push_back(v);
  }
  UnitarityResult res{Verdict::Inconclusive, purity, -INFINITY, INFINITY, opts.threshold_fraction * d2,
                      opts.confidence};
  if (boot.size() >= 2) {
    const double alpha = 0.5 * (1.0 - opts.confidence);
    res.lower = quantile(boot, alpha);
    res.upper = quantile(boot, 1.0 - alpha);
  }
  if (blocks >= 2 && res.lower >= res.threshold) {
    res.verdict = Verdict::Unitary;
  } else if (blocks >= 2 && res.upper < res.threshold) {
    res.verdict = Verdict::Nonunitary;
  }
  return res;
}

}  // namespace procshadow
