#include "procshadow/process_shadows.hpp"

#include "procshadow/kernels.hpp"
#include "procshadow/state_shadows.hpp"

#include <algorithm>
#include <cmath>

namespace procshadow {

ProcessShadow::ProcessShadow(int n_qubits, Ensemble ensemble_in, Ensemble ensemble_out,
                             std::vector<ShadowRecord> records)
    : n_qubits_(n_qubits), ensemble_in_(ensemble_in), ensemble_out_(ensemble_out), records_(std::move(records)) {
  if (n_qubits_ < 1 || n_qubits_ > kMaxQubits) throw InfeasibleSizeError("process shadow size out of range");
  for (const auto& r : records_) {
    if (r.ensemble_in != ensemble_in_ || r.ensemble_out != ensemble_out_) {
      throw std::invalid_argument("record ensembles differ from the shadow's");
    }
    if (!frame_matches(r.u_in, r.ensemble_in) || !frame_matches(r.u_out, r.ensemble_out)) {
      throw std::invalid_argument("record frame kind does not match its ensemble tag");
    }
    if (r.b_in.size() != n_qubits_ || r.b_out.size() != n_qubits_ || n_qubits_of(r.u_in) != n_qubits_ ||
        n_qubits_of(r.u_out) != n_qubits_) {
      throw std::invalid_argument("record size does not match the shadow");
    }
  }
}

ProcessShadow ProcessShadow::slice(std::size_t begin, std::size_t end) const {
  end = std::min(end, records_.size());
  begin = std::min(begin, end);
  return ProcessShadow(n_qubits_, ensemble_in_, ensemble_out_,
                       std::vector<ShadowRecord>(records_.begin() + static_cast<std::ptrdiff_t>(begin),
                                                 records_.begin() + static_cast<std::ptrdiff_t>(end)));
}

ShadowRecord acquire_record(const Channel& ch, Ensemble ensemble_in, Ensemble ensemble_out, RngStream& rng) {
  const int n = ch.n_qubits();
  const auto d = dim_of(n);
  BitString b_in(n, rng.below(static_cast<std::uint64_t>(d)));
  UnitarySpec u_in = sample_frame(ensemble_in, n, rng);
  UnitarySpec u_out = sample_frame(ensemble_out, n, rng);
  const Vector psi = frame_state(u_in, b_in);
  const Matrix rot = to_matrix(u_out);
  std::vector<double> p(static_cast<std::size_t>(d), 0.0);
  Vector phi(d);
  for (const auto& k : ch.kraus()) {
    phi.noalias() = rot * (k * psi);
    for (Eigen::Index i = 0; i < d; ++i) p[static_cast<std::size_t>(i)] += std::norm(phi(i));
  }
  BitString b_out(n, sample_index(p, rng));
  return {b_in, std::move(u_in), std::move(u_out), b_out, ensemble_in, ensemble_out};
}

ProcessShadow acquire_process_shadow(const Channel& ch, Ensemble ensemble_in, Ensemble ensemble_out,
                                     std::size_t m, std::uint64_t seed, std::uint64_t stream) {
  return ProcessShadow(ch.n_qubits(), ensemble_in, ensemble_out,
                       kernels::parallel::acquire_records(ch, ensemble_in, ensemble_out, m, seed, stream));
}

BitString input_register_bits(const ShadowRecord& r) {
  const auto& frame = std::get<PauliFrame>(r.u_in);
  BitString bits = r.b_in;
  for (int q = 0; q < frame.n_qubits(); ++q) {
    if (frame.axes[static_cast<std::size_t>(q)] == Axis::Y) bits = bits.flipped(q);
  }
  return bits;
}

Matrix input_factor(const ShadowRecord& r) {
  if (r.ensemble_in == Ensemble::Pauli) {
    if (const auto* f = std::get_if<PauliFrame>(&r.u_in)) {
      const BitString bits = input_register_bits(r);
      Matrix m = pauli_tau(f->axes.front(), bits[0]);
      for (int q = 1; q < f->n_qubits(); ++q) m = kron(m, pauli_tau(f->axes[static_cast<std::size_t>(q)], bits[q]));
      return m;
    }
  }
  return input_factor_dense(r);
}

Matrix input_factor_dense(const ShadowRecord& r) {
  const Vector v = frame_state(r.u_in, r.b_in);
  const Matrix proj_t = (v * v.adjoint()).transpose();
  return inverse_map(r.ensemble_in, DenseOperator(r.b_in.size(), proj_t)).matrix();
}

Matrix output_factor(const ShadowRecord& r) {
  return snapshot_matrix(StateSnapshot{r.u_out, r.b_out, r.ensemble_out});
}

DenseOperator materialize_choi_shadow(const ShadowRecord& r) {
  return {2 * r.b_in.size(), kron(input_factor(r), output_factor(r))};
}

ChoiMatrix reconstruct_choi(const ProcessShadow& ps) {
  if (ps.size() == 0) throw std::invalid_argument("cannot reconstruct a Choi matrix from no records");
  if (ps.n_qubits() > 4) throw InfeasibleSizeError("dense Choi reconstruction supports n <= 4");
  Matrix sum = kernels::parallel::sum_choi_shadows(ps.records());
  sum /= static_cast<double>(ps.size());
  // Each shadow has unit trace; pin the mean's trace against rounding drift.
  const Complex tr = sum.trace();
  sum.diagonal().array() += (Complex{1.0} - tr) / static_cast<double>(sum.rows());
  return ChoiMatrix(DenseOperator(2 * ps.n_qubits(), std::move(sum)), true);
}

std::vector<Complex> functional_samples(const ProcessShadow& ps, const DenseOperator& input_side,
                                        const DenseOperator& output_side) {
  if (input_side.n_qubits() != ps.n_qubits() || output_side.n_qubits() != ps.n_qubits()) {
    throw std::invalid_argument("functional operand size mismatch");
  }
  return kernels::parallel::functional_values(ps.records(), input_side.matrix().transpose(), output_side.matrix());
}

double estimate_channel_functional(const ProcessShadow& ps, const DenseOperator& rho, const DenseOperator& o,
                                   int k) {
  const auto samples = functional_samples(ps, rho, o);
  std::vector<double> re(samples.size());
  std::transform(samples.begin(), samples.end(), re.begin(), [](Complex c) { return c.real(); });
  return median_of_means(re, k);
}

BinIndependenceReport verify_bin_independence(const Channel& ch, int samples, RngStream& rng,
                                              Ensemble ensemble_in) {
  const int n = ch.n_qubits();
  // Dense Choi matrix built here rather than through ChoiMatrix, whose trace
  // check would reject exactly the non-TP channels this test should flag.
  const auto d = dim_of(n);
  Matrix eta = Matrix::Zero(d * d, d * d);
  Vector vec(d * d);
  for (const auto& k : ch.kraus()) {
    for (Eigen::Index m = 0; m < d; ++m) vec.segment(m * d, d) = k.col(m);
    eta.noalias() += vec * vec.adjoint();
  }
  const DenseOperator eta_a = partial_trace(DenseOperator(2 * n, std::move(eta)), Register::B);
  BinIndependenceReport rep;
  for (int s = 0; s < samples; ++s) {
    const BitString b(n, rng.below(static_cast<std::uint64_t>(dim_of(n))));
    const UnitarySpec u = sample_frame(ensemble_in, n, rng);
    const Vector v = frame_state(u, b);
    const Matrix proj_a = (v * v.adjoint()).transpose();
    const Complex norm = (proj_a * eta_a.matrix()).trace();
    rep.max_normalization_defect = std::max(rep.max_normalization_defect, std::abs(norm - Complex{1.0}));
    ++rep.sampled_inputs;
  }
  for (const auto& p : all_pauli_strings(n)) {
    if (p.support() == 0) continue;
    const Complex ev = (p.to_operator().matrix() * eta_a.matrix()).trace();
    rep.max_traceless_expectation = std::max(rep.max_traceless_expectation, std::abs(ev));
    ++rep.pauli_strings_checked;
  }
  rep.normalization_ok = rep.max_normalization_defect <= kStructuralTol;
  rep.traceless_ok = rep.max_traceless_expectation <= kStructuralTol;
  return rep;
}

}  // namespace procshadow
