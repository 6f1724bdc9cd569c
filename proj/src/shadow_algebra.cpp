#include "procshadow/shadow_algebra.hpp"

#include "procshadow/kernels.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace procshadow {

double pair_weight(Axis mu, int b, Axis mu_p, int b_p) {
  if (mu != mu_p) return 0.25;
  const bool same = (b == b_p);
  if (mu == Axis::Y) return same ? -2.0 : 2.5;
  return same ? 2.5 : -2.0;
}

namespace {

PauliLabels labels_of(const UnitarySpec& frame, const BitString& bits) {
  const auto* p = std::get_if<PauliFrame>(&frame);
  if (p == nullptr) throw std::invalid_argument("Pauli labels need a Pauli frame");
  PauliLabels out(p->axes.size());
  for (int q = 0; q < p->n_qubits(); ++q) out[static_cast<std::size_t>(q)] = {p->axes[static_cast<std::size_t>(q)], bits[q]};
  return out;
}

}  // namespace

PauliLabels snapshot_labels(const StateSnapshot& s) { return labels_of(s.frame, s.outcome); }
PauliLabels record_input_labels(const ShadowRecord& r) { return labels_of(r.u_in, input_register_bits(r)); }
PauliLabels record_output_labels(const ShadowRecord& r) { return labels_of(r.u_out, r.b_out); }

double pair_weight_product(const PauliLabels& a, const PauliLabels& b) {
  if (a.size() != b.size()) throw std::invalid_argument("label length mismatch");
  double w = 1.0;
  for (std::size_t q = 0; q < a.size(); ++q) w *= pair_weight(a[q].axis, a[q].bit, b[q].axis, b[q].bit);
  return w;
}

WeightedSnapshotSum::WeightedSnapshotSum(Kind kind, std::shared_ptr<const ProcessShadow> first,
                                         std::shared_ptr<const ProcessShadow> second,
                                         std::shared_ptr<const ShadowEstimate> state)
    : kind_(kind), first_(std::move(first)), second_(std::move(second)), state_(std::move(state)) {}

WeightedSnapshotSum WeightedSnapshotSum::apply(ProcessShadow ps, ShadowEstimate ss) {
  if (ps.ensemble_in() != Ensemble::Pauli || ps.ensemble_out() != Ensemble::Pauli ||
      ss.ensemble() != Ensemble::Pauli) {
    throw std::invalid_argument("shadow application needs Pauli ensembles throughout");
  }
  if (ps.n_qubits() != ss.n_qubits()) throw std::invalid_argument("process and state shadow sizes differ");
  if (ps.size() == 0 || ss.size() == 0) throw std::invalid_argument("shadow application needs nonempty shadows");
  return {Kind::Apply, std::make_shared<const ProcessShadow>(std::move(ps)), nullptr,
          std::make_shared<const ShadowEstimate>(std::move(ss))};
}

WeightedSnapshotSum WeightedSnapshotSum::compose(ProcessShadow x, ProcessShadow y) {
  for (const auto* p : {&x, &y}) {
    if (p->ensemble_in() != Ensemble::Pauli || p->ensemble_out() != Ensemble::Pauli) {
      throw std::invalid_argument("composition needs Pauli ensembles on both shadows");
    }
    if (p->size() == 0) throw std::invalid_argument("composition needs nonempty shadows");
  }
  if (x.n_qubits() != y.n_qubits()) throw std::invalid_argument("composed shadows differ in size");
  if (x.n_qubits() > 4) throw InfeasibleSizeError("composition is dense on 2n qubits; n <= 4");
  return {Kind::Compose, std::make_shared<const ProcessShadow>(std::move(x)),
          std::make_shared<const ProcessShadow>(std::move(y)), nullptr};
}

int WeightedSnapshotSum::n_qubits() const {
  return kind_ == Kind::Apply ? first_->n_qubits() : 2 * first_->n_qubits();
}

std::size_t WeightedSnapshotSum::size() const {
  return first_->size() * (kind_ == Kind::Apply ? state_->size() : second_->size());
}

WeightedSnapshotSum::Term WeightedSnapshotSum::term(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("term index out of range");
  const double scale = std::pow(4.0, first_->n_qubits());
  if (kind_ == Kind::Apply) {
    const auto& r = first_->records()[i / state_->size()];
    const auto& s = state_->snapshots()[i % state_->size()];
    return {scale * pair_weight_product(snapshot_labels(s), record_input_labels(r)), output_factor(r)};
  }
  const auto& rx = first_->records()[i / second_->size()];
  const auto& ry = second_->records()[i % second_->size()];
  return {scale * pair_weight_product(record_output_labels(rx), record_input_labels(ry)),
          kron(input_factor(rx), output_factor(ry))};
}

Matrix WeightedSnapshotSum::materialize() const {
  const auto t = kind_ == Kind::Apply ? kernels::parallel::apply_pairwise(first_->records(), state_->snapshots())
                                      : kernels::parallel::compose_pairwise(first_->records(), second_->records());
  return t.weighted_sum / static_cast<double>(size());
}

Matrix WeightedSnapshotSum::materialize_pairwise() const {
  const auto t = kind_ == Kind::Apply ? kernels::serial::apply_pairwise(first_->records(), state_->snapshots())
                                      : kernels::serial::compose_pairwise(first_->records(), second_->records());
  return t.weighted_sum / static_cast<double>(size());
}

double WeightedSnapshotSum::mean_weight() const {
  const auto t = kind_ == Kind::Apply ? kernels::parallel::apply_pairwise(first_->records(), state_->snapshots())
                                      : kernels::parallel::compose_pairwise(first_->records(), second_->records());
  return t.weight_sum / static_cast<double>(size());
}

WeightedSnapshotSum apply_process_to_state_shadow(const ProcessShadow& ps, const ShadowEstimate& ss) {
  return WeightedSnapshotSum::apply(ps, ss);
}

WeightedSnapshotSum compose_process_shadows(const ProcessShadow& ps_x, const ProcessShadow& ps_y) {
  return WeightedSnapshotSum::compose(ps_x, ps_y);
}

SignStatistics weight_sign_statistics(int n_factors, std::size_t samples, RngStream& rng) {
  if (n_factors < 1) throw std::invalid_argument("need at least one factor");
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  static constexpr std::array<double, 6> kValues{2.5, 0.25, 0.25, 0.25, 0.25, -2.0};
  const auto nf = static_cast<std::size_t>(n_factors);

  SignStatistics st;
  st.n_factors = n_factors;
  st.samples = samples;
  st.big_counts.assign(nf + 1, 0.0);
  std::size_t negative = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    bool neg = false;
    double log_abs = 0.0;
    std::size_t big = 0;
    for (int f = 0; f < n_factors; ++f) {
      const double w = kValues[rng.below(kValues.size())];
      neg ^= (w < 0.0);
      big += std::abs(w) >= 2.0 ? 1 : 0;
      log_abs += std::log(std::abs(w));
    }
    negative += neg ? 1 : 0;
    st.big_counts[big] += 1.0;
    sum += log_abs;
    sum_sq += log_abs * log_abs;
  }
  const double ns = static_cast<double>(samples);
  st.p_negative = static_cast<double>(negative) / ns;
  st.p_positive = 1.0 - st.p_negative;
  st.mean_log_abs = sum / ns;
  st.std_log_abs = samples > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / ns) / (ns - 1.0))) : 0.0;
  for (auto& c : st.big_counts) c /= ns;

  const double n = static_cast<double>(n_factors);
  st.p_negative_exact = 0.5 * (1.0 - std::pow(2.0 / 3.0, n));
  st.p_positive_exact = 0.5 * (1.0 + std::pow(2.0 / 3.0, n));
  double mean1 = 0.0;
  double sq1 = 0.0;
  for (double v : kValues) {
    mean1 += std::log(std::abs(v)) / 6.0;
    sq1 += std::pow(std::log(std::abs(v)), 2) / 6.0;
  }
  st.mean_log_abs_exact = n * mean1;
  st.std_log_abs_exact = std::sqrt(n * (sq1 - mean1 * mean1));
  st.std_log_abs_heuristic = std::sqrt(n / 6.0) * std::log(5.0);
  st.big_counts_exact.assign(nf + 1, 0.0);
  for (std::size_t k = 0; k <= nf; ++k) {
    const double kd = static_cast<double>(k);
    const double log_binom = std::lgamma(n + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(n - kd + 1.0);
    st.big_counts_exact[k] = std::exp(log_binom + kd * std::log(1.0 / 3.0) + (n - kd) * std::log(2.0 / 3.0));
  }
  return st;
}

}  // namespace procshadow
