#include "procshadow/applications.hpp"
#include "procshadow/channels.hpp"
#include "procshadow/harness.hpp"
#include "procshadow/shadow_algebra.hpp"
#include "procshadow/state_shadows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace procshadow {

using nlohmann::json;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PowerLawFit fit_power_law(const std::vector<double>& ms, const std::vector<double>& errs) {
  if (ms.size() != errs.size()) throw std::invalid_argument("fit inputs differ in length");
  if (ms.size() < 2) throw std::invalid_argument("fit needs at least two points");
  std::vector<double> x(ms.size());
  std::vector<double> y(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (!(ms[i] > 0.0) || !(errs[i] > 0.0)) throw std::invalid_argument("power-law fit needs positive values");
    x[i] = std::log(ms[i]);
    y[i] = std::log(errs[i]);
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("power-law fit needs distinct sample sizes");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    sse += r * r;
  }
  const double r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  const double stderr_b = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
  return {-slope, intercept, r2, stderr_b};
}

// ---------------------------------------------------------------- config

namespace {

const std::set<std::string> kExperiments{"choi-convergence",     "output-state-convergence",
                                         "correlator-convergence", "composed-correlator",
                                         "sign-statistics",        "unitarity"};
const std::set<std::string> kInputStates{"random", "plus-mixed", "zero", "maximally-mixed"};

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  static const std::set<std::string> known{"experiment",  "n_qubits", "channel",  "channel_second", "ensemble_in",
                                           "ensemble_out", "grid",     "trials",   "repeats",        "k",
                                           "seed",         "input_state", "op_early", "op_late",     "samples",
                                           "max_factors",  "save_records"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config field '" + key + "'");
  }
  ExperimentConfig c;
  read_field(j, "experiment", c.experiment);
  read_field(j, "n_qubits", c.n_qubits);
  read_field(j, "channel", c.channel);
  read_field(j, "channel_second", c.channel_second);
  std::string ein = to_string(c.ensemble_in);
  std::string eout = to_string(c.ensemble_out);
  read_field(j, "ensemble_in", ein);
  read_field(j, "ensemble_out", eout);
  try {
    c.ensemble_in = parse_ensemble(ein);
    c.ensemble_out = parse_ensemble(eout);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  read_field(j, "grid", c.grid);
  read_field(j, "trials", c.trials);
  read_field(j, "repeats", c.repeats);
  read_field(j, "k", c.k);
  read_field(j, "seed", c.seed);
  read_field(j, "input_state", c.input_state);
  read_field(j, "op_early", c.op_early);
  read_field(j, "op_late", c.op_late);
  read_field(j, "samples", c.samples);
  read_field(j, "max_factors", c.max_factors);
  read_field(j, "save_records", c.save_records);

  if (!kExperiments.contains(c.experiment)) throw ConfigError("unknown experiment '" + c.experiment + "'");
  if (c.n_qubits < 1) throw ConfigError("n_qubits must be >= 1");
  if (c.trials < 1) throw ConfigError("trials must be >= 1");
  if (c.repeats < 1) throw ConfigError("repeats must be >= 1");
  if (c.k < 1) throw ConfigError("k must be >= 1");
  if (c.experiment != "sign-statistics") {
    if (c.grid.empty()) throw ConfigError("grid must not be empty");
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      if (c.grid[i] < static_cast<std::size_t>(std::max(2, c.k))) throw ConfigError("grid values must be >= max(2, k)");
      if (i > 0 && c.grid[i] <= c.grid[i - 1]) throw ConfigError("grid must be strictly ascending");
    }
  }
  if (!kInputStates.contains(c.input_state)) throw ConfigError("unknown input_state '" + c.input_state + "'");
  if (c.samples < 1) throw ConfigError("samples must be >= 1");
  if (c.max_factors < 1) throw ConfigError("max_factors must be >= 1");
  return c;
}

json experiment_config_to_json(const ExperimentConfig& c) {
  return {{"experiment", c.experiment},
          {"n_qubits", c.n_qubits},
          {"channel", c.channel},
          {"channel_second", c.channel_second},
          {"ensemble_in", to_string(c.ensemble_in)},
          {"ensemble_out", to_string(c.ensemble_out)},
          {"grid", c.grid},
          {"trials", c.trials},
          {"repeats", c.repeats},
          {"k", c.k},
          {"seed", c.seed},
          {"input_state", c.input_state},
          {"op_early", c.op_early},
          {"op_late", c.op_late},
          {"samples", c.samples},
          {"max_factors", c.max_factors},
          {"save_records", c.save_records}};
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return experiment_config_from_json(j);
}

const SeriesSummary& ExperimentResult::summary(const std::string& series) const {
  for (const auto& s : summaries) {
    if (s.series == series) return s;
  }
  throw std::out_of_range("no series named " + series);
}

// ---------------------------------------------------------------- running

namespace {

constexpr std::uint64_t kChannelTag = 0x6368616e;
constexpr std::uint64_t kStateTag = 0x73746174;
constexpr std::uint64_t kSignTag = 0x7369676e;

enum SeriesTag : std::uint64_t { kChoi = 1, kOutput, kStateShadow, kCorrelator, kFirstLeg, kSecondLeg, kPurity };

std::uint64_t stream_id(SeriesTag tag, int trial, std::size_t mi, int repeat) {
  return (static_cast<std::uint64_t>(trial) << 40) | (static_cast<std::uint64_t>(tag) << 32) |
         (static_cast<std::uint64_t>(mi) << 16) | static_cast<std::uint64_t>(repeat);
}

Channel make_channel(const std::string& spec, int n, std::uint64_t seed, int trial, int leg) {
  RngStream rng(seed, {kChannelTag, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(leg)});
  if (spec == "random-unitary") return random_unitary_channel(n, rng);
  if (spec == "random-full-rank") return random_full_rank_channel(n, rng);
  try {
    return parse_named_channel(spec, n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

json channel_provenance(const std::string& spec, std::uint64_t seed, int trial, int leg) {
  return {{"spec", spec}, {"seed", seed}, {"trial", trial}, {"leg", leg}};
}

DensityMatrix make_input_state(const ExperimentConfig& c, int trial) {
  const int n = c.n_qubits;
  if (c.input_state == "random") {
    RngStream rng(c.seed, {kStateTag, static_cast<std::uint64_t>(trial)});
    return random_density_matrix(n, rng);
  }
  if (c.input_state == "zero") {
    Vector v = Vector::Zero(dim_of(n));
    v(0) = 1.0;
    return DensityMatrix::pure(v);
  }
  if (c.input_state == "maximally-mixed") return DensityMatrix::maximally_mixed(n);
  // plus-mixed
  Matrix plus = Matrix::Constant(2, 2, Complex{0.5});
  const Matrix rest = Matrix::Identity(dim_of(n - 1), dim_of(n - 1)) / static_cast<double>(dim_of(n - 1));
  return DensityMatrix(DenseOperator(n, n == 1 ? plus : kron(plus, rest)));
}

PauliString make_pauli(const std::string& text, int n) {
  try {
    if (text.size() == 1 && n > 1) {
      return PauliString::single(n, 0, PauliString::parse(text)[0]);
    }
    PauliString p = PauliString::parse(text);
    if (p.n_qubits() != n) throw std::invalid_argument("Pauli string '" + text + "' has the wrong length");
    return p;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

struct Runner {
  const ExperimentConfig& c;
  const std::optional<std::filesystem::path>& records_dir;
  ExperimentResult out;

  bool saving() const { return c.save_records && records_dir.has_value(); }

  void maybe_save(const ProcessShadow& ps, std::size_t mi, int repeat, int trial, const std::string& spec, int leg) {
    if (!saving() || mi + 1 != c.grid.size() || repeat != 0) return;
    std::filesystem::create_directories(*records_dir);
    char name[64];
    std::snprintf(name, sizeof name, "trial_%03d_leg_%d.jsonl", trial, leg);
    save_records(*records_dir / name, ps, c.seed, channel_provenance(spec, c.seed, trial, leg));
  }

  // Averages `measure(mi, repeat)` over repeats for every grid point.
  template <typename Fn>
  void sweep(const std::string& series, int trial, Fn measure) {
    for (std::size_t mi = 0; mi < c.grid.size(); ++mi) {
      double sum = 0.0;
      for (int r = 0; r < c.repeats; ++r) sum += measure(mi, r);
      out.points.push_back({series, trial, c.grid[mi], sum / c.repeats});
    }
  }

  ProcessShadow acquire(const Channel& ch, SeriesTag tag, int trial, std::size_t mi, int r) const {
    return acquire_process_shadow(ch, c.ensemble_in, c.ensemble_out, c.grid[mi], c.seed, stream_id(tag, trial, mi, r));
  }

  bool pauli_pauli() const { return c.ensemble_in == Ensemble::Pauli && c.ensemble_out == Ensemble::Pauli; }

  void choi_convergence() {
    for (int t = 0; t < c.trials; ++t) {
      const Channel ch = make_channel(c.channel, c.n_qubits, c.seed, t, 0);
      const Matrix eta = choi_of_channel(ch).as_normalized().op().matrix();
      sweep("choi", t, [&](std::size_t mi, int r) {
        const ProcessShadow ps = acquire(ch, kChoi, t, mi, r);
        maybe_save(ps, mi, r, t, c.channel, 0);
        return operator_norm(reconstruct_choi(ps).op().matrix() - eta);
      });
    }
  }

  void output_state_convergence() {
    for (int t = 0; t < c.trials; ++t) {
      const Channel ch = make_channel(c.channel, c.n_qubits, c.seed, t, 0);
      const DensityMatrix rho = make_input_state(c, t);
      const Matrix exact = apply_channel(ch, rho).matrix();
      sweep("output-exact", t, [&](std::size_t mi, int r) {
        const ProcessShadow ps = acquire(ch, kOutput, t, mi, r);
        maybe_save(ps, mi, r, t, c.channel, 0);
        return operator_norm(channel_of_choi(reconstruct_choi(ps), rho).matrix() - exact);
      });
      if (!pauli_pauli()) continue;
      sweep("output-shadow", t, [&](std::size_t mi, int r) {
        const ProcessShadow ps = acquire(ch, kOutput, t, mi, r);
        const ShadowEstimate ss =
            acquire_state_shadow(rho, Ensemble::Pauli, c.grid[mi], c.seed, stream_id(kStateShadow, t, mi, r));
        return operator_norm(apply_process_to_state_shadow(ps, ss).materialize() - exact);
      });
    }
  }

  void correlator_convergence() {
    const PauliString a = make_pauli(c.op_early, c.n_qubits);
    const PauliString b = make_pauli(c.op_late, c.n_qubits);
    for (int t = 0; t < c.trials; ++t) {
      const Channel ch = make_channel(c.channel, c.n_qubits, c.seed, t, 0);
      const DensityMatrix rho = make_input_state(c, t);
      const CorrelatorSpec spec{rho.op(), a, b};
      const Complex exact = correlator_exact(ch, spec);
      sweep("correlator", t, [&](std::size_t mi, int r) {
        const ProcessShadow ps = acquire(ch, kCorrelator, t, mi, r);
        maybe_save(ps, mi, r, t, c.channel, 0);
        return std::abs(multitime_correlator_exact_input(ps, spec, c.k) - exact);
      });
      if (!pauli_pauli()) continue;
      sweep("correlator-shadow", t, [&](std::size_t mi, int r) {
        const ProcessShadow ps = acquire(ch, kCorrelator, t, mi, r);
        const ShadowEstimate ss =
            acquire_state_shadow(rho, Ensemble::Pauli, c.grid[mi], c.seed, stream_id(kStateShadow, t, mi, r));
        return std::abs(multitime_correlator_shadow_input(ps, ss, a, b, c.k) - exact);
      });
    }
  }

  void composed_correlator() {
    if (!pauli_pauli()) throw ConfigError("composed-correlator needs Pauli ensembles");
    const PauliString a = make_pauli(c.op_early, c.n_qubits);
    const PauliString b = make_pauli(c.op_late, c.n_qubits);
    const std::string second = c.channel_second.empty() ? c.channel : c.channel_second;
    const double d = static_cast<double>(dim_of(c.n_qubits));
    for (int t = 0; t < c.trials; ++t) {
      const Channel x = make_channel(c.channel, c.n_qubits, c.seed, t, 0);
      const Channel y = make_channel(second, c.n_qubits, c.seed, t, 1);
      const DensityMatrix rho = make_input_state(c, t);
      const CorrelatorSpec spec{rho.op(), a, b};
      const Complex exact = correlator_exact(x.then(y), spec);
      const Matrix probe = kron((rho.op().matrix() * a.to_operator().matrix()).transpose(), b.to_operator().matrix());
      sweep("composed", t, [&](std::size_t mi, int r) {
        const ProcessShadow px = acquire(x, kFirstLeg, t, mi, r);
        const ProcessShadow py = acquire(y, kSecondLeg, t, mi, r);
        maybe_save(px, mi, r, t, c.channel, 0);
        maybe_save(py, mi, r, t, second, 1);
        const Matrix composed = compose_process_shadows(px, py).materialize();
        return std::abs(d * (composed * probe).trace() - exact);
      });
    }
  }

  void unitarity() {
    out.table.columns = {"trial", "m", "purity", "lower", "upper", "threshold", "verdict", "exact_purity"};
    for (int t = 0; t < c.trials; ++t) {
      const Channel ch = make_channel(c.channel, c.n_qubits, c.seed, t, 0);
      const double exact = choi_of_channel(ch).op().matrix().squaredNorm();
      sweep("purity", t, [&](std::size_t mi, int r) {
        const ProcessShadow ps = acquire(ch, kPurity, t, mi, r);
        maybe_save(ps, mi, r, t, c.channel, 0);
        UnitarityOptions opts;
        opts.seed = stream_id(kPurity, t, mi, r) ^ c.seed;
        const UnitarityResult u = unitarity_verdict(ps, opts);
        if (r == 0) {
          out.table.rows.push_back({std::to_string(t), std::to_string(c.grid[mi]), format_number(u.purity),
                                    format_number(u.lower), format_number(u.upper), format_number(u.threshold),
                                    to_string(u.verdict), format_number(exact)});
        }
        return std::abs(u.purity - exact);
      });
    }
  }

  void sign_statistics() {
    out.table.columns = {"factors",        "samples",           "p_negative",   "p_negative_exact",
                         "binomial_se",    "z_score",           "mean_log_abs", "mean_log_abs_exact",
                         "std_log_abs",    "std_log_abs_exact", "std_log_abs_heuristic"};
    for (int nf = 1; nf <= c.max_factors; ++nf) {
      RngStream rng(c.seed, {kSignTag, static_cast<std::uint64_t>(nf)});
      const SignStatistics s = weight_sign_statistics(nf, c.samples, rng);
      const double se = std::sqrt(s.p_negative_exact * (1.0 - s.p_negative_exact) / static_cast<double>(s.samples));
      out.table.rows.push_back({std::to_string(nf), std::to_string(s.samples), format_number(s.p_negative),
                                format_number(s.p_negative_exact), format_number(se),
                                format_number((s.p_negative - s.p_negative_exact) / se),
                                format_number(s.mean_log_abs), format_number(s.mean_log_abs_exact),
                                format_number(s.std_log_abs), format_number(s.std_log_abs_exact),
                                format_number(s.std_log_abs_heuristic)});
    }
  }

  void fit_all() {
    std::map<std::pair<std::string, int>, std::vector<const ErrorPoint*>> groups;
    std::vector<std::string> order;
    for (const auto& p : out.points) {
      if (std::find(order.begin(), order.end(), p.series) == order.end()) order.push_back(p.series);
      groups[{p.series, p.trial}].push_back(&p);
    }
    for (const auto& series : order) {
      SeriesSummary s;
      s.series = series;
      s.mean_error.assign(c.grid.size(), 0.0);
      std::vector<double> bs;
      std::vector<double> r2s;
      for (int t = 0; t < c.trials; ++t) {
        const auto it = groups.find({series, t});
        if (it == groups.end()) continue;
        std::vector<double> ms;
        std::vector<double> errs;
        for (std::size_t i = 0; i < it->second.size(); ++i) {
          ms.push_back(static_cast<double>(it->second[i]->m));
          errs.push_back(it->second[i]->error);
          s.mean_error[i] += it->second[i]->error / c.trials;
        }
        if (ms.size() < 2 || std::any_of(errs.begin(), errs.end(), [](double e) { return !(e > 0.0); })) continue;
        const PowerLawFit f = fit_power_law(ms, errs);
        out.fits.push_back({series, t, f});
        bs.push_back(f.b);
        r2s.push_back(f.r2);
      }
      s.trials = static_cast<int>(bs.size());
      if (!bs.empty()) {
        const double nb = static_cast<double>(bs.size());
        s.mean_b = std::accumulate(bs.begin(), bs.end(), 0.0) / nb;
        s.mean_r2 = std::accumulate(r2s.begin(), r2s.end(), 0.0) / nb;
        double var = 0.0;
        for (double b : bs) var += (b - s.mean_b) * (b - s.mean_b);
        s.std_b = bs.size() > 1 ? std::sqrt(var / (nb - 1.0)) : 0.0;
      }
      s.mean_error_decreasing = true;
      for (std::size_t i = 1; i < s.mean_error.size(); ++i) {
        if (!(s.mean_error[i] < s.mean_error[i - 1])) s.mean_error_decreasing = false;
      }
      out.summaries.push_back(std::move(s));
    }
  }

  void run() {
    if (c.experiment == "choi-convergence") {
      choi_convergence();
    } else if (c.experiment == "output-state-convergence") {
      output_state_convergence();
    } else if (c.experiment == "correlator-convergence") {
      correlator_convergence();
    } else if (c.experiment == "composed-correlator") {
      composed_correlator();
    } else if (c.experiment == "unitarity") {
      unitarity();
    } else if (c.experiment == "sign-statistics") {
      sign_statistics();
    } else {
      throw ConfigError("unknown experiment '" + c.experiment + "'");
    }
    fit_all();
  }
};

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& records_dir) {
  Runner runner{cfg, records_dir, {}};
  runner.out.config = cfg;
  runner.run();
  return std::move(runner.out);
}

void write_experiment_outputs(const ExperimentResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : r.points) {
    rows.push_back({p.series, std::to_string(p.trial), std::to_string(p.m), format_number(p.error)});
  }
  write_csv(dir / "results.csv", {"series", "trial", "m", "error"}, rows);

  rows.clear();
  for (const auto& f : r.fits) {
    rows.push_back({f.series, std::to_string(f.trial), format_number(f.fit.b), format_number(f.fit.intercept),
                    format_number(f.fit.r2), format_number(f.fit.b_stderr)});
  }
  write_csv(dir / "exponents.csv", {"series", "trial", "b", "intercept", "r2", "b_stderr"}, rows);

  json summaries = json::array();
  for (const auto& s : r.summaries) {
    summaries.push_back({{"series", s.series},
                         {"fitted_trials", s.trials},
                         {"mean_b", s.mean_b},
                         {"std_b", s.std_b},
                         {"mean_r2", s.mean_r2},
                         {"mean_error", s.mean_error},
                         {"mean_error_decreasing", s.mean_error_decreasing}});
  }
  json outputs = {"results.csv", "exponents.csv"};
  if (!r.table.columns.empty()) {
    write_csv(dir / "table.csv", r.table.columns, r.table.rows);
    outputs.push_back("table.csv");
  }
  const json manifest = {{"tool", "procshadow"},
                         {"version", "0.1.0"},
                         {"record_format_version", kRecordFormatVersion},
                         {"config", experiment_config_to_json(r.config)},
                         {"seeds", {{"master", r.config.seed}}},
                         {"summaries", summaries},
                         {"outputs", outputs}};
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw ConfigError("cannot write manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

void write_gnuplot(const std::filesystem::path& results_csv, const std::filesystem::path& out_dir) {
  std::ifstream in(results_csv);
  if (!in) throw ConfigError("cannot open " + results_csv.string());
  std::string line;
  if (!std::getline(in, line) || line != "series,trial,m,error") throw ConfigError("not a results table: " + results_csv.string());
  std::vector<std::pair<std::string, std::vector<std::string>>> blocks;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4) throw RecordFormatError(line_no, "expected 4 columns");
    const std::string key = cells[0] + " trial " + cells[1];
    if (blocks.empty() || blocks.back().first != key) blocks.push_back({key, {}});
    blocks.back().second.push_back(cells[2] + " " + cells[3]);
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream dat(out_dir / "convergence.dat", std::ios::binary);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (b > 0) dat << "\n\n";
    dat << "# " << blocks[b].first << '\n';
    for (const auto& row : blocks[b].second) dat << row << '\n';
  }
  std::ofstream gp(out_dir / "convergence.gp", std::ios::binary);
  gp << "set logscale xy\nset xlabel 'm'\nset ylabel 'error'\nset key outside\n";
  gp << "plot for [i=0:" << (blocks.empty() ? 0 : blocks.size() - 1)
     << "] 'convergence.dat' index i with linespoints title sprintf('block %d', i)\n";
}

}  // namespace procshadow
