// procshadow: acquire, reconstruct and analyse process shadows from the shell.
//
// Exit codes: 0 success, 1 unexpected failure, 2 bad configuration or input,
// 3 problem size refused.

#include "procshadow/applications.hpp"
#include "procshadow/channels.hpp"
#include "procshadow/complexity.hpp"
#include "procshadow/harness.hpp"
#include "procshadow/shadow_algebra.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

using namespace procshadow;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr std::uint64_t kCliChannelTag = 0x636c69;

// Options that may also come from the --config JSON object. Command-line
// values win over the file.
struct Bindings {
  struct Entry {
    CLI::Option* opt;
    std::string key;
    std::function<void(const json&)> assign;
  };
  std::vector<Entry> entries;

  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& name, T& var, const std::string& help) {
    CLI::Option* o = app->add_option("--" + name, var, help);
    entries.push_back({o, name, [&var](const json& j) { var = j.get<T>(); }});
    return o;
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool& var, const std::string& help) {
    CLI::Option* o = app->add_flag("--" + name, var, help);
    entries.push_back({o, name, [&var](const json& j) { var = j.get<bool>(); }});
    return o;
  }

  void merge(const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      auto it = std::find_if(entries.begin(), entries.end(), [&](const Entry& e) { return e.key == key; });
      if (it == entries.end()) throw ConfigError("unknown config field '" + key + "'");
      if (it->opt->count() > 0) continue;
      try {
        it->assign(value);
      } catch (const json::exception& e) {
        throw ConfigError("config field '" + key + "': " + e.what());
      }
    }
  }
};

struct Common {
  std::uint64_t seed = 1;
  std::string records;
  std::string config;
};

void add_common(CLI::App* app, Bindings& b, Common& c) {
  b.add(app, "seed", c.seed, "master seed");
  b.add(app, "records", c.records, "record file (JSON Lines)");
  app->add_option("--config", c.config, "JSON object supplying any of the options");
}

void require(const std::string& value, const char* what) {
  if (value.empty()) throw ConfigError(std::string("missing required option --") + what);
}

Channel resolve_channel(const std::string& spec, const std::string& file, int n, std::uint64_t seed) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open channel file " + file);
    try {
      return channel_from_json(json::parse(in));
    } catch (const json::exception& e) {
      throw ConfigError("channel file " + file + ": " + e.what());
    }
  }
  RngStream rng(seed, {kCliChannelTag});
  if (spec == "random-unitary") return random_unitary_channel(n, rng);
  if (spec == "random-full-rank") return random_full_rank_channel(n, rng);
  try {
    return parse_named_channel(spec, n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Ensemble ensemble_arg(const std::string& text) {
  try {
    return parse_ensemble(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

json matrix_json(const Matrix& m) {
  json flat = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) flat.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return flat;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << '\n';
}

DenseOperator input_state_arg(const std::string& text, int n) {
  if (text == "mixed") return DensityMatrix::maximally_mixed(n).op();
  try {
    const BitString b = BitString::parse(text);
    if (b.size() != n) throw std::invalid_argument("input state has the wrong length");
    Vector v = Vector::Zero(dim_of(n));
    v(static_cast<Eigen::Index>(b.index())) = 1.0;
    return DensityMatrix::pure(v).op();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--input-state: ") + e.what());
  }
}

PauliString pauli_arg(const std::string& text, int n, const char* what) {
  try {
    PauliString p = PauliString::parse(text);
    if (p.n_qubits() != n) throw std::invalid_argument("wrong length");
    return p;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(what) + " '" + text + "': " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical shadow process tomography"};
  app.require_subcommand(1);

  // acquire
  Bindings acq_b;
  Common acq_c;
  std::string acq_channel = "identity";
  std::string acq_channel_file;
  std::string acq_save_channel;
  int acq_n = 1;
  std::string acq_in = "pauli";
  std::string acq_out = "pauli";
  std::size_t acq_m = 1000;
  std::uint64_t acq_stream = 0;
  auto* acquire = app.add_subcommand("acquire", "simulate the acquisition protocol and write records");
  add_common(acquire, acq_b, acq_c);
  acq_b.add(acquire, "channel", acq_channel, "named channel, random-unitary or random-full-rank");
  acq_b.add(acquire, "channel-file", acq_channel_file, "channel as JSON Kraus list");
  acq_b.add(acquire, "save-channel", acq_save_channel, "also write the channel as JSON");
  acq_b.add(acquire, "n", acq_n, "qubits");
  acq_b.add(acquire, "ensemble-in", acq_in, "pauli or clifford");
  acq_b.add(acquire, "ensemble-out", acq_out, "pauli or clifford");
  acq_b.add(acquire, "m", acq_m, "number of records");
  acq_b.add(acquire, "stream", acq_stream, "substream index");

  // reconstruct
  Bindings rec_b;
  Common rec_c;
  std::string rec_output;
  std::string rec_channel;
  std::string rec_channel_file;
  auto* reconstruct = app.add_subcommand("reconstruct", "mean Choi matrix of a record file");
  add_common(reconstruct, rec_b, rec_c);
  rec_b.add(reconstruct, "output", rec_output, "write the normalized Choi matrix as JSON");
  rec_b.add(reconstruct, "channel", rec_channel, "reference channel for an error report");
  rec_b.add(reconstruct, "channel-file", rec_channel_file, "reference channel as JSON");

  // estimate
  Bindings est_b;
  Common est_c;
  std::string est_input = "mixed";
  std::string est_observable;
  std::string est_transition;
  std::string est_early;
  std::string est_late;
  int est_k = 1;
  auto* estimate = app.add_subcommand("estimate", "functionals, transition probabilities and correlators");
  add_common(estimate, est_b, est_c);
  est_b.add(estimate, "input-state", est_input, "bit string or 'mixed'");
  est_b.add(estimate, "observable", est_observable, "Pauli string O for Tr[E(rho) O]");
  est_b.add(estimate, "transition", est_transition, "i,f bit strings for P(i -> f)");
  est_b.add(estimate, "early", est_early, "Pauli string A for Tr[E(rho A) B]");
  est_b.add(estimate, "late", est_late, "Pauli string B for Tr[E(rho A) B]");
  est_b.add(estimate, "k", est_k, "median-of-means groups");

  // compose
  Bindings cmp_b;
  Common cmp_c;
  std::string cmp_second;
  std::string cmp_output;
  auto* compose = app.add_subcommand("compose", "compose two process shadows (second after first)");
  add_common(compose, cmp_b, cmp_c);
  cmp_b.add(compose, "records-second", cmp_second, "record file of the second channel");
  cmp_b.add(compose, "output", cmp_output, "write the composed normalized Choi matrix as JSON");

  // verify-unitarity
  Bindings uni_b;
  Common uni_c;
  UnitarityOptions uni_opts;
  auto* verify = app.add_subcommand("verify-unitarity", "purity test of a record file");
  add_common(verify, uni_b, uni_c);
  uni_b.add(verify, "threshold", uni_opts.threshold_fraction, "decision threshold as a fraction of d^2");
  uni_b.add(verify, "confidence", uni_opts.confidence, "bootstrap interval level");
  uni_b.add(verify, "resamples", uni_opts.resamples, "bootstrap resamples");
  uni_b.add(verify, "blocks", uni_opts.blocks, "bootstrap blocks");
  uni_b.flag(verify, "allow-large", uni_opts.allow_large, "permit n > 3");

  // budget
  Bindings bud_b;
  Common bud_c;
  ComplexityQuery bud_q;
  std::string bud_in = "pauli";
  std::string bud_out = "pauli";
  std::vector<std::string> bud_observables;
  std::vector<std::string> bud_inputs;
  auto* budget = app.add_subcommand("budget", "median-of-means sample budget");
  add_common(budget, bud_b, bud_c);
  bud_b.add(budget, "epsilon", bud_q.epsilon, "target accuracy");
  bud_b.add(budget, "delta", bud_q.delta, "failure probability");
  bud_b.add(budget, "n", bud_q.n_qubits, "qubits");
  bud_b.add(budget, "ensemble-in", bud_in, "pauli or clifford");
  bud_b.add(budget, "ensemble-out", bud_out, "pauli or clifford");
  bud_b.add(budget, "observable", bud_observables, "Pauli string (repeatable)");
  bud_b.add(budget, "input", bud_inputs, "input state: bit string projector or Pauli string (repeatable)");

  // experiment
  Common exp_c;
  std::string exp_out;
  std::optional<std::uint64_t> exp_seed;
  auto* experiment = app.add_subcommand("experiment", "run a convergence experiment from a JSON config");
  experiment->add_option("--config", exp_c.config, "experiment config (JSON)");
  experiment->add_option("--seed", exp_seed, "override the config seed");
  experiment->add_option("--records", exp_c.records, "directory for record files of the largest batches");
  experiment->add_option("--out", exp_out, "output directory")->required();

  // gnuplot
  Common gp_c;
  std::string gp_results;
  std::string gp_out;
  auto* gnuplot = app.add_subcommand("gnuplot", "gnuplot data and script from results.csv");
  gnuplot->add_option("--config", gp_c.config, "unused; accepted for uniformity");
  gnuplot->add_option("--seed", gp_c.seed, "unused; accepted for uniformity");
  gnuplot->add_option("--records", gp_c.records, "unused; accepted for uniformity");
  gnuplot->add_option("--results", gp_results, "experiment output directory")->required();
  gnuplot->add_option("--out", gp_out, "where to write convergence.dat/.gp (default: --results)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (acquire->parsed()) {
      acq_b.merge(acq_c.config);
      require(acq_c.records, "records");
      const Channel ch = resolve_channel(acq_channel, acq_channel_file, acq_n, acq_c.seed);
      const ProcessShadow ps =
          acquire_process_shadow(ch, ensemble_arg(acq_in), ensemble_arg(acq_out), acq_m, acq_c.seed, acq_stream);
      json provenance = acq_channel_file.empty() ? json{{"spec", acq_channel}, {"seed", acq_c.seed}}
                                                 : json{{"file", acq_channel_file}};
      save_records(acq_c.records, ps, acq_c.seed, provenance);
      if (!acq_save_channel.empty()) write_json(acq_save_channel, channel_to_json(ch));
      std::cout << json{{"records", ps.size()}, {"n_qubits", ps.n_qubits()}, {"path", acq_c.records}}.dump() << '\n';
    } else if (reconstruct->parsed()) {
      rec_b.merge(rec_c.config);
      require(rec_c.records, "records");
      const LoadedRecords lr = load_records(rec_c.records);
      const ChoiMatrix zeta = reconstruct_choi(lr.shadow);
      json report = {{"records", lr.shadow.size()},
                     {"trace", zeta.op().trace().real()},
                     {"hermiticity_defect", zeta.op().hermiticity_defect()}};
      if (!rec_channel.empty() || !rec_channel_file.empty()) {
        const Channel ch = resolve_channel(rec_channel, rec_channel_file, lr.header.n_qubits, rec_c.seed);
        const ChoiMatrix eta = choi_of_channel(ch).as_normalized();
        report["operator_norm_error"] = operator_norm(zeta.op().matrix() - eta.op().matrix());
      }
      if (!rec_output.empty()) {
        write_json(rec_output, {{"n_qubits", zeta.op().n_qubits()}, {"normalized", true},
                                {"matrix", matrix_json(zeta.op().matrix())}});
      }
      std::cout << report.dump() << '\n';
    } else if (estimate->parsed()) {
      est_b.merge(est_c.config);
      require(est_c.records, "records");
      const LoadedRecords lr = load_records(est_c.records);
      const int n = lr.header.n_qubits;
      json report = {{"records", lr.shadow.size()}, {"k", est_k}};
      if (!est_transition.empty()) {
        const auto comma = est_transition.find(',');
        if (comma == std::string::npos) throw ConfigError("--transition expects i,f");
        BitString i;
        BitString f;
        try {
          i = BitString::parse(est_transition.substr(0, comma));
          f = BitString::parse(est_transition.substr(comma + 1));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("--transition: ") + e.what());
        }
        const TransitionEstimate t = transition_probability(lr.shadow, i, f, est_k);
        report["transition_raw"] = t.raw;
        report["transition_clipped"] = t.clipped;
      } else if (!est_early.empty() || !est_late.empty()) {
        require(est_early, "early");
        require(est_late, "late");
        const CorrelatorSpec spec{input_state_arg(est_input, n), pauli_arg(est_early, n, "--early"),
                                  pauli_arg(est_late, n, "--late")};
        const Complex v = multitime_correlator_exact_input(lr.shadow, spec, est_k);
        report["correlator"] = {v.real(), v.imag()};
        report["fast_path"] = fast_path_applies(lr.shadow, spec);
      } else {
        require(est_observable, "observable");
        const DenseOperator o = pauli_arg(est_observable, n, "--observable").to_operator();
        report["value"] = estimate_channel_functional(lr.shadow, input_state_arg(est_input, n), o, est_k);
      }
      std::cout << report.dump() << '\n';
    } else if (compose->parsed()) {
      cmp_b.merge(cmp_c.config);
      require(cmp_c.records, "records");
      require(cmp_second, "records-second");
      const LoadedRecords x = load_records(cmp_c.records);
      const LoadedRecords y = load_records(cmp_second);
      const WeightedSnapshotSum sum = compose_process_shadows(x.shadow, y.shadow);
      const Matrix c = sum.materialize();
      if (!cmp_output.empty()) {
        write_json(cmp_output, {{"n_qubits", sum.n_qubits()}, {"normalized", true}, {"matrix", matrix_json(c)}});
      }
      std::cout << json{{"terms", sum.size()}, {"trace", c.trace().real()}}.dump() << '\n';
    } else if (verify->parsed()) {
      uni_b.merge(uni_c.config);
      require(uni_c.records, "records");
      uni_opts.seed = uni_c.seed;
      const LoadedRecords lr = load_records(uni_c.records);
      const UnitarityResult r = unitarity_verdict(lr.shadow, uni_opts);
      std::cout << json{{"verdict", to_string(r.verdict)}, {"purity", r.purity},      {"lower", r.lower},
                        {"upper", r.upper},                 {"threshold", r.threshold}, {"confidence", r.confidence}}
                       .dump()
                << '\n';
    } else if (budget->parsed()) {
      bud_b.merge(bud_c.config);
      bud_q.ensemble_in = ensemble_arg(bud_in);
      bud_q.ensemble_out = ensemble_arg(bud_out);
      if (bud_observables.empty()) throw ConfigError("budget needs at least one --observable");
      for (const auto& o : bud_observables) {
        bud_q.observables.push_back(ObservableSpec::from_pauli(pauli_arg(o, bud_q.n_qubits, "--observable")));
      }
      for (const auto& s : bud_inputs) {
        if (s.find_first_not_of("01") == std::string::npos) {
          const BitString b = BitString::parse(s);
          if (b.size() != bud_q.n_qubits) throw ConfigError("--input '" + s + "' has the wrong length");
          bud_q.input_states.push_back(ObservableSpec::basis_projector(b));
        } else {
          bud_q.input_states.push_back(ObservableSpec::from_pauli(pauli_arg(s, bud_q.n_qubits, "--input")));
        }
      }
      ComplexityAnswer a;
      try {
        a = sample_budget(bud_q);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      json pairs = json::array();
      for (const auto& p : a.per_pair_f_values) {
        pairs.push_back({{"input", p.input}, {"observable", p.observable}, {"f_in", p.f_in}, {"f_out", p.f_out}});
      }
      json bounds = json::array();
      for (const auto& b : a.state_bounds) {
        bounds.push_back({{"observable", b.observable}, {"shifted", b.shifted}, {"unshifted", b.unshifted}});
      }
      std::cout << json{{"mode", a.process ? "process" : "state"}, {"K", a.k}, {"N", a.n}, {"m", a.m},
                        {"f_values", pairs}, {"shadow_norm_bounds", bounds}}
                       .dump()
                << '\n';
    } else if (experiment->parsed()) {
      ExperimentConfig cfg = exp_c.config.empty() ? ExperimentConfig{} : load_experiment_config(exp_c.config);
      if (exp_seed) cfg.seed = *exp_seed;
      std::optional<std::filesystem::path> records_dir;
      if (!exp_c.records.empty()) {
        cfg.save_records = true;
        records_dir = exp_c.records;
      } else if (cfg.save_records) {
        records_dir = std::filesystem::path(exp_out) / "records";
      }
      const ExperimentResult r = run_experiment(cfg, records_dir);
      write_experiment_outputs(r, exp_out);
      json summary = json::array();
      for (const auto& s : r.summaries) {
        summary.push_back({{"series", s.series}, {"mean_b", s.mean_b}, {"std_b", s.std_b}, {"mean_r2", s.mean_r2}});
      }
      std::cout << json{{"experiment", cfg.experiment}, {"out", exp_out}, {"summaries", summary}}.dump() << '\n';
    } else if (gnuplot->parsed()) {
      const std::filesystem::path dir(gp_results);
      write_gnuplot(dir / "results.csv", gp_out.empty() ? dir : std::filesystem::path(gp_out));
    }
  } catch (const InfeasibleSizeError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
