#pragma once

// Persistence, power-law fits and the convergence experiments.

#include "procshadow/process_shadows.hpp"
#include "procshadow/qcore.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace procshadow {

inline constexpr int kRecordFormatVersion = 1;
inline constexpr const char* kRecordFormatName = "procshadow-records";

/// Bad configuration or input file; the CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RecordFormatError : public ConfigError {
 public:
  RecordFormatError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

nlohmann::json unitary_to_json(const UnitarySpec& u);
/// Axis string: Pauli frame; integer rows: Clifford tableau; [[re, im], ...]: explicit matrix.
UnitarySpec unitary_from_json(const nlohmann::json& j, int n_qubits);

nlohmann::json channel_to_json(const Channel& ch);
Channel channel_from_json(const nlohmann::json& j);

struct RecordFileHeader {
  int version = kRecordFormatVersion;
  int n_qubits = 0;
  Ensemble ensemble_in = Ensemble::Pauli;
  Ensemble ensemble_out = Ensemble::Pauli;
  std::uint64_t seed = 0;
  /// Free-form provenance of the channel that produced the records.
  nlohmann::json channel;
};

/// JSON Lines: a header object, then one {"b_in","u_in","u_out","b_out"} object per record.
void write_records(std::ostream& out, const ProcessShadow& ps, std::uint64_t seed, const nlohmann::json& channel);
void save_records(const std::filesystem::path& path, const ProcessShadow& ps, std::uint64_t seed,
                  const nlohmann::json& channel);

struct LoadedRecords {
  RecordFileHeader header;
  ProcessShadow shadow;
};

LoadedRecords read_records(std::istream& in);
LoadedRecords load_records(const std::filesystem::path& path);

struct PowerLawFit {
  /// err ~ m^-b
  double b;
  double intercept;
  double r2;
  /// standard error of the fitted slope
  double b_stderr;
};

/// Least squares on (ln m, ln err).
PowerLawFit fit_power_law(const std::vector<double>& ms, const std::vector<double>& errs);

struct ExperimentConfig {
  std::string experiment = "choi-convergence";
  int n_qubits = 2;
  /// "random-unitary", "random-full-rank", or a named channel ("depolarizing:0.3").
  std::string channel = "random-unitary";
  /// Second stage of the composed correlator; empty means the same kind as `channel`.
  std::string channel_second;
  Ensemble ensemble_in = Ensemble::Pauli;
  Ensemble ensemble_out = Ensemble::Pauli;
  std::vector<std::size_t> grid{100, 300, 1000, 3000, 10000, 30000, 100000};
  int trials = 10;
  /// Independent batches per (trial, m); their errors are averaged.
  int repeats = 1;
  int k = 1;
  std::uint64_t seed = 1;
  /// "random" (Hilbert-Schmidt), "plus-mixed" (|+><+| on qubit 0, rest maximally mixed),
  /// "zero", "maximally-mixed".
  std::string input_state = "random";
  std::string op_early = "X";
  std::string op_late = "X";
  /// sign-statistics only
  std::size_t samples = 100000;
  int max_factors = 10;
  /// Write the largest batch of every trial to <out>/records.
  bool save_records = false;
};

/// Parses and validates; unknown keys are rejected.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ErrorPoint {
  std::string series;
  int trial;
  std::size_t m;
  double error;
};

struct SeriesFit {
  std::string series;
  int trial;
  PowerLawFit fit;
};

struct SeriesSummary {
  std::string series;
  int trials = 0;
  double mean_b = 0.0;
  double std_b = 0.0;
  double mean_r2 = 0.0;
  /// Error averaged over trials, per grid point.
  std::vector<double> mean_error;
  bool mean_error_decreasing = false;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ErrorPoint> points;
  std::vector<SeriesFit> fits;
  std::vector<SeriesSummary> summaries;
  /// Experiment-specific table (sign statistics, unitarity verdicts).
  Table table;

  const SeriesSummary& summary(const std::string& series) const;
};

/// Deterministic given the config. When records_dir is set and the config
/// asks for it, record files are written there.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::optional<std::filesystem::path>& records_dir = std::nullopt);

/// results.csv, exponents.csv, manifest.json (and table.csv when present).
void write_experiment_outputs(const ExperimentResult& r, const std::filesystem::path& dir);

/// gnuplot data blocks (one per series and trial) plus a plot script.
void write_gnuplot(const std::filesystem::path& results_csv, const std::filesystem::path& out_dir);

/// Fixed-format number for tables ("%.17g").
std::string format_number(double v);

}  // namespace procshadow
