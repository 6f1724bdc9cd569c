#include "procshadow/harness.hpp"

#include <fstream>
#include <sstream>

namespace procshadow {

using nlohmann::json;

RecordFormatError::RecordFormatError(std::size_t line, const std::string& what)
    : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

json matrix_to_json(const Matrix& m) {
  json flat = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) flat.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return flat;
}

Matrix matrix_from_json(const json& j, Eigen::Index dim) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(dim * dim)) {
    throw std::invalid_argument("matrix must be a flat list of " + std::to_string(dim * dim) + " [re, im] pairs");
  }
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      const auto& e = j[static_cast<std::size_t>(i * dim + k)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw std::invalid_argument("matrix entries must be [re, im] pairs");
      }
      m(i, k) = Complex{e[0].get<double>(), e[1].get<double>()};
    }
  }
  return m;
}

BitString bits_from_json(const json& j, int n, const char* field) {
  if (!j.is_string()) throw std::invalid_argument(std::string(field) + " must be a bit string");
  const BitString b = BitString::parse(j.get<std::string>());
  if (b.size() != n) throw std::invalid_argument(std::string(field) + " has the wrong length");
  return b;
}

}  // namespace

json unitary_to_json(const UnitarySpec& u) {
  if (const auto* p = std::get_if<PauliFrame>(&u)) return p->to_string();
  if (const auto* c = std::get_if<CliffordTableau>(&u)) return c->rows();
  return matrix_to_json(std::get<ExplicitUnitary>(u).u.matrix());
}

UnitarySpec unitary_from_json(const json& j, int n) {
  if (j.is_string()) {
    PauliFrame f = PauliFrame::parse(j.get<std::string>());
    if (f.n_qubits() != n) throw std::invalid_argument("Pauli frame has the wrong length");
    return f;
  }
  if (!j.is_array() || j.empty()) throw std::invalid_argument("unitary must be a string or a nonempty array");
  if (j.front().is_number_unsigned()) {
    return CliffordTableau(n, j.get<std::vector<std::uint64_t>>());
  }
  DenseOperator op(n, matrix_from_json(j, dim_of(n)));
  const Matrix defect = op.matrix().adjoint() * op.matrix() - Matrix::Identity(op.dim(), op.dim());
  if (defect.cwiseAbs().maxCoeff() > kAlgebraicTol * 100) throw std::invalid_argument("explicit frame is not unitary");
  return ExplicitUnitary{std::move(op)};
}

json channel_to_json(const Channel& ch) {
  json kraus = json::array();
  for (const auto& k : ch.kraus()) kraus.push_back(matrix_to_json(k));
  return {{"n_qubits", ch.n_qubits()}, {"kraus", kraus}};
}

Channel channel_from_json(const json& j) {
  try {
    const int n = j.at("n_qubits").get<int>();
    if (n < 1 || n > kMaxQubits) throw InfeasibleSizeError("channel size out of range");
    std::vector<Matrix> kraus;
    for (const auto& k : j.at("kraus")) kraus.push_back(matrix_from_json(k, dim_of(n)));
    if (kraus.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
    return Channel(n, std::move(kraus));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad channel description: ") + e.what());
  } catch (const InfeasibleSizeError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad channel description: ") + e.what());
  }
}

void write_records(std::ostream& out, const ProcessShadow& ps, std::uint64_t seed, const json& channel) {
  const json header = {{"format", kRecordFormatName},
                       {"version", kRecordFormatVersion},
                       {"n_qubits", ps.n_qubits()},
                       {"ensemble_in", to_string(ps.ensemble_in())},
                       {"ensemble_out", to_string(ps.ensemble_out())},
                       {"seed", seed},
                       {"channel", channel}};
  out << header.dump() << '\n';
  for (const auto& r : ps.records()) {
    const json line = {{"b_in", r.b_in.to_string()},
                       {"u_in", unitary_to_json(r.u_in)},
                       {"u_out", unitary_to_json(r.u_out)},
                       {"b_out", r.b_out.to_string()}};
    out << line.dump() << '\n';
  }
}

void save_records(const std::filesystem::path& path, const ProcessShadow& ps, std::uint64_t seed,
                  const json& channel) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_records(out, ps, seed, channel);
  if (!out) throw ConfigError("write failed for " + path.string());
}

LoadedRecords read_records(std::istream& in) {
  std::string text;
  std::size_t line_no = 0;
  RecordFileHeader header;
  bool have_header = false;
  std::vector<ShadowRecord> records;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw RecordFormatError(line_no, std::string("malformed JSON: ") + e.what());
    }
    try {
      if (!have_header) {
        if (j.value("format", std::string{}) != kRecordFormatName) throw std::invalid_argument("not a record file header");
        header.version = j.at("version").get<int>();
        if (header.version != kRecordFormatVersion) {
          throw std::invalid_argument("unsupported record format version " + std::to_string(header.version));
        }
        header.n_qubits = j.at("n_qubits").get<int>();
        if (header.n_qubits < 1 || header.n_qubits > kMaxQubits) throw std::invalid_argument("n_qubits out of range");
        header.ensemble_in = parse_ensemble(j.at("ensemble_in").get<std::string>());
        header.ensemble_out = parse_ensemble(j.at("ensemble_out").get<std::string>());
        header.seed = j.at("seed").get<std::uint64_t>();
        header.channel = j.value("channel", json{});
        have_header = true;
        continue;
      }
      const int n = header.n_qubits;
      ShadowRecord r{bits_from_json(j.at("b_in"), n, "b_in"), unitary_from_json(j.at("u_in"), n),
                     unitary_from_json(j.at("u_out"), n), bits_from_json(j.at("b_out"), n, "b_out"),
                     header.ensemble_in, header.ensemble_out};
      if (!frame_matches(r.u_in, r.ensemble_in) || !frame_matches(r.u_out, r.ensemble_out)) {
        throw std::invalid_argument("frame kind does not match the ensemble in the header");
      }
      records.push_back(std::move(r));
    } catch (const RecordFormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw RecordFormatError(line_no, e.what());
    }
  }
  if (!have_header) throw RecordFormatError(line_no, "missing header");
  return {header, ProcessShadow(header.n_qubits, header.ensemble_in, header.ensemble_out, std::move(records))};
}

LoadedRecords load_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  return read_records(in);
}

}  // namespace procshadow
