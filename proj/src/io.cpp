#include "sepnmf/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sepnmf/error.hpp"

namespace sepnmf::io {

namespace {

constexpr std::array<char, 4> kMagic{'S', 'N', 'M', 'F'};

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::array<unsigned char, sizeof(T)> b;
    std::memcpy(b.data(), &v, sizeof(T));
    std::reverse(b.begin(), b.end());
    std::memcpy(&v, b.data(), sizeof(T));
  }
  return v;
}

template <typename T>
void put(std::ostream& out, T v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InvalidArgument("raw matrix: truncated input");
  return to_little(v);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

MatrixFormat parse_format(std::string_view name) {
  if (name == "csv") return MatrixFormat::Csv;
  if (name == "raw") return MatrixFormat::RawF64;
  throw InvalidArgument("unknown matrix format '" + std::string(name) + "' (expected csv or raw)");
}

std::string format_name(MatrixFormat f) { return f == MatrixFormat::Csv ? "csv" : "raw"; }

DenseMatrix read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = body.find(',', start);
      const std::string_view cell =
          trim(body.substr(start, comma == std::string_view::npos ? body.npos : comma - start));
      double v = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (cell.empty() || ec != std::errc() || ptr != last) {
        throw InvalidArgument("csv line " + std::to_string(lineno) + ": bad number '" +
                              std::string(cell) + "'");
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidArgument("csv line " + std::to_string(lineno) + ": expected " +
                            std::to_string(rows.front().size()) + " values, got " +
                            std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument("csv: no data");
  const std::size_t m = rows.size();
  const std::size_t n = rows.front().size();
  std::vector<double> data(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) data[j * m + i] = rows[i][j];
  }
  return DenseMatrix(m, n, std::move(data));
}

void write_csv(std::ostream& out, const DenseMatrix& m) {
  std::array<char, 32> buf{};
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out.put(',');
      auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), m(i, j),
                                     std::chars_format::general, 17);
      out.write(buf.data(), ptr - buf.data());
    }
    out.put('\n');
  }
}

DenseMatrix read_raw(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || magic != kMagic) throw InvalidArgument("raw matrix: bad magic");
  const auto rows = get<std::uint32_t>(in);
  const auto cols = get<std::uint32_t>(in);
  if (get<std::uint32_t>(in) != 0) throw InvalidArgument("raw matrix: reserved header word must be 0");
  std::vector<double> data(static_cast<std::size_t>(rows) * cols);
  for (double& v : data) v = get<double>(in);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw InvalidArgument("raw matrix: trailing bytes after payload");
  }
  return DenseMatrix(rows, cols, std::move(data));
}

void write_raw(std::ostream& out, const DenseMatrix& m) {
  if (m.rows() > UINT32_MAX || m.cols() > UINT32_MAX) {
    throw InvalidArgument("raw matrix: dimensions exceed 32 bits");
  }
  out.write(kMagic.data(), 4);
  put(out, static_cast<std::uint32_t>(m.rows()));
  put(out, static_cast<std::uint32_t>(m.cols()));
  put(out, std::uint32_t{0});
  for (double v : m.data()) put(out, v);
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::array<char, 4> head{};
  in.read(head.data(), 4);
  const bool raw = in.gcount() == 4 && head == kMagic;
  in.clear();
  in.seekg(0);
  try {
    return raw ? read_raw(in) : read_csv(in);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

void write_matrix(const std::filesystem::path& path, const DenseMatrix& m, MatrixFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  if (format == MatrixFormat::Csv) {
    write_csv(out, m);
  } else {
    write_raw(out, m);
  }
  if (!out) throw InvalidArgument("write failed for " + path.string());
}

nlohmann::json to_json(const ExtractionResult& r, bool one_based) {
  nlohmann::json idx = nlohmann::json::array();
  for (std::size_t j : r.indices) idx.push_back(j + (one_based ? 1 : 0));
  return {{"indices", idx},
          {"one_based", one_based},
          {"step_scores", r.step_scores},
          {"residual_norms", r.residual_norms},
          {"step_margins", r.step_margins}};
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j{{"exp_id", c.exp_id}, {"m", c.m},         {"r", c.r},
                   {"delta", c.delta},   {"seed", c.seed}};
  if (c.exp_id == 2 || c.exp_id == 4) j["n_mix"] = c.mixtures();
  return j;
}

nlohmann::json to_json(const RecoveryReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const SweepPoint& p : r.per_delta) {
    pts.push_back({{"delta", p.delta},
                   {"mean_recovery", p.mean_recovery},
                   {"trials", p.trials},
                   {"perfect_trials", p.perfect_trials},
                   {"failed_trials", p.failed_trials}});
  }
  nlohmann::json j{{"algorithm", r.algorithm},
                   {"exp_id", r.exp_id},
                   {"threshold_full", r.threshold_full},
                   {"threshold_99", r.threshold_99},
                   {"last_perfect_delta", r.last_perfect_delta},
                   {"noiseless_failure", r.noiseless_failure},
                   {"per_delta", pts}};
  j["bound_predicted"] = r.bound_predicted ? nlohmann::json(*r.bound_predicted) : nlohmann::json();
  return j;
}

nlohmann::json to_json(const BoundReport& b) {
  nlohmann::json j{{"eps_max", b.eps_max},
                   {"err_factor", b.err_factor},
                   {"noise_per_delta", b.noise_per_delta},
                   {"predicted_delta", b.predicted_delta}};
  j["observed_delta"] = b.observed_delta ? nlohmann::json(*b.observed_delta) : nlohmann::json();
  return j;
}

nlohmann::json to_json(const OutlierResult& r, bool one_based) {
  const std::size_t off = one_based ? 1 : 0;
  nlohmann::json scores = nlohmann::json::array();
  for (const auto& [idx, s] : r.scores) scores.push_back({{"index", idx + off}, {"score", s}});
  nlohmann::json cands = nlohmann::json::array();
  for (std::size_t c : r.candidates) cands.push_back(c + off);
  return {{"kept", to_json(r.kept, one_based)},
          {"candidates", cands},
          {"scores", scores},
          {"qp", {{"objective", r.solution.objective},
                  {"iterations", r.solution.iterations},
                  {"converged", r.solution.converged}}}};
}

nlohmann::json truth_sidecar(const ExperimentConfig& c, const GroundTruth& t) {
  nlohmann::json map = nlohmann::json::array();
  for (const auto& k : t.pure_column_map) map.push_back(k ? nlohmann::json(*k) : nlohmann::json());
  return {{"schema_version", kSchemaVersion},
          {"kind", "sepnmf.synth"},
          {"config", to_json(c)},
          {"rows", t.W.rows()},
          {"cols", t.pure_column_map.size()},
          {"pure_column_map", map}};
}

void write_recovery_csv(std::ostream& out, const std::vector<RecoveryReport>& reports) {
  out << "exp,algorithm,delta,mean_recovery,trials,perfect_trials,failed_trials\n";
  std::array<char, 32> buf{};
  for (const RecoveryReport& r : reports) {
    for (const SweepPoint& p : r.per_delta) {
      auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), p.delta,
                                     std::chars_format::general, 17);
      out << r.exp_id << ',' << r.algorithm << ',' << std::string_view(buf.data(), end - buf.data())
          << ',';
      auto [end2, ec2] = std::to_chars(buf.data(), buf.data() + buf.size(), p.mean_recovery,
                                       std::chars_format::general, 17);
      out << std::string_view(buf.data(), end2 - buf.data()) << ',' << p.trials << ','
          << p.perfect_trials << ',' << p.failed_trials << '\n';
    }
  }
}

}  // namespace sepnmf::io
