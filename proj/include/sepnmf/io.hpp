#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sepnmf/dense_matrix.hpp"
#include "sepnmf/extraction_result.hpp"
#include "sepnmf/metrics.hpp"
#include "sepnmf/outliers.hpp"
#include "sepnmf/synth.hpp"

namespace sepnmf::io {

/// Version stamped into every JSON document written by this library.
inline constexpr int kSchemaVersion = 1;

enum class MatrixFormat { Csv, RawF64 };

/// "csv" or "raw".
MatrixFormat parse_format(std::string_view name);
std::string format_name(MatrixFormat f);

/// CSV: one line per row, comma separated, no header, values printed with 17
/// significant digits.
DenseMatrix read_csv(std::istream& in);
void write_csv(std::ostream& out, const DenseMatrix& m);

/// RawF64: 16-byte header "SNMF", u32 rows, u32 cols, u32 reserved (0), all
/// little endian, then rows * cols little-endian doubles in column-major order.
DenseMatrix read_raw(std::istream& in);
void write_raw(std::ostream& out, const DenseMatrix& m);

/// Reads either format, detected from the leading magic bytes. Errors throw
/// InvalidArgument naming the file.
DenseMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const DenseMatrix& m, MatrixFormat format);

nlohmann::json to_json(const ExtractionResult& r, bool one_based = true);
nlohmann::json to_json(const ExperimentConfig& c);
nlohmann::json to_json(const RecoveryReport& r);
nlohmann::json to_json(const BoundReport& b);
nlohmann::json to_json(const OutlierResult& r, bool one_based = true);

/// Sidecar written next to a synthetic matrix: config and pure-column map.
nlohmann::json truth_sidecar(const ExperimentConfig& c, const GroundTruth& t);

/// Rows "exp,algorithm,delta,mean_recovery,trials,perfect_trials,failed_trials".
void write_recovery_csv(std::ostream& out, const std::vector<RecoveryReport>& reports);

}  // namespace sepnmf::io
