#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mubinfo/experiments.hpp"
#include "mubinfo/infomeasure.hpp"
#include "mubinfo/measurement.hpp"
#include "mubinfo/state.hpp"

namespace mubinfo {

// Matrix documents: {"dim": d, "re": [[...], ...], "im": [[...], ...]}, both
// arrays d rows of d numbers, row-major. Vectors: {"re": [...], "im": [...]}.

nlohmann::json matrix_to_json(const ComplexMatrix& m);
/// Shape violations name the offending field.
ComplexMatrix matrix_from_json(const nlohmann::json& doc);
nlohmann::json vector_to_json(std::span<const Complex> v);

DensityMatrix density_from_json(const nlohmann::json& doc);
DensityMatrix load_density(const std::filesystem::path& path);
void save_density(const DensityMatrix& rho, const std::filesystem::path& path);

enum class OutputFormat { json, csv };

/// Doubles in CSV use 17 significant digits and '.' regardless of locale.
std::string format_double(double x);

nlohmann::json to_json(const StateDiagnostics& diag);
nlohmann::json to_json(const InfoReport& report);
nlohmann::json to_json(const ExperimentResult& result);
nlohmann::json to_json(const MubSet& mubs);
nlohmann::json to_json(const Povm& povm);

/// Long format: quantity,label,value. One shannon_bits and one bz_value row
/// per basis, then i_total, shannon_sum, von_neumann_bits, purity.
std::string report_csv(const InfoReport& report);

/// One row per trial record: index,label,input_digest,residual followed by
/// the record's named values in first-appearance order (blank if absent).
std::string experiment_csv(const ExperimentResult& result);

/// Serialized report in the requested format, written to path.
void save_report(const InfoReport& report, const std::filesystem::path& path, OutputFormat format);

}  // namespace mubinfo
