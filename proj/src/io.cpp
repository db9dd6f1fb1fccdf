#include "mubinfo/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace mubinfo {

namespace {

using nlohmann::json;

std::vector<double> parse_row(const json& row, const char* field, std::size_t index, std::size_t dim) {
  if (!row.is_array() || row.size() != dim) {
    throw ValidationError(fmt::format("field '{}': row {} must be an array of {} numbers", field, index, dim));
  }
  std::vector<double> out;
  out.reserve(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    if (!row[j].is_number()) {
      throw ValidationError(fmt::format("field '{}': entry ({}, {}) is not a number", field, index, j));
    }
    out.push_back(row[j].get<double>());
  }
  return out;
}

const json& require_field(const json& doc, const char* field) {
  if (!doc.is_object()) {
    throw ValidationError("document must be a JSON object");
  }
  const auto it = doc.find(field);
  if (it == doc.end()) {
    throw ValidationError(fmt::format("missing field '{}'", field));
  }
  return *it;
}

json named_values_to_json(const NamedValues& values) {
  json out = json::object();
  for (const auto& [key, value] : values) {
    out[key] = value;
  }
  return out;
}

const char* criterion_name(PassCriterion c) {
  return c == PassCriterion::max_residual ? "max_residual" : "three_sigma";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw ValidationError(fmt::format("cannot open '{}' for writing", path.string()));
  }
  file << text;
  if (!file) {
    throw ValidationError(fmt::format("failed writing '{}'", path.string()));
  }
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json re_row = json::array();
    json im_row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"dim", m.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const json& doc) {
  const auto& dim_field = require_field(doc, "dim");
  if (!dim_field.is_number_integer() || dim_field.get<long long>() < 1 ||
      dim_field.get<long long>() > static_cast<long long>(kMaxDim)) {
    throw ValidationError(fmt::format("field 'dim' must be an integer in [1, {}]", kMaxDim));
  }
  const auto dim = static_cast<std::size_t>(dim_field.get<long long>());
  const auto& re = require_field(doc, "re");
  const auto& im = require_field(doc, "im");
  for (const auto& [name, field] : {std::pair<const char*, const json*>{"re", &re}, {"im", &im}}) {
    if (!field->is_array() || field->size() != dim) {
      throw ValidationError(fmt::format("field '{}' must be an array of {} rows", name, dim));
    }
  }
  std::vector<Complex> entries;
  entries.reserve(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto re_row = parse_row(re[i], "re", i, dim);
    const auto im_row = parse_row(im[i], "im", i, dim);
    for (std::size_t j = 0; j < dim; ++j) {
      entries.emplace_back(re_row[j], im_row[j]);
    }
  }
  return ComplexMatrix(dim, std::move(entries));
}

json vector_to_json(std::span<const Complex> v) {
  json re = json::array();
  json im = json::array();
  for (const auto& z : v) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

DensityMatrix density_from_json(const json& doc) { return density_from_matrix(matrix_from_json(doc)); }

DensityMatrix load_density(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw ValidationError(fmt::format("cannot open input file '{}'", path.string()));
  }
  json doc;
  try {
    doc = json::parse(file);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("parse error in '{}': {}", path.string(), e.what()));
  }
  return density_from_json(doc);
}

void save_density(const DensityMatrix& rho, const std::filesystem::path& path) {
  write_file(path, matrix_to_json(rho.matrix()).dump(2) + "\n");
}

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

json to_json(const StateDiagnostics& diag) {
  return json{{"hermiticity_residual", diag.hermiticity_residual},
              {"trace_residual", diag.trace_residual},
              {"min_eigenvalue", diag.min_eigenvalue},
              {"tolerance", kStateTolerance},
              {"valid", diag.valid()}};
}

json to_json(const InfoReport& report) {
  json bases = json::array();
  for (const auto& b : report.bases) {
    bases.push_back(json{{"label", b.label}, {"shannon_bits", b.shannon_bits}, {"bz_value", b.bz_value}});
  }
  return json{{"bases", std::move(bases)},
              {"totals",
               {{"i_total", report.i_total},
                {"shannon_sum", report.shannon_sum},
                {"von_neumann_bits", report.von_neumann_bits},
                {"purity", report.purity}}}};
}

json to_json(const ExperimentResult& result) {
  json records = json::array();
  for (const auto& r : result.records) {
    records.push_back(json{{"index", r.index},
                           {"label", r.label},
                           {"input_digest", r.input_digest},
                           {"values", named_values_to_json(r.values)},
                           {"residual", r.residual}});
  }
  json summary{{"max_residual", result.summary.max_residual}, {"mean", result.summary.mean}};
  summary["standard_error"] = result.summary.standard_error ? json(*result.summary.standard_error) : json(nullptr);
  summary["extras"] = named_values_to_json(result.summary.extras);
  return json{{"experiment", result.name},
              {"dim", result.dim},
              {"seed", result.seed},
              {"trials", result.trials},
              {"tolerance", result.tolerance},
              {"criterion", criterion_name(result.criterion)},
              {"passed", result.passed},
              {"summary", std::move(summary)},
              {"records", std::move(records)}};
}

json to_json(const MubSet& mubs) {
  json bases = json::array();
  for (const auto& b : mubs.bases()) {
    json vectors = json::array();
    for (const auto& v : b.basis()) {
      vectors.push_back(vector_to_json(v));
    }
    bases.push_back(json{{"label", b.label()}, {"vectors", std::move(vectors)}});
  }
  return json{{"dim", mubs.dim()}, {"bases", std::move(bases)}};
}

json to_json(const Povm& povm) {
  json elements = json::array();
  for (std::size_t k = 0; k < povm.size(); ++k) {
    auto element = matrix_to_json(povm.elements()[k]);
    element["label"] = povm.labels()[k];
    elements.push_back(std::move(element));
  }
  return json{{"dim", povm.dim()}, {"elements", std::move(elements)}};
}

std::string report_csv(const InfoReport& report) {
  std::ostringstream out;
  out << "quantity,label,value\n";
  for (const auto& b : report.bases) {
    out << "shannon_bits," << b.label << ',' << format_double(b.shannon_bits) << '\n';
    out << "bz_value," << b.label << ',' << format_double(b.bz_value) << '\n';
  }
  out << "i_total,," << format_double(report.i_total) << '\n';
  out << "shannon_sum,," << format_double(report.shannon_sum) << '\n';
  out << "von_neumann_bits,," << format_double(report.von_neumann_bits) << '\n';
  out << "purity,," << format_double(report.purity) << '\n';
  return out.str();
}

std::string experiment_csv(const ExperimentResult& result) {
  std::vector<std::string> keys;
  for (const auto& r : result.records) {
    for (const auto& [key, value] : r.values) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        keys.push_back(key);
      }
    }
  }
  std::ostringstream out;
  out << "index,label,input_digest,residual";
  for (const auto& key : keys) {
    out << ',' << key;
  }
  out << '\n';
  for (const auto& r : result.records) {
    out << r.index << ',' << r.label << ',' << r.input_digest << ',' << format_double(r.residual);
    for (const auto& key : keys) {
      out << ',';
      const auto it = std::find_if(r.values.begin(), r.values.end(), [&](const auto& kv) { return kv.first == key; });
      if (it != r.values.end()) {
        out << format_double(it->second);
      }
    }
    out << '\n';
  }
  return out.str();
}

void save_report(const InfoReport& report, const std::filesystem::path& path, OutputFormat format) {
  write_file(path, format == OutputFormat::json ? to_json(report).dump(2) + "\n" : report_csv(report));
}

}  // namespace mubinfo
