#include "mubinfo/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mubinfo/experiments.hpp"
#include "mubinfo/infomeasure.hpp"
#include "mubinfo/io.hpp"
#include "mubinfo/measurement.hpp"
#include "mubinfo/state.hpp"

namespace mubinfo {

namespace {

using nlohmann::json;

constexpr const char* kCsvHelp =
    "CSV layouts (--format csv; 17 significant digits, '.' decimal point):\n"
    "  check, entropy, bzinfo  quantity,label,value\n"
    "  report                  quantity,label,value (shannon_bits and bz_value per basis,\n"
    "                          then i_total, shannon_sum, von_neumann_bits, purity)\n"
    "  mubs                    basis,label,vector,component,re,im\n"
    "  povm-eq1                element,label,trace[,probability]\n"
    "  sequential              first_outcome,second_outcome,probability\n"
    "  experiments             index,label,input_digest,residual,<record values...>\n";

struct Options {
  std::string input;
  std::optional<std::size_t> dim;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  double tolerance = 1e-10;
  std::string format = "json";
  std::string out;
  bool normalized = false;
  std::size_t first = 0;
  std::size_t second = 1;
};

struct Outcome {
  std::string text;
  int exit_code = kExitOk;
};

class LongCsv {
 public:
  LongCsv() { out_ << "quantity,label,value\n"; }
  void row(std::string_view quantity, std::string_view label, double value) {
    out_ << quantity << ',' << label << ',' << format_double(value) << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

BzScale scale_of(const Options& o) { return o.normalized ? BzScale::normalized : BzScale::centered; }

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

void check_dim_flag(const Options& o, std::size_t actual) {
  if (o.dim && *o.dim != actual) {
    throw ValidationError(fmt::format("--dim {} does not match the input dimension {}", *o.dim, actual));
  }
}

DensityMatrix load_input(const Options& o) {
  auto rho = load_density(o.input);
  check_dim_flag(o, rho.dim());
  return rho;
}

std::size_t require_dim(const Options& o) {
  if (!o.dim) {
    throw ValidationError("--dim is required for this command");
  }
  return *o.dim;
}

// Canonical set unless a seed was given.
MubSet mubs_for(const Options& o, std::size_t dim) { return mub_set(dim, o.seed); }

void describe_mub_choice(const Options& o, json& doc) {
  doc["mub_set"] = o.seed ? "rotated" : "canonical";
  doc["seed"] = o.seed ? json(*o.seed) : json(nullptr);
}

Outcome cmd_check(const Options& o) {
  std::ifstream probe(o.input);
  if (!probe) {
    throw ValidationError(fmt::format("cannot open input file '{}'", o.input));
  }
  json doc;
  try {
    doc = json::parse(probe);
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("parse error in '{}': {}", o.input, e.what()));
  }
  const auto m = matrix_from_json(doc);
  check_dim_flag(o, m.dim());
  const auto diag = diagnose_state(m);
  const int code = diag.valid() ? kExitOk : kExitUsage;
  if (o.format == "csv") {
    LongCsv csv;
    csv.row("hermiticity_residual", "", diag.hermiticity_residual);
    csv.row("trace_residual", "", diag.trace_residual);
    csv.row("min_eigenvalue", "", diag.min_eigenvalue);
    csv.row("valid", "", diag.valid() ? 1.0 : 0.0);
    return {csv.str(), code};
  }
  auto out = to_json(diag);
  out["dim"] = m.dim();
  return {dump(out), code};
}

Outcome cmd_entropy(const Options& o) {
  const auto rho = load_input(o);
  const auto eig = hermitian_eig(rho.matrix());
  const auto eigenbasis = ProjectiveMeasurement::from_unitary(eig.eigenvectors, "eigenbasis");
  const double s = von_neumann_entropy(rho);
  const double h_eigen = shannon_entropy(measurement_probabilities(rho, eigenbasis));
  if (o.format == "csv") {
    LongCsv csv;
    csv.row("von_neumann_bits", "", s);
    csv.row("eigenbasis_shannon_bits", "", h_eigen);
    csv.row("purity", "", purity(rho));
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
      csv.row("eigenvalue", std::to_string(k), eig.eigenvalues[k]);
    }
    return {csv.str()};
  }
  return {dump(json{{"dim", rho.dim()},
                    {"von_neumann_bits", s},
                    {"eigenbasis_shannon_bits", h_eigen},
                    {"purity", purity(rho)},
                    {"eigenvalues", eig.eigenvalues}})};
}

Outcome cmd_bzinfo(const Options& o) {
  const auto rho = load_input(o);
  const auto mubs = mubs_for(o, rho.dim());
  const auto scale = scale_of(o);
  const double povm_value = bz_from_povm(rho, eq1_povm(mubs), scale);
  json bases = json::array();
  double i_total = 0.0;
  LongCsv csv;
  for (const auto& basis : mubs.bases()) {
    const auto p = measurement_probabilities(rho, basis);
    const double value = bz_measure(p, scale);
    i_total += value;
    bases.push_back(json{{"label", basis.label()}, {"probabilities", p.values()}, {"bz_value", value}, {"bz_raw", bz_raw(p)}});
    csv.row("bz_value", basis.label(), value);
  }
  if (o.format == "csv") {
    csv.row("i_total", "", i_total);
    csv.row("bz_from_povm", "", povm_value);
    return {csv.str()};
  }
  json doc{{"dim", rho.dim()},
           {"normalized", o.normalized},
           {"bases", std::move(bases)},
           {"i_total", i_total},
           {"bz_from_povm", povm_value}};
  describe_mub_choice(o, doc);
  return {dump(doc)};
}

Outcome cmd_report(const Options& o) {
  const auto rho = load_input(o);
  const auto report = make_info_report(rho, mubs_for(o, rho.dim()), scale_of(o));
  if (o.format == "csv") {
    return {report_csv(report)};
  }
  auto doc = to_json(report);
  doc["dim"] = rho.dim();
  doc["normalized"] = o.normalized;
  describe_mub_choice(o, doc);
  return {dump(doc)};
}

Outcome cmd_mubs(const Options& o) {
  const auto mubs = mubs_for(o, require_dim(o));
  if (o.format == "csv") {
    std::ostringstream csv;
    csv << "basis,label,vector,component,re,im\n";
    for (std::size_t b = 0; b < mubs.bases().size(); ++b) {
      const auto& basis = mubs.bases()[b];
      for (std::size_t v = 0; v < basis.dim(); ++v) {
        for (std::size_t k = 0; k < basis.dim(); ++k) {
          const auto z = basis.basis()[v][k];
          csv << b << ',' << basis.label() << ',' << v << ',' << k << ',' << format_double(z.real()) << ','
              << format_double(z.imag()) << '\n';
        }
      }
    }
    return {csv.str()};
  }
  auto doc = to_json(mubs);
  doc["overlap_residual"] = mub_overlap_residual(mubs.bases());
  describe_mub_choice(o, doc);
  return {dump(doc)};
}

Outcome cmd_povm(const Options& o) {
  std::optional<DensityMatrix> rho;
  if (!o.input.empty()) {
    rho = load_input(o);
  }
  const std::size_t dim = rho ? rho->dim() : require_dim(o);
  const auto povm = eq1_povm(mubs_for(o, dim));
  std::optional<ProbabilityDistribution> q;
  if (rho) {
    q = povm_probabilities(*rho, povm);
  }
  if (o.format == "csv") {
    std::ostringstream csv;
    csv << "element,label,trace" << (q ? ",probability" : "") << '\n';
    for (std::size_t k = 0; k < povm.size(); ++k) {
      csv << k << ',' << povm.labels()[k] << ',' << format_double(trace(povm.elements()[k]).real());
      if (q) {
        csv << ',' << format_double((*q)[k]);
      }
      csv << '\n';
    }
    return {csv.str()};
  }
  auto doc = to_json(povm);
  ComplexMatrix sum(dim);
  for (const auto& e : povm.elements()) {
    sum = add(sum, e);
  }
  doc["completeness_residual"] = max_abs_difference(sum, ComplexMatrix::identity(dim));
  if (q) {
    doc["probabilities"] = q->values();
    doc["bz_value"] = bz_measure(*q, scale_of(o));
  }
  describe_mub_choice(o, doc);
  return {dump(doc)};
}

Outcome cmd_sequential(const Options& o) {
  const auto rho = load_input(o);
  const auto mubs = mubs_for(o, rho.dim());
  const std::size_t count = mubs.bases().size();
  if (o.first >= count || o.second >= count) {
    throw ValidationError(fmt::format("--first/--second must index one of the {} MUB bases", count));
  }
  const auto& first = mubs.bases()[o.first];
  const auto& second = mubs.bases()[o.second];
  const auto outcome = sequential_measure(rho, first, second);
  const std::size_t d = rho.dim();
  if (o.format == "csv") {
    std::ostringstream csv;
    csv << "first_outcome,second_outcome,probability\n";
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        csv << a << ',' << b << ',' << format_double(outcome(a, b)) << '\n';
      }
    }
    return {csv.str()};
  }
  json joint = json::array();
  for (std::size_t a = 0; a < d; ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < d; ++b) {
      row.push_back(outcome(a, b));
    }
    joint.push_back(std::move(row));
  }
  const auto direct = measurement_probabilities(rho, second);
  const auto second_marginal = outcome.second_marginal();
  json doc{{"dim", d},
           {"first", first.label()},
           {"second", second.label()},
           {"joint", std::move(joint)},
           {"first_marginal", outcome.first_marginal().values()},
           {"second_marginal", second_marginal.values()},
           {"direct_second", direct.values()},
           {"second_marginal_shannon_bits", shannon_entropy(second_marginal)},
           {"direct_second_shannon_bits", shannon_entropy(direct)}};
  describe_mub_choice(o, doc);
  return {dump(doc)};
}

Outcome cmd_experiment(const std::string& name, std::size_t default_trials, const Options& o, std::ostream& err) {
  ExperimentConfig cfg;
  cfg.name = name;
  cfg.dim = o.dim.value_or(2);
  cfg.trials = o.trials.value_or(default_trials);
  cfg.seed = o.seed.value_or(0);
  cfg.tolerance = o.tolerance;
  cfg.output_path = o.out;
  if (!o.seed) {
    err << "mubinfo: seed = 0 (default; pass --seed to change)\n";
  } else {
    err << "mubinfo: seed = " << *o.seed << '\n';
  }
  if (!o.input.empty()) {
    cfg.state = load_density(o.input);
    if (!o.dim) {
      cfg.dim = cfg.state->dim();
    }
    check_dim_flag(o, cfg.state->dim());
  }
  const auto result = run_experiment(cfg);
  err << fmt::format("mubinfo: {} {} (max residual {:.3e}, tolerance {:.0e})\n", name,
                     result.passed ? "PASS" : "FAIL", result.summary.max_residual, cfg.tolerance);
  const int code = result.passed ? kExitOk : kExitExperimentFailed;
  if (o.format == "csv") {
    return {experiment_csv(result), code};
  }
  return {dump(to_json(result)), code};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant information measures over mutually unbiased bases"};
  app.require_subcommand(1);
  app.footer(kCsvHelp);

  Options o;
  std::function<Outcome()> action;

  const auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", o.out, "Write output to PATH instead of standard output");
  };
  const auto add_input = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--input", o.input, "Density-matrix JSON file {dim, re, im}");
    if (required) {
      opt->required();
    }
  };
  const auto add_dim = [&](CLI::App* sub) { sub->add_option("--dim", o.dim, "Hilbert-space dimension"); };
  const auto add_seed = [&](CLI::App* sub, const char* help) { sub->add_option("--seed", o.seed, help); };
  const auto add_normalized = [&](CLI::App* sub) {
    sub->add_flag("--normalized", o.normalized, "Scale the BZ measure by n/(n-1) so its maximum is 1");
  };
  const char* mub_seed_help = "Rotate the canonical MUB set by a Haar unitary drawn from this seed";

  auto* check = app.add_subcommand("check", "Report Hermiticity, trace and positivity residuals of a matrix");
  add_input(check, true);
  add_dim(check);
  add_format(check);
  check->callback([&] { action = [&] { return cmd_check(o); }; });

  auto* entropy = app.add_subcommand("entropy", "Von Neumann entropy and eigenbasis Shannon entropy");
  add_input(entropy, true);
  add_dim(entropy);
  add_format(entropy);
  entropy->callback([&] { action = [&] { return cmd_entropy(o); }; });

  auto* bzinfo = app.add_subcommand("bzinfo", "BZ measure per MUB basis, total information, single-POVM value");
  add_input(bzinfo, true);
  add_dim(bzinfo);
  add_seed(bzinfo, mub_seed_help);
  add_normalized(bzinfo);
  add_format(bzinfo);
  bzinfo->callback([&] { action = [&] { return cmd_bzinfo(o); }; });

  auto* report = app.add_subcommand("report", "Full information report over a complete MUB set");
  add_input(report, true);
  add_dim(report);
  add_seed(report, mub_seed_help);
  add_normalized(report);
  add_format(report);
  report->callback([&] { action = [&] { return cmd_report(o); }; });

  auto* mubs = app.add_subcommand("mubs", "Export a complete MUB set (prime d up to 13)");
  add_dim(mubs);
  add_seed(mubs, mub_seed_help);
  add_format(mubs);
  mubs->callback([&] { action = [&] { return cmd_mubs(o); }; });

  auto* povm = app.add_subcommand("povm-eq1", "Export the (d+1)d-outcome POVM built from a MUB set");
  add_input(povm, false);
  add_dim(povm);
  add_seed(povm, mub_seed_help);
  add_normalized(povm);
  add_format(povm);
  povm->callback([&] { action = [&] { return cmd_povm(o); }; });

  auto* sequential = app.add_subcommand("sequential", "Joint statistics of two consecutive MUB measurements");
  add_input(sequential, true);
  add_dim(sequential);
  add_seed(sequential, mub_seed_help);
  sequential->add_option("--first", o.first, "Index of the first basis in the MUB set (default 0)");
  sequential->add_option("--second", o.second, "Index of the second basis in the MUB set (default 1)");
  add_format(sequential);
  sequential->callback([&] { action = [&] { return cmd_sequential(o); }; });

  const auto add_experiment = [&](const char* name, const char* help, std::size_t default_trials, bool input) {
    auto* sub = app.add_subcommand(name, help);
    add_dim(sub);
    sub->add_option("--trials", o.trials, fmt::format("Number of trials (default {})", default_trials));
    add_seed(sub, "Seed for all randomness (default 0)");
    sub->add_option("--tolerance", o.tolerance, "Pass tolerance (default 1e-10)");
    if (input) {
      add_input(sub, false);
    }
    add_format(sub);
    sub->callback([&, name = std::string(name), default_trials] {
      action = [&, name, default_trials] { return cmd_experiment(name, default_trials, o, err); };
    });
  };
  add_experiment("invariance", "Total information across rotated MUB sets and rotated states", 500, false);
  add_experiment("povm-invariant", "Unitary invariance of the single-POVM BZ value", 100, false);
  add_experiment("diagonal-eq", "Eigenbasis Shannon entropy against von Neumann entropy", 500, false);
  add_experiment("grouping-demo", "Grouping decomposition and its sequential-measurement breakdown", 1000, false);
  add_experiment("haar-avg", "Haar-averaged BZ measure against its closed form", 100000, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!(o.tolerance > 0.0)) {
      throw ValidationError("--tolerance must be positive");
    }
    const auto result = action();
    if (o.out.empty()) {
      out << result.text;
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file || !(file << result.text)) {
        throw ValidationError(fmt::format("cannot write '{}'", o.out));
      }
    }
    return result.exit_code;
  } catch (const ValidationError& e) {
    err << "mubinfo: error: " << e.what() << '\n';
  } catch (const NumericError& e) {
    err << "mubinfo: numeric error: " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    err << "mubinfo: error: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace mubinfo
