#include "mubinfo/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "mubinfo/infomeasure.hpp"
#include "mubinfo/measurement.hpp"

namespace mubinfo {

namespace {

class Fnv1a {
 public:
  void add(std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
      hash_ ^= (word >> (8 * byte)) & 0xffu;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add(double x) { add(std::bit_cast<std::uint64_t>(x)); }
  void add(const ComplexMatrix& m) {
    for (const auto& z : m.entries()) {
      add(z.real());
      add(z.imag());
    }
  }
  std::string hex() const { return fmt::format("{:016x}", hash_); }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

double lookup(const NamedValues& values, std::string_view key) {
  const auto it = std::find_if(values.begin(), values.end(), [&](const auto& kv) { return kv.first == key; });
  if (it == values.end()) {
    throw ValidationError(fmt::format("no value named '{}'", key));
  }
  return it->second;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) {
    throw ValidationError("experiment needs at least one trial");
  }
  if (!(cfg.tolerance > 0.0)) {
    throw ValidationError(fmt::format("tolerance must be positive, got {}", cfg.tolerance));
  }
}

void require_mub_dim(const ExperimentConfig& cfg) {
  if (!is_supported_mub_dim(cfg.dim)) {
    throw ValidationError(fmt::format("{}: complete MUB set not provided for this dimension (d = {})",
                                      cfg.name, cfg.dim));
  }
}

void require_dim_range(const ExperimentConfig& cfg) {
  if (cfg.dim < 2 || cfg.dim > kMaxDim) {
    throw ValidationError(fmt::format("{}: dimension {} outside [2, {}]", cfg.name, cfg.dim, kMaxDim));
  }
}

ExperimentResult start(const ExperimentConfig& cfg, std::string name, PassCriterion criterion) {
  ExperimentResult out;
  out.name = std::move(name);
  out.dim = cfg.dim;
  out.seed = cfg.seed;
  out.trials = cfg.trials;
  out.tolerance = cfg.tolerance;
  out.criterion = criterion;
  return out;
}

// Summary and pass flag for the max-residual criterion.
void finish_max_residual(ExperimentResult& result) {
  double worst = 0.0;
  double sum = 0.0;
  for (const auto& r : result.records) {
    worst = std::max(worst, r.residual);
    sum += r.residual;
  }
  result.summary.max_residual = worst;
  result.summary.mean = result.records.empty() ? 0.0 : sum / static_cast<double>(result.records.size());
  result.passed = recompute_pass(result);
}

std::size_t draw_rank(std::size_t dim, Rng& rng) { return static_cast<std::size_t>(rng.uniform_int(1, dim)); }

}  // namespace

double TrialRecord::value(std::string_view key) const { return lookup(values, key); }

double ExperimentSummary::extra(std::string_view key) const { return lookup(extras, key); }

bool recompute_pass(const ExperimentResult& result) {
  if (result.records.empty()) {
    return false;
  }
  if (result.criterion == PassCriterion::max_residual) {
    return std::all_of(result.records.begin(), result.records.end(),
                       [&](const TrialRecord& r) { return r.residual <= result.tolerance; });
  }
  const std::size_t n = result.records.size();
  if (n < 2) {
    return false;
  }
  double mean = 0.0;
  for (const auto& r : result.records) {
    mean += r.value("bz");
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const auto& r : result.records) {
    ss += (r.value("bz") - mean) * (r.value("bz") - mean);
  }
  const double standard_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  return std::abs(mean - result.summary.extra("closed_form")) <= 3.0 * standard_error + result.tolerance;
}

ExperimentResult run_invariance_sweep(const ExperimentConfig& cfg) {
  validate_config(cfg);
  require_mub_dim(cfg);
  const std::size_t d = cfg.dim;
  const auto canonical = mub_set(d);
  auto result = start(cfg, "invariance", PassCriterion::max_residual);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, t);
    const std::size_t rank = draw_rank(d, rng);
    const auto rho = random_density(d, rank, rng);
    const auto u_first = haar_unitary(d, rng);
    const auto u_second = haar_unitary(d, rng);
    const auto u_state = haar_unitary(d, rng);

    const auto set_a = rotate(canonical, u_first);
    const auto set_b = rotate(canonical, u_second);
    const double i_a = total_information(rho, set_a);
    const double i_b = total_information(rho, set_b);
    const double i_rotated = total_information(rotate(rho, u_state), set_a);
    const double closed = purity(rho) - 1.0 / static_cast<double>(d);

    Fnv1a digest;
    digest.add(rho.matrix());
    digest.add(u_first);
    digest.add(u_second);
    digest.add(u_state);
    const double residual = std::max({std::abs(i_a - i_b), std::abs(i_a - closed), std::abs(i_b - closed),
                                      std::abs(i_rotated - i_a)});
    result.records.push_back(TrialRecord{t,
                                         "trial",
                                         digest.hex(),
                                         {{"rank", static_cast<double>(rank)},
                                          {"purity", purity(rho)},
                                          {"i_total_a", i_a},
                                          {"i_total_b", i_b},
                                          {"i_total_rotated_state", i_rotated},
                                          {"purity_minus_inv_d", closed}},
                                         residual});
  }
  finish_max_residual(result);
  return result;
}

ExperimentResult run_povm_invariant(const ExperimentConfig& cfg) {
  validate_config(cfg);
  require_mub_dim(cfg);
  const std::size_t d = cfg.dim;
  const auto mubs = mub_set(d);
  const auto povm = eq1_povm(mubs);
  const double denominator = static_cast<double>((d + 1) * (d + 1));
  auto result = start(cfg, "povm-invariant", PassCriterion::max_residual);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, t);
    const auto rho = t == 0 ? maximally_mixed(d) : random_density(d, draw_rank(d, rng), rng);
    const auto u = haar_unitary(d, rng);
    const double bz = bz_from_povm(rho, povm);
    const double bz_rotated = bz_from_povm(rotate(rho, u), povm);
    const double i_total = total_information(rho, mubs);

    Fnv1a digest;
    digest.add(rho.matrix());
    digest.add(u);
    const double residual = std::max(std::abs(bz - bz_rotated), std::abs(bz - i_total / denominator));
    result.records.push_back(TrialRecord{t,
                                         t == 0 ? "maximally-mixed" : "trial",
                                         digest.hex(),
                                         {{"bz_povm", bz},
                                          {"bz_povm_rotated", bz_rotated},
                                          {"i_total", i_total},
                                          {"i_total_scaled", i_total / denominator}},
                                         residual});
  }
  finish_max_residual(result);
  return result;
}

ExperimentResult run_diagonal_equivalence(const ExperimentConfig& cfg) {
  validate_config(cfg);
  require_dim_range(cfg);
  const std::size_t d = cfg.dim;
  auto result = start(cfg, "diagonal-eq", PassCriterion::max_residual);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, t);
    const std::size_t rank = t == 0 ? d : t == 1 ? 1 : draw_rank(d, rng);
    const auto rho = t == 0 ? maximally_mixed(d) : random_density(d, rank, rng);

    const auto eig = hermitian_eig(rho.matrix());
    const auto eigenbasis = ProjectiveMeasurement::from_unitary(eig.eigenvectors, "eigenbasis");
    const double h_eigen = shannon_entropy(measurement_probabilities(rho, eigenbasis));
    const double s = von_neumann_entropy(rho);

    Fnv1a digest;
    digest.add(rho.matrix());
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < kRandomBasesPerState; ++k) {
      const auto u = haar_unitary(d, rng);
      digest.add(u);
      const auto basis = ProjectiveMeasurement::from_unitary(u, "haar");
      min_gap = std::min(min_gap, shannon_entropy(measurement_probabilities(rho, basis)) - s);
    }
    const double residual = std::max(std::abs(h_eigen - s), std::max(0.0, -min_gap));
    result.records.push_back(TrialRecord{t,
                                         t == 0 ? "maximally-mixed" : t == 1 ? "pure" : "trial",
                                         digest.hex(),
                                         {{"rank", static_cast<double>(rank)},
                                          {"von_neumann_bits", s},
                                          {"eigenbasis_shannon_bits", h_eigen},
                                          {"min_random_basis_gap", min_gap}},
                                         residual});
  }
  finish_max_residual(result);
  return result;
}

ExperimentResult run_grouping_breakdown(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.dim != 2) {
    throw ValidationError(fmt::format("grouping-demo is defined for d = 2 only, got d = {}", cfg.dim));
  }
  auto result = start(cfg, "grouping-demo", PassCriterion::max_residual);

  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, t);
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 8));
    std::vector<double> weights(n);
    for (auto& w : weights) {
      // Exponential weights give a uniform draw on the simplex; a few exact
      // zeros exercise empty-weight groups.
      w = rng.uniform() < 0.15 ? 0.0 : -std::log(1.0 - rng.uniform());
    }
    if (std::accumulate(weights.begin(), weights.end(), 0.0) == 0.0) {
      weights[0] = 1.0;
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (auto& w : weights) {
      w /= total;
    }
    const ProbabilityDistribution p(weights);

    const std::size_t groups = static_cast<std::size_t>(rng.uniform_int(1, n));
    Partition partition(groups);
    for (std::size_t i = 0; i < n; ++i) {
      partition[rng.uniform_int(0, groups - 1)].push_back(i);
    }
    std::erase_if(partition, [](const auto& g) { return g.empty(); });

    const auto decomposition = grouping_decompose(p, partition);
    const double h = shannon_entropy(p);
    Fnv1a digest;
    for (double x : p.values()) {
      digest.add(x);
    }
    for (const auto& g : partition) {
      digest.add(static_cast<std::uint64_t>(g.size()));
      for (auto i : g) {
        digest.add(static_cast<std::uint64_t>(i));
      }
    }
    result.records.push_back(TrialRecord{t,
                                         "classical",
                                         digest.hex(),
                                         {{"outcomes", static_cast<double>(n)},
                                          {"groups", static_cast<double>(partition.size())},
                                          {"shannon_bits", h},
                                          {"coarse_bits", decomposition.coarse_bits},
                                          {"conditional_bits", decomposition.conditional_bits},
                                          {"reconstructed_bits", decomposition.reconstructed_bits}},
                                         std::abs(decomposition.reconstructed_bits - h)});
  }

  const auto mubs = mub_set(2);
  const auto& z = mubs.bases()[0];
  const auto& x = mubs.bases()[1];
  const auto rho = bloch_to_density(BlochVector{{1.0, 0.0, 0.0}});
  Fnv1a digest;
  digest.add(rho.matrix());

  const double direct = shannon_entropy(measurement_probabilities(rho, x));
  const double after_z = shannon_entropy(sequential_measure(rho, z, x).second_marginal());
  const double gap = after_z - direct;
  result.records.push_back(TrialRecord{cfg.trials,
                                       "quantum-noncommuting",
                                       digest.hex(),
                                       {{"direct_x_bits", direct}, {"x_after_z_bits", after_z}, {"gap_bits", gap}},
                                       std::abs(gap - 1.0)});

  const double after_x = shannon_entropy(sequential_measure(rho, x, x).second_marginal());
  const double commuting_gap = after_x - direct;
  result.records.push_back(TrialRecord{cfg.trials + 1,
                                       "quantum-commuting",
                                       digest.hex(),
                                       {{"direct_x_bits", direct}, {"x_after_x_bits", after_x}, {"gap_bits", commuting_gap}},
                                       std::abs(commuting_gap)});

  finish_max_residual(result);
  result.summary.extras = {{"quantum_gap_bits", gap},
                           {"commuting_gap_bits", commuting_gap},
                           {"breakdown", gap > cfg.tolerance ? 1.0 : 0.0}};
  return result;
}

ExperimentResult run_haar_convergence(const ExperimentConfig& cfg) {
  validate_config(cfg);
  require_dim_range(cfg);
  if (cfg.trials < kMinConvergenceTrials) {
    throw ValidationError(
        fmt::format("haar-avg needs at least {} trials, got {}", kMinConvergenceTrials, cfg.trials));
  }
  ComplexVector ground(cfg.dim);
  ground[0] = 1.0;
  const auto rho = cfg.state ? *cfg.state : pure_state(ground);
  if (rho.dim() != cfg.dim) {
    throw ValidationError(fmt::format("haar-avg: state dimension {} differs from --dim {}", rho.dim(), cfg.dim));
  }
  const double closed = haar_average_bz_closed_form(rho);

  auto result = start(cfg, "haar-avg", PassCriterion::three_sigma);
  Fnv1a state_digest;
  state_digest.add(rho.matrix());
  double worst = 0.0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const double value = haar_bz_sample(rho, cfg.seed, t);
    worst = std::max(worst, std::abs(value - closed));
    result.records.push_back(TrialRecord{t, "trial", state_digest.hex(), {{"bz", value}}, std::abs(value - closed)});
  }
  const auto average = haar_average_bz(rho, cfg.trials, cfg.seed);
  result.summary.max_residual = worst;
  result.summary.mean = average.estimate;
  result.summary.standard_error = average.standard_error;
  result.summary.extras = {{"closed_form", closed},
                           {"purity", purity(rho)},
                           {"deviation", std::abs(average.estimate - closed)},
                           {"band", 3.0 * average.standard_error + cfg.tolerance}};
  result.passed = recompute_pass(result);
  return result;
}

ShannonWitness shannon_noninvariance_witness() {
  // exp(-i (pi/8) sigma_y): Bloch rotation by 45 degrees about y.
  const double c = std::cos(std::numbers::pi / 8.0);
  const double s = std::sin(std::numbers::pi / 8.0);
  const ComplexMatrix rotation(2, {c, -s, s, c});
  const auto canonical = mub_set(2);
  const auto rotated = rotate(canonical, rotation);
  const auto rho = bloch_to_density(BlochVector{{0.0, 0.0, 1.0}});

  const auto canonical_report = make_info_report(rho, canonical);
  const auto rotated_report = make_info_report(rho, rotated);
  return ShannonWitness{canonical_report.shannon_sum, rotated_report.shannon_sum, canonical_report.i_total,
                        rotated_report.i_total};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.name == "invariance") {
    return run_invariance_sweep(cfg);
  }
  if (cfg.name == "povm-invariant") {
    return run_povm_invariant(cfg);
  }
  if (cfg.name == "diagonal-eq") {
    return run_diagonal_equivalence(cfg);
  }
  if (cfg.name == "grouping-demo") {
    return run_grouping_breakdown(cfg);
  }
  if (cfg.name == "haar-avg") {
    return run_haar_convergence(cfg);
  }
  throw ValidationError(fmt::format("unknown experiment '{}'", cfg.name));
}

}  // namespace mubinfo
