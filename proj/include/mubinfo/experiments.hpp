#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mubinfo/state.hpp"

namespace mubinfo {

struct ExperimentConfig {
  std::string name;
  std::size_t dim = 2;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  std::string output_path;
  /// Haar convergence only; defaults to |0><0|.
  std::optional<DensityMatrix> state;
};

enum class PassCriterion {
  max_residual,  // max over records of residual <= tolerance
  three_sigma,   // |mean - closed_form| <= 3 standard errors + tolerance
};

using NamedValues = std::vector<std::pair<std::string, double>>;

struct TrialRecord {
  std::size_t index = 0;
  std::string label;
  /// FNV-1a over the bit patterns of the trial's inputs.
  std::string input_digest;
  NamedValues values;
  double residual = 0.0;

  double value(std::string_view key) const;
};

struct ExperimentSummary {
  double max_residual = 0.0;
  double mean = 0.0;
  std::optional<double> standard_error;
  NamedValues extras;

  double extra(std::string_view key) const;
};

struct ExperimentResult {
  std::string name;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  double tolerance = 0.0;
  PassCriterion criterion = PassCriterion::max_residual;
  bool passed = false;
  std::vector<TrialRecord> records;
  ExperimentSummary summary;
};

/// Re-derives the pass flag from the records alone.
bool recompute_pass(const ExperimentResult& result);

/// Random states against two Haar-rotated MUB sets: total information must
/// agree across the sets, across a rotation of the state, and with
/// purity - 1/d.
ExperimentResult run_invariance_sweep(const ExperimentConfig& cfg);

/// The single (d+1)d-outcome POVM: its BZ value is unitarily invariant and
/// equals total_information / (d+1)^2. Trial 0 is the maximally mixed state.
ExperimentResult run_povm_invariant(const ExperimentConfig& cfg);

inline constexpr std::size_t kRandomBasesPerState = 50;

/// Shannon entropy in the eigenbasis of rho against von Neumann entropy, plus
/// the smallest H(basis) - S(rho) over 50 Haar bases. Trial 0 uses I/d and
/// trial 1 a pure state.
ExperimentResult run_diagonal_equivalence(const ExperimentConfig& cfg);

/// Qubit only. Classical control: grouping decomposition over random
/// distributions and partitions. Quantum contrast: |x+> measured in x
/// directly (0 bits) and after an intermediate z measurement (1 bit); and
/// the commuting control x-then-x (gap 0).
ExperimentResult run_grouping_breakdown(const ExperimentConfig& cfg);

inline constexpr std::size_t kMinConvergenceTrials = 10000;

/// haar_average_bz against its closed form within a 3-sigma band.
ExperimentResult run_haar_convergence(const ExperimentConfig& cfg);

/// Fixed qubit witness that summed Shannon entropies over a complete MUB set
/// depend on the choice of set: |z+> with the canonical set and with the set
/// rotated by 45 degrees about y.
struct ShannonWitness {
  double shannon_sum_canonical = 0.0;
  double shannon_sum_rotated = 0.0;
  double i_total_canonical = 0.0;
  double i_total_rotated = 0.0;
};

ShannonWitness shannon_noninvariance_witness();

/// Dispatch on cfg.name: invariance, povm-invariant, diagonal-eq,
/// grouping-demo, haar-avg.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace mubinfo
