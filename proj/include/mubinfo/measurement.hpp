#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mubinfo/linalg.hpp"
#include "mubinfo/probability.hpp"
#include "mubinfo/state.hpp"

namespace mubinfo {

inline constexpr double kMeasurementTolerance = 1e-10;
/// Largest |sum(p) - 1| that is renormalized away instead of reported.
inline constexpr double kRenormalizeTolerance = 1e-8;

/// Orthonormal basis of d unit vectors: the eigenbasis of one observable.
class ProjectiveMeasurement {
 public:
  ProjectiveMeasurement(std::vector<ComplexVector> basis, std::string label);

  /// Basis given by the columns of a unitary.
  static ProjectiveMeasurement from_unitary(const ComplexMatrix& u, std::string label);

  std::size_t dim() const { return basis_.size(); }
  const std::vector<ComplexVector>& basis() const { return basis_; }
  const std::string& label() const { return label_; }

 private:
  std::vector<ComplexVector> basis_;
  std::string label_;
};

/// d + 1 pairwise mutually unbiased bases for prime d.
class MubSet {
 public:
  MubSet(std::size_t dim, std::vector<ProjectiveMeasurement> bases);

  std::size_t dim() const { return dim_; }
  const std::vector<ProjectiveMeasurement>& bases() const { return bases_; }

 private:
  std::size_t dim_;
  std::vector<ProjectiveMeasurement> bases_;
};

/// Largest deviation of |<e_i|f_j>|^2 from 1/d over all distinct basis pairs.
double mub_overlap_residual(const std::vector<ProjectiveMeasurement>& bases);

bool is_supported_mub_dim(std::size_t dim);

/// Complete MUB set for d in {2, 3, 5, 7, 11, 13}.
///
/// d = 2: eigenbases of sigma_z, sigma_x, sigma_y in that order, with
/// outcome order (+, -) inside each basis.
/// Odd prime d: the computational basis followed by bases m = 0..d-1 with
/// vectors (e_{m,j})_k = omega^(m k^2 + j k) / sqrt(d), omega = exp(2 pi i / d).
///
/// Without a seed the set is canonical. With a seed the whole canonical set
/// is rotated by haar_unitary(dim, seed).
MubSet mub_set(std::size_t dim, std::optional<std::uint64_t> seed = std::nullopt);

/// Every basis vector mapped to U * vector.
MubSet rotate(const MubSet& mubs, const ComplexMatrix& unitary);
ProjectiveMeasurement rotate(const ProjectiveMeasurement& m, const ComplexMatrix& unitary);

/// p_i = <b_i|rho|b_i>. Negatives above -1e-10 clamp to 0; a total within
/// 1e-8 of one is renormalized.
ProbabilityDistribution measurement_probabilities(const DensityMatrix& rho, const ProjectiveMeasurement& m);

/// Positive operators summing to the identity.
class Povm {
 public:
  Povm(std::size_t dim, std::vector<ComplexMatrix> elements, std::vector<std::string> labels = {});

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::size_t dim_;
  std::vector<ComplexMatrix> elements_;
  std::vector<std::string> labels_;
};

/// q_k = tr(E_k rho)
ProbabilityDistribution povm_probabilities(const DensityMatrix& rho, const Povm& povm);

/// One (d+1)d-outcome POVM built from a full MUB set: E = |b><b| / (d + 1)
/// for every vector b, bases in set order and outcomes in basis order.
/// For d = 2 the order is z+, z-, x+, x-, y+, y-.
Povm eq1_povm(const MubSet& mubs);

/// Joint statistics of two consecutive projective measurements under the
/// Lüders update: p(a, b) = <f_b| P_a rho P_a |f_b>.
struct SequentialOutcome {
  std::size_t dim = 0;
  /// Row-major in (a, b): index a * dim + b.
  ProbabilityDistribution joint;

  double operator()(std::size_t a, std::size_t b) const { return joint[a * dim + b]; }
  ProbabilityDistribution first_marginal() const;
  ProbabilityDistribution second_marginal() const;
};

SequentialOutcome sequential_measure(const DensityMatrix& rho, const ProjectiveMeasurement& first,
                                     const ProjectiveMeasurement& second);

}  // namespace mubinfo
