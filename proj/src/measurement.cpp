#include "mubinfo/measurement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

namespace mubinfo {

namespace {

constexpr std::array<std::size_t, 6> kSupportedMubDims = {2, 3, 5, 7, 11, 13};

void check_dims(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw ValidationError(fmt::format("{}: dimension mismatch ({} vs {})", op, a, b));
  }
}

// Clamp rounding-level negatives, reject real ones, renormalize tiny drift.
ProbabilityDistribution finalize_probabilities(std::vector<double> p, const char* op) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < -kMeasurementTolerance) {
      throw NumericError(fmt::format("{}: outcome {} has negative probability {:.3e}", op, i, p[i]));
    }
    p[i] = std::clamp(p[i], 0.0, 1.0);
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(total - 1.0) > kRenormalizeTolerance) {
    throw NumericError(fmt::format("{}: probabilities sum to {:.17g}", op, total));
  }
  for (auto& x : p) {
    x /= total;
  }
  return ProbabilityDistribution(std::move(p));
}

std::vector<ProjectiveMeasurement> canonical_qubit_bases() {
  const double h = 1.0 / std::numbers::sqrt2;
  const Complex i(0.0, 1.0);
  return {
      ProjectiveMeasurement({{1.0, 0.0}, {0.0, 1.0}}, "z"),
      ProjectiveMeasurement({{h, h}, {h, -h}}, "x"),
      ProjectiveMeasurement({{h, h * i}, {h, -h * i}}, "y"),
  };
}

std::vector<ProjectiveMeasurement> canonical_odd_prime_bases(std::size_t d) {
  std::vector<ProjectiveMeasurement> bases;
  std::vector<ComplexVector> computational(d, ComplexVector(d));
  for (std::size_t j = 0; j < d; ++j) {
    computational[j][j] = 1.0;
  }
  bases.emplace_back(std::move(computational), "computational");
  const double amplitude = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t m = 0; m < d; ++m) {
    std::vector<ComplexVector> vectors(d, ComplexVector(d));
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        // Reduce the exponent mod d before forming the angle.
        const std::size_t exponent = (m * k * k + j * k) % d;
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(exponent) / static_cast<double>(d);
        vectors[j][k] = std::polar(amplitude, angle);
      }
    }
    bases.emplace_back(std::move(vectors), fmt::format("m={}", m));
  }
  return bases;
}

std::string outcome_label(const ProjectiveMeasurement& m, std::size_t i) {
  if (m.dim() == 2 && (m.label() == "z" || m.label() == "x" || m.label() == "y")) {
    return m.label() + (i == 0 ? "+" : "-");
  }
  return fmt::format("{}:{}", m.label(), i);
}

}  // namespace

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<ComplexVector> basis, std::string label)
    : basis_(std::move(basis)), label_(std::move(label)) {
  const std::size_t d = basis_.size();
  if (d == 0 || d > kMaxDim) {
    throw ValidationError(fmt::format("measurement '{}': basis size {} outside [1, {}]", label_, d, kMaxDim));
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (basis_[i].size() != d) {
      throw ValidationError(
          fmt::format("measurement '{}': vector {} has length {}, expected {}", label_, i, basis_[i].size(), d));
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      const double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(inner_product(basis_[i], basis_[j]) - target));
    }
  }
  if (worst > kMeasurementTolerance) {
    throw ValidationError(
        fmt::format("measurement '{}': basis not orthonormal (max residual {:.3e})", label_, worst));
  }
  ComplexMatrix sum(d);
  for (const auto& b : basis_) {
    sum = add(sum, outer_product(b));
  }
  const double completeness = max_abs_difference(sum, ComplexMatrix::identity(d));
  if (completeness > kMeasurementTolerance) {
    throw ValidationError(
        fmt::format("measurement '{}': projectors do not sum to identity (residual {:.3e})", label_, completeness));
  }
}

ProjectiveMeasurement ProjectiveMeasurement::from_unitary(const ComplexMatrix& u, std::string label) {
  std::vector<ComplexVector> basis;
  basis.reserve(u.dim());
  for (std::size_t j = 0; j < u.dim(); ++j) {
    basis.push_back(u.column(j));
  }
  return ProjectiveMeasurement(std::move(basis), std::move(label));
}

double mub_overlap_residual(const std::vector<ProjectiveMeasurement>& bases) {
  double worst = 0.0;
  for (std::size_t e = 0; e < bases.size(); ++e) {
    const double target = 1.0 / static_cast<double>(bases[e].dim());
    for (std::size_t f = e + 1; f < bases.size(); ++f) {
      check_dims(bases[e].dim(), bases[f].dim(), "mub_overlap_residual");
      for (const auto& u : bases[e].basis()) {
        for (const auto& v : bases[f].basis()) {
          worst = std::max(worst, std::abs(std::norm(inner_product(u, v)) - target));
        }
      }
    }
  }
  return worst;
}

MubSet::MubSet(std::size_t dim, std::vector<ProjectiveMeasurement> bases) : dim_(dim), bases_(std::move(bases)) {
  if (bases_.size() != dim + 1) {
    throw ValidationError(fmt::format("MUB set for d = {} needs {} bases, got {}", dim, dim + 1, bases_.size()));
  }
  for (const auto& b : bases_) {
    check_dims(b.dim(), dim, "MubSet");
  }
  const double residual = mub_overlap_residual(bases_);
  if (residual > kMeasurementTolerance) {
    throw ValidationError(fmt::format("bases are not mutually unbiased (max overlap residual {:.3e})", residual));
  }
}

bool is_supported_mub_dim(std::size_t dim) {
  return std::find(kSupportedMubDims.begin(), kSupportedMubDims.end(), dim) != kSupportedMubDims.end();
}

MubSet mub_set(std::size_t dim, std::optional<std::uint64_t> seed) {
  if (!is_supported_mub_dim(dim)) {
    throw ValidationError(fmt::format(
        "complete MUB set not provided for this dimension (d = {}; supported: 2, 3, 5, 7, 11, 13)", dim));
  }
  MubSet canonical(dim, dim == 2 ? canonical_qubit_bases() : canonical_odd_prime_bases(dim));
  if (!seed) {
    return canonical;
  }
  return rotate(canonical, haar_unitary(dim, *seed));
}

ProjectiveMeasurement rotate(const ProjectiveMeasurement& m, const ComplexMatrix& unitary) {
  check_dims(m.dim(), unitary.dim(), "rotate");
  std::vector<ComplexVector> basis;
  basis.reserve(m.dim());
  for (const auto& b : m.basis()) {
    basis.push_back(multiply(unitary, b));
  }
  return ProjectiveMeasurement(std::move(basis), m.label());
}

MubSet rotate(const MubSet& mubs, const ComplexMatrix& unitary) {
  std::vector<ProjectiveMeasurement> bases;
  bases.reserve(mubs.bases().size());
  for (const auto& b : mubs.bases()) {
    bases.push_back(rotate(b, unitary));
  }
  return MubSet(mubs.dim(), std::move(bases));
}

ProbabilityDistribution measurement_probabilities(const DensityMatrix& rho, const ProjectiveMeasurement& m) {
  check_dims(rho.dim(), m.dim(), "measurement_probabilities");
  std::vector<double> p;
  p.reserve(m.dim());
  for (const auto& b : m.basis()) {
    p.push_back(inner_product(b, multiply(rho.matrix(), b)).real());
  }
  return finalize_probabilities(std::move(p), "measurement_probabilities");
}

Povm::Povm(std::size_t dim, std::vector<ComplexMatrix> elements, std::vector<std::string> labels)
    : dim_(dim), elements_(std::move(elements)), labels_(std::move(labels)) {
  if (elements_.empty()) {
    throw ValidationError("POVM has no elements");
  }
  if (labels_.empty()) {
    for (std::size_t k = 0; k < elements_.size(); ++k) {
      labels_.push_back(fmt::format("E{}", k));
    }
  }
  if (labels_.size() != elements_.size()) {
    throw ValidationError(
        fmt::format("POVM has {} elements but {} labels", elements_.size(), labels_.size()));
  }
  ComplexMatrix sum(dim);
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    const auto& e = elements_[k];
    check_dims(e.dim(), dim, "Povm");
    const double asymmetry = hermiticity_residual(e);
    if (asymmetry > kMeasurementTolerance) {
      throw ValidationError(fmt::format("POVM element {} not Hermitian (max asymmetry {:.3e})", k, asymmetry));
    }
    const double lowest = hermitian_eig(e).eigenvalues.front();
    if (lowest < -kMeasurementTolerance) {
      throw ValidationError(fmt::format("POVM element {} not positive (min eigenvalue {:.3e})", k, lowest));
    }
    sum = add(sum, e);
  }
  const double completeness = max_abs_difference(sum, ComplexMatrix::identity(dim));
  if (completeness > kMeasurementTolerance) {
    throw ValidationError(fmt::format("POVM elements do not sum to identity (residual {:.3e})", completeness));
  }
}

ProbabilityDistribution povm_probabilities(const DensityMatrix& rho, const Povm& povm) {
  check_dims(rho.dim(), povm.dim(), "povm_probabilities");
  std::vector<double> q;
  q.reserve(povm.size());
  for (const auto& e : povm.elements()) {
    q.push_back(trace(multiply(e, rho.matrix())).real());
  }
  return finalize_probabilities(std::move(q), "povm_probabilities");
}

Povm eq1_povm(const MubSet& mubs) {
  const double weight = 1.0 / static_cast<double>(mubs.dim() + 1);
  std::vector<ComplexMatrix> elements;
  std::vector<std::string> labels;
  for (const auto& basis : mubs.bases()) {
    for (std::size_t i = 0; i < basis.dim(); ++i) {
      elements.push_back(scale(outer_product(basis.basis()[i]), weight));
      labels.push_back(outcome_label(basis, i));
    }
  }
  return Povm(mubs.dim(), std::move(elements), std::move(labels));
}

ProbabilityDistribution SequentialOutcome::first_marginal() const {
  std::vector<double> p(dim, 0.0);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      p[a] += (*this)(a, b);
    }
  }
  return finalize_probabilities(std::move(p), "first_marginal");
}

ProbabilityDistribution SequentialOutcome::second_marginal() const {
  std::vector<double> p(dim, 0.0);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      p[b] += (*this)(a, b);
    }
  }
  return finalize_probabilities(std::move(p), "second_marginal");
}

SequentialOutcome sequential_measure(const DensityMatrix& rho, const ProjectiveMeasurement& first,
                                     const ProjectiveMeasurement& second) {
  check_dims(rho.dim(), first.dim(), "sequential_measure");
  check_dims(rho.dim(), second.dim(), "sequential_measure");
  const std::size_t d = rho.dim();
  std::vector<double> joint(d * d);
  for (std::size_t a = 0; a < d; ++a) {
    const auto projector = outer_product(first.basis()[a]);
    const auto collapsed = multiply(multiply(projector, rho.matrix()), projector);
    for (std::size_t b = 0; b < d; ++b) {
      const auto& f = second.basis()[b];
      joint[a * d + b] = inner_product(f, multiply(collapsed, f)).real();
    }
  }
  return SequentialOutcome{d, finalize_probabilities(std::move(joint), "sequential_measure")};
}

}  // namespace mubinfo
