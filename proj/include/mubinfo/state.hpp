#pragma once

#include <array>
#include <cstdint>

#include "mubinfo/linalg.hpp"

namespace mubinfo {

inline constexpr double kStateTolerance = 1e-10;

/// Residuals of the three density-matrix invariants for an arbitrary matrix.
struct StateDiagnostics {
  double hermiticity_residual = 0.0;  // max |m_ij - conj(m_ji)|
  double trace_residual = 0.0;        // |tr m - 1|
  double min_eigenvalue = 0.0;        // of the Hermitian part

  bool valid() const;
};

StateDiagnostics diagnose_state(const ComplexMatrix& m);

/// Hermitian, unit-trace, positive semidefinite matrix. Only reachable
/// through validated factories.
class DensityMatrix {
 public:
  std::size_t dim() const { return matrix_.dim(); }
  const ComplexMatrix& matrix() const { return matrix_; }

  /// Validates all three invariants; the error lists each violation with
  /// its measured residual.
  friend DensityMatrix density_from_matrix(const ComplexMatrix& m);

 private:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

DensityMatrix density_from_matrix(const ComplexMatrix& m);

DensityMatrix maximally_mixed(std::size_t dim);
/// |psi><psi| for a normalized psi (normalization is applied here).
DensityMatrix pure_state(std::span<const Complex> psi);

/// U rho U^dagger
DensityMatrix rotate(const DensityMatrix& rho, const ComplexMatrix& unitary);

/// tr(rho^2), in [1/d, 1].
double purity(const DensityMatrix& rho);

struct BlochVector {
  std::array<double, 3> r{};
};

/// (I + r . sigma) / 2
DensityMatrix bloch_to_density(const BlochVector& v);
BlochVector density_to_bloch(const DensityMatrix& rho);

/// Rank-r Ginibre construction rho = G G^dagger / tr(G G^dagger), G of size d x r.
DensityMatrix random_density(std::size_t dim, std::size_t rank, Rng& rng);
DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed);

}  // namespace mubinfo
