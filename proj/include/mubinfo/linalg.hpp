#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mubinfo/errors.hpp"
#include "mubinfo/rng.hpp"

namespace mubinfo {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr std::size_t kMaxDim = 16;

/// Dense square complex matrix, 1 <= dim <= 16, stored row-major.
/// Entries are always finite; the value is immutable once built.
class ComplexMatrix {
 public:
  /// Zero matrix.
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  /// Matrix whose j-th column is columns[j].
  static ComplexMatrix from_columns(std::span<const ComplexVector> columns);

  std::size_t dim() const { return dim_; }
  Complex operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
  std::span<const Complex> entries() const { return entries_; }
  ComplexVector column(std::size_t col) const;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, Complex factor);
ComplexMatrix adjoint(const ComplexMatrix& a);
Complex trace(const ComplexMatrix& a);

/// |v><v|
ComplexMatrix outer_product(std::span<const Complex> v);
/// |u><v|
ComplexMatrix outer_product(std::span<const Complex> u, std::span<const Complex> v);

/// U A U^dagger
ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& a);

/// A v
ComplexVector multiply(const ComplexMatrix& a, std::span<const Complex> v);
/// <u|v>, antilinear in u.
Complex inner_product(std::span<const Complex> u, std::span<const Complex> v);
double norm(std::span<const Complex> v);

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b);
/// max_ij |a_ij - conj(a_ji)|
double hermiticity_residual(const ComplexMatrix& a);
/// max_ij |(U U^dagger - I)_ij|
double unitarity_residual(const ComplexMatrix& u);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
};

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiOffDiagonalThreshold = 1e-12;

/// Cyclic complex Jacobi diagonalization. The input must be Hermitian to
/// within 1e-10 elementwise; it is symmetrized before iterating. Within a
/// degenerate eigenvalue cluster the returned vectors are an arbitrary
/// orthonormal span.
EigenDecomposition hermitian_eig(const ComplexMatrix& a);

/// Haar-distributed unitary: complex Ginibre matrix orthonormalized column
/// by column (Gram-Schmidt, one reorthogonalization pass). Gram-Schmidt
/// yields the QR factor with a positive real diagonal in R, which is the
/// phase fixing that makes Q exactly Haar.
ComplexMatrix haar_unitary(std::size_t dim, Rng& rng);
ComplexMatrix haar_unitary(std::size_t dim, std::uint64_t seed);

}  // namespace mubinfo
