#include "mubinfo/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

namespace mubinfo {

bool StateDiagnostics::valid() const {
  return hermiticity_residual <= kStateTolerance && trace_residual <= kStateTolerance &&
         min_eigenvalue >= -kStateTolerance;
}

StateDiagnostics diagnose_state(const ComplexMatrix& m) {
  StateDiagnostics out;
  out.hermiticity_residual = hermiticity_residual(m);
  out.trace_residual = std::abs(trace(m) - 1.0);
  const auto hermitian_part = scale(add(m, adjoint(m)), 0.5);
  out.min_eigenvalue = hermitian_eig(hermitian_part).eigenvalues.front();
  return out;
}

DensityMatrix density_from_matrix(const ComplexMatrix& m) {
  const auto diag = diagnose_state(m);
  if (diag.valid()) {
    return DensityMatrix(m);
  }
  std::string problems;
  const auto append = [&](const std::string& s) {
    problems += problems.empty() ? s : "; " + s;
  };
  if (diag.hermiticity_residual > kStateTolerance) {
    append(fmt::format("not Hermitian (max asymmetry {:.3e})", diag.hermiticity_residual));
  }
  if (diag.trace_residual > kStateTolerance) {
    append(fmt::format("trace differs from 1 by {:.3e}", diag.trace_residual));
  }
  if (diag.min_eigenvalue < -kStateTolerance) {
    append(fmt::format("negative eigenvalue {:.3e}", diag.min_eigenvalue));
  }
  throw ValidationError("invalid density matrix: " + problems + fmt::format(" (tolerance {:.0e})", kStateTolerance));
}

DensityMatrix maximally_mixed(std::size_t dim) {
  return density_from_matrix(scale(ComplexMatrix::identity(dim), 1.0 / static_cast<double>(dim)));
}

DensityMatrix pure_state(std::span<const Complex> psi) {
  const double length = norm(psi);
  if (!(length > 0.0)) {
    throw ValidationError("pure_state: zero vector");
  }
  return density_from_matrix(scale(outer_product(psi), 1.0 / (length * length)));
}

DensityMatrix rotate(const DensityMatrix& rho, const ComplexMatrix& unitary) {
  return density_from_matrix(conjugate_by(unitary, rho.matrix()));
}

double purity(const DensityMatrix& rho) {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  double sum = 0.0;
  for (const auto& x : rho.matrix().entries()) {
    sum += std::norm(x);
  }
  return sum;
}

DensityMatrix bloch_to_density(const BlochVector& v) {
  const auto [x, y, z] = v.r;
  const double length = std::sqrt(x * x + y * y + z * z);
  if (!(length <= 1.0 + kStateTolerance)) {
    throw ValidationError(fmt::format("Bloch vector length {:.12g} exceeds 1", length));
  }
  return density_from_matrix(ComplexMatrix(2, {Complex(0.5 * (1.0 + z), 0.0), Complex(0.5 * x, -0.5 * y),
                                               Complex(0.5 * x, 0.5 * y), Complex(0.5 * (1.0 - z), 0.0)}));
}

BlochVector density_to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw ValidationError(fmt::format("Bloch vectors are defined for d = 2 only, got d = {}", rho.dim()));
  }
  const auto& m = rho.matrix();
  return BlochVector{{2.0 * m(1, 0).real(), 2.0 * m(1, 0).imag(), (m(0, 0) - m(1, 1)).real()}};
}

DensityMatrix random_density(std::size_t dim, std::size_t rank, Rng& rng) {
  if (dim == 0 || dim > kMaxDim) {
    throw ValidationError(fmt::format("random_density: dimension {} outside [1, {}]", dim, kMaxDim));
  }
  if (rank < 1 || rank > dim) {
    throw ValidationError(fmt::format("random_density: rank {} outside [1, {}]", rank, dim));
  }
  std::vector<Complex> g(dim * rank);
  for (auto& x : g) {
    x = rng.complex_normal();
  }
  std::vector<Complex> ggt(dim * dim);
  double tr = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      Complex sum = 0.0;
      for (std::size_t k = 0; k < rank; ++k) {
        sum += g[i * rank + k] * std::conj(g[j * rank + k]);
      }
      ggt[i * dim + j] = sum;
    }
    tr += ggt[i * dim + i].real();
  }
  for (auto& x : ggt) {
    x /= tr;
  }
  return density_from_matrix(ComplexMatrix(dim, std::move(ggt)));
}

DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(dim, rank, rng);
}

}  // namespace mubinfo
