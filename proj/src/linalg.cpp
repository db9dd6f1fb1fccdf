#include "mubinfo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace mubinfo {

namespace {

void check_dim(std::size_t dim) {
  if (dim == 0 || dim > kMaxDim) {
    throw ValidationError(fmt::format("matrix dimension {} outside [1, {}]", dim, kMaxDim));
  }
}

void check_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw ValidationError(fmt::format("{}: dimension mismatch ({} vs {})", op, a.dim(), b.dim()));
  }
}

void check_same_length(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw ValidationError(fmt::format("{}: length mismatch ({} vs {})", op, a, b));
  }
}

template <typename F>
ComplexMatrix build(std::size_t dim, F&& entry) {
  std::vector<Complex> out(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      out[i * dim + j] = entry(i, j);
    }
  }
  return ComplexMatrix(dim, std::move(out));
}

double off_diagonal_norm(const std::vector<Complex>& a, std::size_t dim) {
  double sum = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (i != j) {
        sum += std::norm(a[i * dim + j]);
      }
    }
  }
  return std::sqrt(sum);
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) { check_dim(dim); }

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  check_dim(dim);
  if (entries_.size() != dim * dim) {
    throw ValidationError(
        fmt::format("matrix of dimension {} needs {} entries, got {}", dim, dim * dim, entries_.size()));
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (!std::isfinite(entries_[k].real()) || !std::isfinite(entries_[k].imag())) {
      throw ValidationError(fmt::format("non-finite matrix entry at ({}, {})", k / dim, k % dim));
    }
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  return build(dim, [](std::size_t i, std::size_t j) { return Complex(i == j ? 1.0 : 0.0); });
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  return build(values.size(), [&](std::size_t i, std::size_t j) { return Complex(i == j ? values[i] : 0.0); });
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const ComplexVector> columns) {
  const std::size_t dim = columns.size();
  for (const auto& c : columns) {
    check_same_length(c.size(), dim, "from_columns");
  }
  return build(dim, [&](std::size_t i, std::size_t j) { return columns[j][i]; });
}

ComplexVector ComplexMatrix::column(std::size_t col) const {
  ComplexVector out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    out[i] = (*this)(i, col);
  }
  return out;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b, "multiply");
  const std::size_t d = a.dim();
  return build(d, [&](std::size_t i, std::size_t j) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      sum += a(i, k) * b(k, j);
    }
    return sum;
  });
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b, "add");
  return build(a.dim(), [&](std::size_t i, std::size_t j) { return a(i, j) + b(i, j); });
}

ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b, "subtract");
  return build(a.dim(), [&](std::size_t i, std::size_t j) { return a(i, j) - b(i, j); });
}

ComplexMatrix scale(const ComplexMatrix& a, Complex factor) {
  return build(a.dim(), [&](std::size_t i, std::size_t j) { return a(i, j) * factor; });
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  return build(a.dim(), [&](std::size_t i, std::size_t j) { return std::conj(a(j, i)); });
}

Complex trace(const ComplexMatrix& a) {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    sum += a(i, i);
  }
  return sum;
}

ComplexMatrix outer_product(std::span<const Complex> v) { return outer_product(v, v); }

ComplexMatrix outer_product(std::span<const Complex> u, std::span<const Complex> v) {
  check_same_length(u.size(), v.size(), "outer_product");
  return build(u.size(), [&](std::size_t i, std::size_t j) { return u[i] * std::conj(v[j]); });
}

ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& a) {
  return multiply(multiply(u, a), adjoint(u));
}

ComplexVector multiply(const ComplexMatrix& a, std::span<const Complex> v) {
  check_same_length(a.dim(), v.size(), "multiply");
  ComplexVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) {
      sum += a(i, k) * v[k];
    }
    out[i] = sum;
  }
  return out;
}

Complex inner_product(std::span<const Complex> u, std::span<const Complex> v) {
  check_same_length(u.size(), v.size(), "inner_product");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    sum += std::conj(u[i]) * v[i];
  }
  return sum;
}

double norm(std::span<const Complex> v) {
  double sum = 0.0;
  for (const auto& x : v) {
    sum += std::norm(x);
  }
  return std::sqrt(sum);
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b, "frobenius_distance");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    sum += std::norm(a.entries()[k] - b.entries()[k]);
  }
  return std::sqrt(sum);
}

double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a, b, "max_abs_difference");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    worst = std::max(worst, std::abs(a.entries()[k] - b.entries()[k]));
  }
  return worst;
}

double hermiticity_residual(const ComplexMatrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = i; j < a.dim(); ++j) {
      worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
    }
  }
  return worst;
}

double unitarity_residual(const ComplexMatrix& u) {
  return max_abs_difference(multiply(u, adjoint(u)), ComplexMatrix::identity(u.dim()));
}

EigenDecomposition hermitian_eig(const ComplexMatrix& input) {
  const double asymmetry = hermiticity_residual(input);
  if (asymmetry > kHermitianTolerance) {
    throw ValidationError(fmt::format("hermitian_eig: input not Hermitian, max asymmetry {:.3e} > {:.0e}",
                                      asymmetry, kHermitianTolerance));
  }
  const std::size_t d = input.dim();
  std::vector<Complex> a(d * d);
  std::vector<Complex> v(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    a[i * d + i] = input(i, i).real();
    v[i * d + i] = 1.0;
    for (std::size_t j = i + 1; j < d; ++j) {
      const Complex upper = 0.5 * (input(i, j) + std::conj(input(j, i)));
      a[i * d + j] = upper;
      a[j * d + i] = std::conj(upper);
    }
  }

  double scale_norm = 0.0;
  for (const auto& x : a) {
    scale_norm += std::norm(x);
  }
  const double threshold = kJacobiOffDiagonalThreshold * std::max(1.0, std::sqrt(scale_norm));

  int sweep = 0;
  while (off_diagonal_norm(a, d) > threshold) {
    if (sweep++ >= kJacobiMaxSweeps) {
      throw NumericError(fmt::format("hermitian_eig: no convergence after {} sweeps (off-diagonal norm {:.3e})",
                                     kJacobiMaxSweeps, off_diagonal_norm(a, d)));
    }
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const Complex apq = a[p * d + q];
        const double magnitude = std::abs(apq);
        if (magnitude == 0.0) {
          continue;
        }
        // Phase D = diag(1, e^{-i phi}) makes the (p, q) entry real, then a
        // real symmetric Jacobi rotation zeroes it. J = D * R.
        const Complex phase = std::conj(apq) / magnitude;
        const double app = a[p * d + p].real();
        const double aqq = a[q * d + q].real();
        const double theta = (aqq - app) / (2.0 * magnitude);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex jpp = c;
        const Complex jpq = s;
        const Complex jqp = -s * phase;
        const Complex jqq = c * phase;

        // A <- A J and V <- V J
        for (std::size_t k = 0; k < d; ++k) {
          const Complex akp = a[k * d + p];
          const Complex akq = a[k * d + q];
          a[k * d + p] = akp * jpp + akq * jqp;
          a[k * d + q] = akp * jpq + akq * jqq;
          const Complex vkp = v[k * d + p];
          const Complex vkq = v[k * d + q];
          v[k * d + p] = vkp * jpp + vkq * jqp;
          v[k * d + q] = vkp * jpq + vkq * jqq;
        }
        // A <- J^dagger A
        for (std::size_t k = 0; k < d; ++k) {
          const Complex apk = a[p * d + k];
          const Complex aqk = a[q * d + k];
          a[p * d + k] = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a[q * d + k] = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a[p * d + q] = 0.0;
        a[q * d + p] = 0.0;
        a[p * d + p] = a[p * d + p].real();
        a[q * d + q] = a[q * d + q].real();
      }
    }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * d + x].real() < a[y * d + y].real(); });

  EigenDecomposition out{std::vector<double>(d), ComplexMatrix(d)};
  std::vector<Complex> vectors(d * d);
  for (std::size_t k = 0; k < d; ++k) {
    out.eigenvalues[k] = a[order[k] * d + order[k]].real();
    for (std::size_t i = 0; i < d; ++i) {
      vectors[i * d + k] = v[i * d + order[k]];
    }
  }
  out.eigenvectors = ComplexMatrix(d, std::move(vectors));
  return out;
}

ComplexMatrix haar_unitary(std::size_t dim, Rng& rng) {
  if (dim < 2 || dim > kMaxDim) {
    throw ValidationError(fmt::format("haar_unitary: dimension {} outside [2, {}]", dim, kMaxDim));
  }
  std::vector<ComplexVector> columns(dim, ComplexVector(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      columns[j][i] = rng.complex_normal();
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    auto& col = columns[j];
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const Complex overlap = inner_product(columns[k], col);
        for (std::size_t i = 0; i < dim; ++i) {
          col[i] -= overlap * columns[k][i];
        }
      }
    }
    const double length = norm(col);
    if (length < 1e-300) {
      // Probability zero for a Gaussian draw.
      throw NumericError("haar_unitary: rank-deficient Ginibre sample");
    }
    for (auto& x : col) {
      x /= length;
    }
  }
  return ComplexMatrix::from_columns(columns);
}

ComplexMatrix haar_unitary(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(dim, rng);
}

}  // namespace mubinfo
