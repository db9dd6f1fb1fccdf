#include "mubinfo/infomeasure.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace mubinfo {

namespace {

void check_dims(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw ValidationError(fmt::format("{}: dimension mismatch ({} vs {})", op, a, b));
  }
}

double entropy_term(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

double scale_factor(std::size_t n, BzScale scale) {
  if (scale == BzScale::centered) {
    return 1.0;
  }
  return n > 1 ? static_cast<double>(n) / static_cast<double>(n - 1) : 0.0;
}

}  // namespace

double shannon_entropy(const ProbabilityDistribution& p) {
  double h = 0.0;
  for (double x : p.values()) {
    h += entropy_term(x);
  }
  return std::max(h, 0.0);
}

GroupingDecomposition grouping_decompose(const ProbabilityDistribution& p, const Partition& partition) {
  std::vector<int> seen(p.size(), 0);
  for (std::size_t g = 0; g < partition.size(); ++g) {
    if (partition[g].empty()) {
      throw ValidationError(fmt::format("partition group {} is empty", g));
    }
    for (std::size_t index : partition[g]) {
      if (index >= p.size()) {
        throw ValidationError(fmt::format("partition index {} out of range for {} outcomes", index, p.size()));
      }
      if (seen[index]++ > 0) {
        throw ValidationError(fmt::format("partition index {} appears more than once", index));
      }
    }
  }
  const auto missing = std::find(seen.begin(), seen.end(), 0);
  if (missing != seen.end()) {
    throw ValidationError(fmt::format("partition does not cover index {}", missing - seen.begin()));
  }

  GroupingDecomposition out;
  for (const auto& group : partition) {
    double weight = 0.0;
    for (std::size_t index : group) {
      weight += p[index];
    }
    out.coarse_bits += entropy_term(weight);
    if (weight > 0.0) {
      double inner = 0.0;
      for (std::size_t index : group) {
        inner += entropy_term(p[index] / weight);
      }
      out.conditional_bits += weight * inner;
    }
  }
  out.reconstructed_bits = out.coarse_bits + out.conditional_bits;
  return out;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double lambda : hermitian_eig(rho.matrix()).eigenvalues) {
    if (lambda >= kEigenvalueFloor) {
      s -= lambda * std::log2(lambda);
    }
  }
  return std::clamp(s, 0.0, std::log2(static_cast<double>(rho.dim())));
}

double bz_measure(const ProbabilityDistribution& p, BzScale scale) {
  const double uniform = 1.0 / static_cast<double>(p.size());
  double sum = 0.0;
  for (double x : p.values()) {
    sum += (x - uniform) * (x - uniform);
  }
  return sum * scale_factor(p.size(), scale);
}

double bz_raw(const ProbabilityDistribution& p) {
  double sum = 0.0;
  for (double x : p.values()) {
    sum += x * x;
  }
  return sum;
}

double total_information(const DensityMatrix& rho, const MubSet& mubs, BzScale scale) {
  check_dims(rho.dim(), mubs.dim(), "total_information");
  double sum = 0.0;
  for (const auto& basis : mubs.bases()) {
    sum += bz_measure(measurement_probabilities(rho, basis), scale);
  }
  return sum;
}

double bz_from_povm(const DensityMatrix& rho, const Povm& povm, BzScale scale) {
  return bz_measure(povm_probabilities(rho, povm), scale);
}

HaarAverage haar_average_bz(const DensityMatrix& rho, std::size_t trials, std::uint64_t seed, BzScale scale) {
  if (trials < kMinHaarTrials) {
    throw ValidationError(fmt::format("haar_average_bz: {} trials is below the minimum of {}", trials, kMinHaarTrials));
  }
  // Welford accumulation; sequential over trial index so the result is exact
  // for a given seed.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const double value = haar_bz_sample(rho, seed, t, scale);
    const double delta = value - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (value - mean);
  }
  const double variance = m2 / static_cast<double>(trials - 1);
  return HaarAverage{mean, std::sqrt(variance / static_cast<double>(trials)), trials};
}

double haar_bz_sample(const DensityMatrix& rho, std::uint64_t seed, std::uint64_t trial, BzScale scale) {
  Rng rng(seed, trial);
  const auto basis = ProjectiveMeasurement::from_unitary(haar_unitary(rho.dim(), rng), "haar");
  return bz_measure(measurement_probabilities(rho, basis), scale);
}

double haar_average_bz_closed_form(const DensityMatrix& rho, BzScale scale) {
  const double d = static_cast<double>(rho.dim());
  return ((purity(rho) + 1.0) / (d + 1.0) - 1.0 / d) * scale_factor(rho.dim(), scale);
}

InfoReport make_info_report(const DensityMatrix& rho, const MubSet& mubs, BzScale scale) {
  check_dims(rho.dim(), mubs.dim(), "make_info_report");
  InfoReport report;
  for (const auto& basis : mubs.bases()) {
    const auto p = measurement_probabilities(rho, basis);
    BasisMeasures row{basis.label(), shannon_entropy(p), bz_measure(p, scale)};
    report.i_total += row.bz_value;
    report.shannon_sum += row.shannon_bits;
    report.bases.push_back(std::move(row));
  }
  report.von_neumann_bits = von_neumann_entropy(rho);
  report.purity = purity(rho);
  return report;
}

}  // namespace mubinfo
