#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mubinfo/measurement.hpp"
#include "mubinfo/probability.hpp"
#include "mubinfo/state.hpp"

namespace mubinfo {

/// Eigenvalues below this contribute nothing to the von Neumann entropy.
inline constexpr double kEigenvalueFloor = 1e-12;

/// Shannon entropy in bits, 0 log 0 = 0.
double shannon_entropy(const ProbabilityDistribution& p);

struct GroupingDecomposition {
  double coarse_bits = 0.0;       // H(w_1, ..., w_G)
  double conditional_bits = 0.0;  // sum_g w_g H(p|g / w_g)
  double reconstructed_bits = 0.0;
};

using Partition = std::vector<std::vector<std::size_t>>;

/// Faddeev grouping: H(p) = H(coarse) + sum_g w_g H(p restricted to g / w_g).
/// The partition must cover every index exactly once with non-empty groups.
/// A group of zero weight contributes zero conditional entropy.
GroupingDecomposition grouping_decompose(const ProbabilityDistribution& p, const Partition& partition);

/// -sum lambda log2 lambda over the spectrum of rho.
double von_neumann_entropy(const DensityMatrix& rho);

/// Centered form sum (p_i - 1/n)^2, or that value times n/(n-1) so the
/// maximum is 1.
enum class BzScale { centered, normalized };

double bz_measure(const ProbabilityDistribution& p, BzScale scale = BzScale::centered);
/// sum p_i^2
double bz_raw(const ProbabilityDistribution& p);

/// Sum of bz_measure over every basis of a complete MUB set. In the centered
/// scale this equals purity(rho) - 1/d.
double total_information(const DensityMatrix& rho, const MubSet& mubs, BzScale scale = BzScale::centered);

/// bz_measure of the POVM outcome distribution. For eq1_povm this is
/// (purity - 1/d) / (d + 1)^2 in the centered scale.
double bz_from_povm(const DensityMatrix& rho, const Povm& povm, BzScale scale = BzScale::centered);

struct HaarAverage {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
};

inline constexpr std::size_t kMinHaarTrials = 100;

/// Monte Carlo mean of bz_measure over measurement bases drawn as columns of
/// Haar unitaries. Trial t draws from Rng(seed, t).
HaarAverage haar_average_bz(const DensityMatrix& rho, std::size_t trials, std::uint64_t seed,
                            BzScale scale = BzScale::centered);

/// One Monte Carlo sample of haar_average_bz: the bz_measure of rho in the
/// columns of haar_unitary(d, Rng(seed, trial)).
double haar_bz_sample(const DensityMatrix& rho, std::uint64_t seed, std::uint64_t trial,
                      BzScale scale = BzScale::centered);

/// Limit of haar_average_bz: (purity + 1)/(d + 1) - 1/d in the centered scale.
double haar_average_bz_closed_form(const DensityMatrix& rho, BzScale scale = BzScale::centered);

struct BasisMeasures {
  std::string label;
  double shannon_bits = 0.0;
  double bz_value = 0.0;
};

struct InfoReport {
  std::vector<BasisMeasures> bases;
  double i_total = 0.0;
  double shannon_sum = 0.0;
  double von_neumann_bits = 0.0;
  double purity = 0.0;
};

InfoReport make_info_report(const DensityMatrix& rho, const MubSet& mubs, BzScale scale = BzScale::centered);

}  // namespace mubinfo
