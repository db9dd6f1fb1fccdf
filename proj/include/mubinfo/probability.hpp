#pragma once

#include <span>
#include <vector>

#include "mubinfo/errors.hpp"

namespace mubinfo {

inline constexpr double kDistributionTolerance = 1e-9;

/// Outcome probabilities: every entry in [0, 1], summing to 1 within 1e-9.
class ProbabilityDistribution {
 public:
  explicit ProbabilityDistribution(std::vector<double> p);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> values() const { return p_; }

  friend bool operator==(const ProbabilityDistribution&, const ProbabilityDistribution&) = default;

 private:
  std::vector<double> p_;
};

}  // namespace mubinfo
