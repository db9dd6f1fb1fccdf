#include "mubinfo/probability.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace mubinfo {

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) {
    throw ValidationError("probability distribution is empty");
  }
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (!std::isfinite(p_[i]) || p_[i] < 0.0 || p_[i] > 1.0 + kDistributionTolerance) {
      throw ValidationError(fmt::format("probability p[{}] = {:.17g} outside [0, 1]", i, p_[i]));
    }
  }
  const double total = std::accumulate(p_.begin(), p_.end(), 0.0);
  if (std::abs(total - 1.0) > kDistributionTolerance) {
    throw ValidationError(
        fmt::format("probabilities sum to {:.17g} (deviation {:.3e} > {:.0e})", total, std::abs(total - 1.0),
                    kDistributionTolerance));
  }
}

}  // namespace mubinfo
