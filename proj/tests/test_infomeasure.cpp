#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "mubinfo/infomeasure.hpp"
#include "test_helpers.hpp"

using namespace mubinfo;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

DensityMatrix random_state(std::size_t d, std::uint64_t seed, std::size_t rank = 0) {
  Rng rng(seed, 91);
  return random_density(d, rank == 0 ? rng.uniform_int(1, d) : rank, rng);
}

ProbabilityDistribution random_distribution(std::size_t n, std::mt19937_64& gen) {
  std::exponential_distribution<double> exponential;
  std::bernoulli_distribution zero(0.2);
  std::vector<double> w(n);
  for (auto& x : w) {
    x = zero(gen) ? 0.0 : exponential(gen);
  }
  w[0] += 1e-3;
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) {
    x /= total;
  }
  return ProbabilityDistribution(w);
}

// Oracle: -sum p log2 p written out with std::log, nothing shared.
double entropy_oracle(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) {
      h -= x * std::log(x) / std::log(2.0);
    }
  }
  return h;
}

}  // namespace

TEST_CASE("ProbabilityDistribution validation", "[infomeasure]") {
  REQUIRE_NOTHROW(ProbabilityDistribution({0.25, 0.75}));
  REQUIRE_THROWS_WITH(ProbabilityDistribution({}), ContainsSubstring("empty"));
  REQUIRE_THROWS_WITH(ProbabilityDistribution({-0.1, 1.1}), ContainsSubstring("outside [0, 1]"));
  REQUIRE_THROWS_WITH(ProbabilityDistribution({0.5, 0.4}), ContainsSubstring("sum to"));
  REQUIRE_NOTHROW(ProbabilityDistribution({0.5, 0.5 + 5e-10}));
}

TEST_CASE("shannon_entropy", "[infomeasure][shannon]") {
  REQUIRE(shannon_entropy(ProbabilityDistribution({1.0, 0.0})) == 0.0);
  REQUIRE_THAT(shannon_entropy(ProbabilityDistribution({0.5, 0.5})), WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(shannon_entropy(ProbabilityDistribution({0.5, 0.25, 0.25})), WithinAbs(1.5, 1e-15));

  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto p = random_distribution(n, gen);
    const double h = shannon_entropy(p);
    REQUIRE(h >= 0.0);
    REQUIRE(h <= std::log2(static_cast<double>(n)) + 1e-12);
    REQUIRE_THAT(h, WithinAbs(entropy_oracle({p.values().begin(), p.values().end()}), 1e-12));
  }
}

TEST_CASE("grouping_decompose", "[infomeasure][grouping]") {
  const ProbabilityDistribution p({0.5, 0.25, 0.25});

  SECTION("worked example") {
    const auto g = grouping_decompose(p, {{0}, {1, 2}});
    REQUIRE_THAT(g.coarse_bits, WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(g.conditional_bits, WithinAbs(0.5, 1e-15));
    REQUIRE_THAT(g.reconstructed_bits, WithinAbs(1.5, 1e-15));
  }

  SECTION("singletons") {
    const auto g = grouping_decompose(p, {{0}, {1}, {2}});
    REQUIRE_THAT(g.coarse_bits, WithinAbs(1.5, 1e-15));
    REQUIRE(g.conditional_bits == 0.0);
  }

  SECTION("one group") {
    const auto g = grouping_decompose(p, {{2, 0, 1}});
    REQUIRE(g.coarse_bits == 0.0);
    REQUIRE_THAT(g.conditional_bits, WithinAbs(1.5, 1e-15));
  }

  SECTION("zero-weight group contributes nothing") {
    const auto g = grouping_decompose(ProbabilityDistribution({0.5, 0.5, 0.0, 0.0}), {{0, 1}, {2, 3}});
    // Group {0, 1} has weight 1 and is internally uniform; {2, 3} has weight 0.
    REQUIRE(g.conditional_bits == 1.0);
    REQUIRE(g.coarse_bits == 0.0);
  }

  SECTION("malformed partitions") {
    REQUIRE_THROWS_WITH(grouping_decompose(p, {{0}, {1}}), ContainsSubstring("does not cover index 2"));
    REQUIRE_THROWS_WITH(grouping_decompose(p, {{0, 1}, {1, 2}}), ContainsSubstring("more than once"));
    REQUIRE_THROWS_WITH(grouping_decompose(p, {{0, 1, 2}, {}}), ContainsSubstring("empty"));
    REQUIRE_THROWS_WITH(grouping_decompose(p, {{0, 1, 2, 3}}), ContainsSubstring("out of range"));
  }

  SECTION("reconstruction holds for random distributions and partitions") {
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 1 + static_cast<std::size_t>(gen() % 8);
      const auto q = random_distribution(n, gen);
      const std::size_t groups = 1 + static_cast<std::size_t>(gen() % n);
      Partition partition(groups);
      for (std::size_t i = 0; i < n; ++i) {
        partition[gen() % groups].push_back(i);
      }
      std::erase_if(partition, [](const auto& group) { return group.empty(); });
      REQUIRE_THAT(grouping_decompose(q, partition).reconstructed_bits, WithinAbs(shannon_entropy(q), 1e-10));
    }
  }
}

TEST_CASE("von_neumann_entropy", "[infomeasure][vonneumann]") {
  REQUIRE(von_neumann_entropy(random_state(3, 1, 1)) <= 1e-10);
  for (std::size_t d : {2u, 3u, 5u, 16u}) {
    REQUIRE_THAT(von_neumann_entropy(maximally_mixed(d)), WithinAbs(std::log2(static_cast<double>(d)), 1e-12));
  }
  // Eigenvalues (3/4, 1/4): -(3/4 log2 3/4 + 1/4 log2 1/4) = 0.811278...
  const double expected = entropy_oracle({0.75, 0.25});
  REQUIRE_THAT(expected, WithinAbs(0.811278, 1e-6));
  const auto rho = rotate(density_from_matrix(ComplexMatrix::diagonal(std::vector<double>{0.75, 0.25})),
                          haar_unitary(2, 4));
  REQUIRE_THAT(von_neumann_entropy(rho), WithinAbs(expected, 1e-10));

  SECTION("agrees with an independent eigensolver") {
    for (std::size_t d : {2u, 3u, 5u}) {
      for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto state = random_state(d, seed);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(testing::to_eigen(state.matrix()));
        std::vector<double> spectrum;
        for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
          spectrum.push_back(std::max(0.0, solver.eigenvalues()(k)));
        }
        REQUIRE_THAT(von_neumann_entropy(state), WithinAbs(entropy_oracle(spectrum), 1e-9));
      }
    }
  }
}

TEST_CASE("bz_measure", "[infomeasure][bz]") {
  for (std::size_t n : {1u, 2u, 5u}) {
    REQUIRE_THAT(bz_measure(ProbabilityDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)))),
                 WithinAbs(0.0, 1e-15));
  }
  REQUIRE(bz_measure(ProbabilityDistribution({1.0, 0.0})) == 0.5);
  // (2/3 - 1/2)^2 + (1/3 - 1/2)^2 = 2 (1/6)^2 = 1/18
  REQUIRE_THAT(bz_measure(ProbabilityDistribution({2.0 / 3.0, 1.0 / 3.0})), WithinAbs(1.0 / 18.0, 1e-15));
  REQUIRE_THAT(bz_raw(ProbabilityDistribution({2.0 / 3.0, 1.0 / 3.0})), WithinAbs(5.0 / 9.0, 1e-15));

  SECTION("range and normalization") {
    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = 2 + trial % 7;
      const auto p = random_distribution(n, gen);
      const double max = static_cast<double>(n - 1) / static_cast<double>(n);
      const double value = bz_measure(p);
      REQUIRE(value >= 0.0);
      REQUIRE(value <= max + 1e-12);
      REQUIRE_THAT(bz_measure(p, BzScale::normalized), WithinAbs(value / max, 1e-12));
      // Centered form = raw sum of squares minus 1/n.
      REQUIRE_THAT(value, WithinAbs(bz_raw(p) - 1.0 / static_cast<double>(n), 1e-12));
    }
    std::vector<double> certain(6, 0.0);
    certain[3] = 1.0;
    REQUIRE_THAT(bz_measure(ProbabilityDistribution(certain), BzScale::normalized), WithinAbs(1.0, 1e-15));
  }
}

TEST_CASE("total_information", "[infomeasure][total]") {
  SECTION("maximally mixed state carries no information") {
    for (std::size_t d : {2u, 3u, 5u}) {
      REQUIRE_THAT(total_information(maximally_mixed(d), mub_set(d, 1)), WithinAbs(0.0, 1e-15));
    }
  }

  SECTION("|z+> with the canonical qubit set") {
    const auto z_plus = bloch_to_density(BlochVector{{0, 0, 1}});
    const auto report = make_info_report(z_plus, mub_set(2));
    REQUIRE_THAT(report.bases[0].bz_value, WithinAbs(0.5, 1e-15));
    REQUIRE_THAT(report.bases[1].bz_value, WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(report.bases[2].bz_value, WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(total_information(z_plus, mub_set(2)), WithinAbs(0.5, 1e-15));
  }

  SECTION("explicit MUB sum equals purity - 1/d") {
    for (std::size_t d : {2u, 3u, 5u, 7u}) {
      const auto mubs = mub_set(d, 100 + d);
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto rho = random_state(d, seed);
        const auto m = testing::to_eigen(rho.matrix());
        // Explicit sum with Eigen: sum_j sum_i (<b|rho|b> - 1/d)^2.
        double explicit_sum = 0.0;
        for (const auto& basis : mubs.bases()) {
          for (const auto& b : basis.basis()) {
            Eigen::VectorXcd v(static_cast<Eigen::Index>(d));
            for (std::size_t k = 0; k < d; ++k) {
              v(static_cast<Eigen::Index>(k)) = b[k];
            }
            const double p = v.dot(m * v).real();
            explicit_sum += (p - 1.0 / static_cast<double>(d)) * (p - 1.0 / static_cast<double>(d));
          }
        }
        const double closed = (m * m).trace().real() - 1.0 / static_cast<double>(d);
        REQUIRE_THAT(explicit_sum, WithinAbs(closed, 1e-10));
        REQUIRE_THAT(total_information(rho, mubs), WithinAbs(closed, 1e-10));
      }
    }
  }

  SECTION("random pure qutrit gives 2/3") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      REQUIRE_THAT(total_information(random_state(3, seed, 1), mub_set(3)), WithinAbs(2.0 / 3.0, 1e-10));
    }
  }

  SECTION("dimension mismatch") {
    REQUIRE_THROWS_AS(total_information(maximally_mixed(3), mub_set(2)), ValidationError);
  }
}

TEST_CASE("total information is invariant; summed Shannon entropy is not", "[infomeasure][property]") {
  for (std::size_t d : {2u, 3u, 5u}) {
    const auto set_a = mub_set(d, 1);
    const auto set_b = mub_set(d, 2);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto rho = random_state(d, seed);
      const double base = total_information(rho, set_a);
      REQUIRE_THAT(total_information(rho, set_b), WithinAbs(base, 1e-10));
      REQUIRE_THAT(total_information(rotate(rho, haar_unitary(d, seed)), set_a), WithinAbs(base, 1e-10));
    }
  }

  // |z+> against the canonical set and the set rotated 45 degrees about y.
  const auto z_plus = bloch_to_density(BlochVector{{0, 0, 1}});
  const double c = std::cos(std::numbers::pi / 8.0);
  const double s = std::sin(std::numbers::pi / 8.0);
  const auto rotated = rotate(mub_set(2), ComplexMatrix(2, {c, -s, s, c}));
  const auto canonical_report = make_info_report(z_plus, mub_set(2));
  const auto rotated_report = make_info_report(z_plus, rotated);
  // Rotated axes have z-components cos 45, -sin 45 and 0.
  const double tilt = (1.0 + std::cos(std::numbers::pi / 4.0)) / 2.0;
  const double expected_rotated = 2.0 * entropy_oracle({tilt, 1.0 - tilt}) + 1.0;
  REQUIRE_THAT(canonical_report.shannon_sum, WithinAbs(2.0, 1e-12));
  REQUIRE_THAT(rotated_report.shannon_sum, WithinAbs(expected_rotated, 1e-12));
  REQUIRE(std::abs(canonical_report.shannon_sum - rotated_report.shannon_sum) > 1e-3);
  REQUIRE_THAT(rotated_report.i_total, WithinAbs(canonical_report.i_total, 1e-10));
}

TEST_CASE("eigenbasis equivalence and basis optimality", "[infomeasure][property]") {
  for (std::size_t d : {2u, 3u, 5u}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto rho = random_state(d, seed);
      const double s = von_neumann_entropy(rho);
      const auto eig = hermitian_eig(rho.matrix());
      const auto eigenbasis = ProjectiveMeasurement::from_unitary(eig.eigenvectors, "eig");
      REQUIRE_THAT(shannon_entropy(measurement_probabilities(rho, eigenbasis)), WithinAbs(s, 1e-10));
    }
  }
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const std::size_t d = 2 + seed % 4;
    const auto rho = random_state(d, seed);
    const auto basis = ProjectiveMeasurement::from_unitary(haar_unitary(d, seed + 7), "haar");
    REQUIRE(shannon_entropy(measurement_probabilities(rho, basis)) >= von_neumann_entropy(rho) - 1e-10);
  }
}

TEST_CASE("bz_from_povm", "[infomeasure][povm]") {
  const auto povm = eq1_povm(mub_set(2));
  REQUIRE_THAT(bz_from_povm(maximally_mixed(2), povm), WithinAbs(0.0, 1e-15));

  SECTION("pure qubit gives 1/18 both in closed form and from the six outcomes") {
    const auto rho = bloch_to_density(BlochVector{{0, 0, 1}});
    // Six outcomes (1/3, 0, 1/6, 1/6, 1/6, 1/6) against uniform 1/6:
    // (1/6)^2 + (1/6)^2 = 1/18.
    REQUIRE_THAT(bz_from_povm(rho, povm), WithinAbs(1.0 / 18.0, 1e-15));
    REQUIRE_THAT(bz_from_povm(random_state(2, 3, 1), povm), WithinAbs((1.0 - 0.5) / 9.0, 1e-10));
  }

  SECTION("unitary invariance over 100 Haar unitaries") {
    for (std::size_t d : {2u, 3u}) {
      const auto big = eq1_povm(mub_set(d));
      const auto rho = random_state(d, 42);
      const double reference = bz_from_povm(rho, big);
      const double closed = (purity(rho) - 1.0 / static_cast<double>(d)) / static_cast<double>((d + 1) * (d + 1));
      REQUIRE_THAT(reference, WithinAbs(closed, 1e-10));
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        REQUIRE_THAT(bz_from_povm(rotate(rho, haar_unitary(d, seed)), big), WithinAbs(reference, 1e-10));
      }
    }
  }
}

TEST_CASE("Haar second moment oracle", "[infomeasure][haar]") {
  // E over uniformly random unit b of (b^dagger rho b)^2 = (tr rho^2 + 1) / (d (d + 1)),
  // so E over Haar bases of sum_i p_i^2 = (tr rho^2 + 1) / (d + 1).
  // Checked here by Monte Carlo on Gaussian unit vectors, without haar_unitary.
  std::mt19937_64 gen(99);
  constexpr int kSamples = 200000;
  for (std::size_t d : {2u, 3u}) {
    for (const auto& rho : {random_state(d, 5, 1), maximally_mixed(d), random_state(d, 6, d)}) {
      const auto m = testing::to_eigen(rho.matrix());
      double sum = 0.0;
      double sum_sq = 0.0;
      for (int s = 0; s < kSamples; ++s) {
        const auto b = testing::random_unit_vector(d, gen);
        const double p = b.dot(m * b).real();
        const double sample = static_cast<double>(d) * p * p;
        sum += sample;
        sum_sq += sample * sample;
      }
      const double mean = sum / kSamples;
      const double se = std::sqrt(std::max(0.0, sum_sq / kSamples - mean * mean) / kSamples);
      const double predicted = (purity(rho) + 1.0) / static_cast<double>(d + 1);
      REQUIRE(std::abs(mean - predicted) <= 4.0 * se + 1e-12);
    }
  }
}

TEST_CASE("haar_average_bz", "[infomeasure][haar]") {
  SECTION("maximally mixed qubit") {
    const auto avg = haar_average_bz(maximally_mixed(2), 1000, 3);
    REQUIRE(std::abs(avg.estimate - haar_average_bz_closed_form(maximally_mixed(2))) <= 3 * avg.standard_error + 1e-15);
    REQUIRE(haar_average_bz_closed_form(maximally_mixed(2)) == 0.0);
  }

  SECTION("pure qubit converges to 1/6") {
    const auto rho = bloch_to_density(BlochVector{{0, 0, 1}});
    REQUIRE_THAT(haar_average_bz_closed_form(rho), WithinAbs(1.0 / 6.0, 1e-15));
    const auto avg = haar_average_bz(rho, 100000, 11);
    REQUIRE(std::abs(avg.estimate - 1.0 / 6.0) <= 3 * avg.standard_error);
    REQUIRE(avg.standard_error < 1e-3);
  }

  SECTION("deterministic in seed and consistent with per-trial samples") {
    const auto rho = random_state(3, 8);
    const auto a = haar_average_bz(rho, 200, 5);
    const auto b = haar_average_bz(rho, 200, 5);
    REQUIRE(a.estimate == b.estimate);
    REQUIRE(a.standard_error == b.standard_error);
    double mean = 0.0;
    for (std::uint64_t t = 0; t < 200; ++t) {
      mean += haar_bz_sample(rho, 5, t);
    }
    REQUIRE_THAT(a.estimate, WithinAbs(mean / 200.0, 1e-14));
  }

  SECTION("too few trials") {
    REQUIRE_THROWS_WITH(haar_average_bz(maximally_mixed(2), 99, 0), ContainsSubstring("below the minimum"));
  }
}

TEST_CASE("InfoReport totals are sums of the listed values", "[infomeasure][report]") {
  for (std::size_t d : {2u, 3u, 5u}) {
    const auto rho = random_state(d, d);
    for (auto scale : {BzScale::centered, BzScale::normalized}) {
      const auto report = make_info_report(rho, mub_set(d, 4), scale);
      REQUIRE(report.bases.size() == d + 1);
      double bz_sum = 0.0;
      double h_sum = 0.0;
      for (const auto& b : report.bases) {
        bz_sum += b.bz_value;
        h_sum += b.shannon_bits;
      }
      REQUIRE_THAT(report.i_total, WithinAbs(bz_sum, 1e-12));
      REQUIRE_THAT(report.shannon_sum, WithinAbs(h_sum, 1e-12));
      REQUIRE_THAT(report.purity, WithinAbs(purity(rho), 0.0));
    }
  }
}
