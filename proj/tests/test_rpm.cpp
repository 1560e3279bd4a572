#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "chromatch/experiments.hpp"
#include "chromatch/instances.hpp"
#include "chromatch/oracle.hpp"
#include "chromatch/rpm.hpp"

using namespace chromatch;

TEST_CASE("sampler handles the smallest graph") {
  Rng rng(0);
  CHECK(rpm_sample(2, rng) == PerfectMatching({1, 0}));
  CHECK_THROWS_AS(rpm_sample(3, rng), std::invalid_argument);
  CHECK_THROWS_AS(rpm_sample(0, rng), std::invalid_argument);
}

TEST_CASE("sampler is seed-deterministic and always valid") {
  Rng a(31), b(31);
  CHECK(rpm_sample(10, a) == rpm_sample(10, b));
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const PerfectMatching m = rpm_sample(12, rng);  // ctor re-validates
    CHECK(m.partners().size() == 12);
  }
}

TEST_CASE("on K4 every matching lands in a tight frequency window") {
  std::map<std::vector<Vertex>, int> counts;
  Rng rng(0);
  for (int i = 0; i < 30000; ++i) ++counts[rpm_sample(4, rng).partners()];
  REQUIRE(counts.size() == 3);
  for (const auto& [partners, c] : counts) {
    CHECK(c >= 9500);
    CHECK(c <= 10500);
  }
}

TEST_CASE("K8 frequencies pass a chi-square test across all 105 matchings") {
  std::map<std::vector<Vertex>, long long> counts;
  for (const PerfectMatching& m : all_perfect_matchings(8)) counts[m.partners()] = 0;
  Rng rng(2);
  const long long samples = 31500;  // expected 300 per category
  for (long long i = 0; i < samples; ++i) {
    auto it = counts.find(rpm_sample(8, rng).partners());
    REQUIRE(it != counts.end());
    ++it->second;
  }
  const double expected = static_cast<double>(samples) / 105.0;
  double chi = 0.0;
  for (const auto& [partners, c] : counts) {
    const double d = static_cast<double>(c) - expected;
    chi += d * d / expected;
  }
  CHECK(chi < chi_square_critical_001(104));
}

TEST_CASE("bound formula and bounded sampling") {
  CHECK(imbalance_bound(3, 10) ==
        Catch::Approx(9.0 * std::sqrt(30.0 * std::log(6.0))).epsilon(1e-12));
  const ColoredCompleteGraph g = random_balanced(3, 10, 4);
  Rng rng(4);
  const BoundedSampleResult r = sample_until_bound(g, 10, 100, rng);
  CHECK(r.met_bound);
  CHECK(r.attempts == 1);  // the bound exceeds the largest possible f here
  CHECK(r.bound == imbalance_bound(3, 10));
  CHECK(r.cv.norm1() <= r.bound);
  CHECK(color_vector(g, r.matching, 10) == r.cv);
  CHECK_THROWS_AS(sample_until_bound(g, 10, 0, rng), std::invalid_argument);
}

TEST_CASE("bounded sampling reports the final attempt when given one try") {
  const ColoredCompleteGraph g = random_balanced(4, 25, 11);
  Rng rng(11);
  const BoundedSampleResult r = sample_until_bound(g, 25, 1, rng);
  CHECK(r.attempts == 1);
  CHECK(r.met_bound);  // max f = 2n(k-1) = 150, bound ~ 173
}
