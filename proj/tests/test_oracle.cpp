#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "chromatch/instances.hpp"
#include "chromatch/oracle.hpp"

using namespace chromatch;

TEST_CASE("matching counts follow the double factorial") {
  const std::vector<std::pair<int, long long>> table = {
      {2, 1},      {4, 3},       {6, 15},      {8, 105},
      {10, 945},   {12, 10395},  {14, 135135}, {16, 2027025}};
  for (const auto& [order, expected] : table) CHECK(count_perfect_matchings(order) == expected);
  CHECK_THROWS_AS(count_perfect_matchings(5), std::invalid_argument);
  CHECK_THROWS_AS(count_perfect_matchings(0), std::invalid_argument);
}

TEST_CASE("enumeration yields each matching exactly once") {
  for (int order : {2, 4, 6, 8, 10, 12}) {
    long long count = 0;
    for_each_perfect_matching(order, [&](const PerfectMatching&) { ++count; });
    CHECK(count == count_perfect_matchings(order));
  }
  // Distinctness, checked where the full set fits comfortably.
  std::set<std::vector<Vertex>> seen;
  for_each_perfect_matching(8, [&](const PerfectMatching& m) { seen.insert(m.partners()); });
  CHECK(seen.size() == 105);
  CHECK_THROWS_AS(for_each_perfect_matching(18, [](const PerfectMatching&) {}),
                  std::invalid_argument);
}

TEST_CASE("enumeration starts from the identity pairing") {
  bool first = true;
  for_each_perfect_matching(6, [&](const PerfectMatching& m) {
    if (first) {
      CHECK(m == PerfectMatching({1, 0, 3, 2, 5, 4}));
      first = false;
    }
  });
  CHECK(all_perfect_matchings(6).size() == 15);
  CHECK_THROWS_AS(all_perfect_matchings(14), std::invalid_argument);
}

TEST_CASE("the built-in K6 instance has minimum imbalance exactly 2") {
  const ColoredCompleteGraph g = figure1_instance();
  const MinImbalanceResult r = exhaustive_min_f(g, 1);
  CHECK(r.min_f == 2);
  CHECK(r.total == 15);
  // Every single matching attains the minimum on this coloring.
  CHECK(r.minimizer_count == 15);
  const PerfectMatching witness(r.witness);
  CHECK(imbalance(g, witness, 1) == 2);
}

TEST_CASE("a coloring with a rainbow matching has minimum zero") {
  // Start from the built-in instance and recolor {0,1},{2,3},{4,5} to three
  // distinct colors; min f drops to 0 with that matching as witness.
  std::vector<Color> colors(edge_count(6), 0);
  const ColoredCompleteGraph base = figure1_instance();
  for (int v = 1; v < 6; ++v)
    for (int u = 0; u < v; ++u) colors[edge_index(u, v)] = base.edge_color(u, v);
  colors[edge_index(0, 1)] = 0;
  colors[edge_index(2, 3)] = 1;
  colors[edge_index(4, 5)] = 2;
  const ColoredCompleteGraph g(6, 3, colors);
  const MinImbalanceResult r = exhaustive_min_f(g, 1);
  CHECK(r.min_f == 0);
  CHECK(imbalance(g, PerfectMatching(r.witness), 1) == 0);
}

TEST_CASE("deviation sums vanish exactly on balanced colorings") {
  // Balanced colorings contribute each color equally across the full set of
  // matchings, so the summed deviation vector is identically zero.
  for (const auto& [k, n, seed] : std::vector<std::tuple<int, int, std::uint64_t>>{
           {3, 1, 0}, {3, 1, 7}, {2, 2, 1}, {5, 1, 3}, {3, 2, 2}}) {
    const ColoredCompleteGraph g = random_balanced(k, n, seed);
    const std::vector<long long> sum = total_deviation_sum(g, n);
    for (long long s : sum) REQUIRE(s == 0);
  }
  const std::vector<long long> fig = total_deviation_sum(figure1_instance(), 1);
  CHECK(fig == std::vector<long long>{0, 0, 0});
}

TEST_CASE("deviation sums detect unbalanced colorings") {
  // Negative control: moving one edge between classes must show up, since the
  // sum is linear in the class sizes.
  const ColoredCompleteGraph g = random_balanced(3, 1, 0);
  std::vector<Color> colors(edge_count(6));
  for (int v = 1; v < 6; ++v)
    for (int u = 0; u < v; ++u) colors[edge_index(u, v)] = g.edge_color(u, v);
  colors[0] = (colors[0] + 1) % 3;
  const ColoredCompleteGraph h(6, 3, colors);
  REQUIRE_FALSE(h.is_balanced());
  const std::vector<long long> sum = total_deviation_sum(h, 1);
  bool any_nonzero = false;
  for (long long s : sum) any_nonzero = any_nonzero || s != 0;
  CHECK(any_nonzero);
}

TEST_CASE("exhaustive routines reject oversized inputs") {
  const ColoredCompleteGraph g(16, 4, std::vector<Color>(edge_count(16), 0));
  CHECK_NOTHROW(exhaustive_min_f(g, 2));
  const ColoredCompleteGraph h(16, 2, std::vector<Color>(edge_count(16), 0));
  CHECK_THROWS_AS(total_deviation_sum(h, 4), std::invalid_argument);
}
