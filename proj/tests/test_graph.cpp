#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <set>
#include <vector>

#include "chromatch/graph.hpp"
#include "chromatch/parallel.hpp"
#include "chromatch/rng.hpp"

using namespace chromatch;

TEST_CASE("rng produces the canonical splitmix64 stream") {
  Rng rng(0);
  // First three outputs of splitmix64 seeded with 0; any deviation would
  // silently change every seeded experiment in the project.
  CHECK(rng.next() == 0xE220A8397B1DCDAFull);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ull);
  CHECK(rng.next() == 0x06C45D188009454Full);
}

TEST_CASE("rng below stays in range and hits every residue") {
  Rng rng(123);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const std::uint64_t x = rng.below(7);
    REQUIRE(x < 7);
    ++counts[static_cast<int>(x)];
  }
  for (int c : counts) CHECK(c > 800);  // expected 1000 each
  CHECK(rng.below(1) == 0);
  CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
}

TEST_CASE("derive_seed separates streams") {
  const std::uint64_t base = 42;
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 100; ++i) seeds.insert(derive_seed(base, i));
  CHECK(seeds.size() == 100);
  CHECK(derive_seed(base, 5) == derive_seed(base, 5));
  CHECK(derive_seed(base, 5) != derive_seed(base + 1, 5));
}

TEST_CASE("rng split gives reproducible independent streams") {
  Rng a(7);
  Rng b = a.split(3);
  Rng b2 = Rng(7).split(3);
  CHECK(b.next() == b2.next());
  CHECK(Rng(7).split(3).next() != Rng(7).split(4).next());
}

TEST_CASE("edge normalizes and validates endpoints") {
  const Edge e(5, 2);
  CHECK(e.u == 2);
  CHECK(e.v == 5);
  CHECK(Edge(2, 5) == e);
  CHECK_THROWS_AS(Edge(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(Edge(-1, 2), std::invalid_argument);
}

TEST_CASE("edge_index enumerates pairs in lexicographic (v,u) order") {
  // Bijection onto 0..C(N,2)-1 for several N.
  for (int order : {2, 4, 6, 9}) {
    std::vector<char> hit(edge_count(order), 0);
    for (int v = 1; v < order; ++v)
      for (int u = 0; u < v; ++u) {
        const std::size_t idx = edge_index(u, v);
        REQUIRE(idx < hit.size());
        REQUIRE(!hit[idx]);
        hit[idx] = 1;
      }
  }
  CHECK(edge_index(0, 1) == 0);
  CHECK(edge_index(0, 2) == 1);
  CHECK(edge_index(1, 2) == 2);
  CHECK(edge_index(4, 5) == 14);
  CHECK_THROWS_AS(edge_index(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(edge_index(5, 2), std::invalid_argument);
}

TEST_CASE("colored graph validates its inputs") {
  std::vector<Color> colors(edge_count(6), 0);
  CHECK_NOTHROW(ColoredCompleteGraph(6, 1, colors));
  CHECK_THROWS_AS(ColoredCompleteGraph(5, 1, std::vector<Color>(edge_count(5), 0)),
                  std::invalid_argument);  // odd order
  CHECK_THROWS_AS(ColoredCompleteGraph(0, 1, {}), std::invalid_argument);
  CHECK_THROWS_AS(ColoredCompleteGraph(6, 0, colors), std::invalid_argument);
  CHECK_THROWS_AS(ColoredCompleteGraph(6, 1, std::vector<Color>(10, 0)),
                  std::invalid_argument);  // wrong edge count
  colors[3] = 1;                           // out of range for k = 1
  CHECK_THROWS_AS(ColoredCompleteGraph(6, 1, colors), std::invalid_argument);
  CHECK_THROWS_AS(ColoredCompleteGraph(kMaxOrder + 2, 1, {}), std::invalid_argument);
}

TEST_CASE("colored graph counts and lookups") {
  // K4 with colors laid out by edge index: 01->0, 02->1, 12->0, 03->1, 13->0, 23->1.
  const ColoredCompleteGraph g(4, 2, {0, 1, 0, 1, 0, 1});
  CHECK(g.order() == 4);
  CHECK(g.num_colors() == 2);
  CHECK(g.color_counts() == std::vector<long long>{3, 3});
  CHECK(g.edge_color(0, 1) == 0);
  CHECK(g.edge_color(1, 0) == 0);
  CHECK(g.edge_color(Edge(2, 3)) == 1);
  CHECK(g.is_balanced());  // n(2kn-1) = 1*3 = 3 per color
  const ColoredCompleteGraph h(4, 2, {0, 0, 0, 1, 0, 1});
  CHECK_FALSE(h.is_balanced());
}

TEST_CASE("per_color_target requires order divisible by 2k") {
  const ColoredCompleteGraph g(4, 2, {0, 1, 0, 1, 0, 1});
  CHECK(per_color_target(g) == 1);
  const ColoredCompleteGraph h(6, 2, std::vector<Color>(15, 0));
  CHECK_THROWS_AS(per_color_target(h), std::invalid_argument);
}

TEST_CASE("worker_limit honors the environment variable") {
  setenv("CHROMATCH_THREADS", "3", 1);
  CHECK(worker_limit() == 3);
  setenv("CHROMATCH_THREADS", "0", 1);
  CHECK(worker_limit() >= 1);
  setenv("CHROMATCH_THREADS", "junk", 1);
  CHECK(worker_limit() >= 1);
  unsetenv("CHROMATCH_THREADS");
  CHECK(worker_limit() >= 1);
}

TEST_CASE("parallel_for covers every index exactly once") {
  setenv("CHROMATCH_THREADS", "4", 1);
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) REQUIRE(h == 1);
  unsetenv("CHROMATCH_THREADS");
}

TEST_CASE("parallel_for propagates worker exceptions") {
  setenv("CHROMATCH_THREADS", "2", 1);
  CHECK_THROWS_AS(parallel_for(100,
                               [&](std::size_t i) {
                                 if (i == 17) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  unsetenv("CHROMATCH_THREADS");
}
