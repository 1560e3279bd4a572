#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "chromatch/instances.hpp"
#include "chromatch/oracle.hpp"
#include "chromatch/rounding.hpp"

using namespace chromatch;

namespace {

std::string render(const ColoredCompleteGraph& g) {
  std::ostringstream out;
  write_instance(out, g);
  return out.str();
}

ColoredCompleteGraph parse(const std::string& text) {
  std::istringstream in(text);
  return read_instance(in);
}

}  // namespace

TEST_CASE("random_balanced hits the exact class sizes") {
  for (const auto& [k, n] : std::vector<std::pair<int, int>>{{3, 1}, {2, 2}, {5, 1}, {4, 3}}) {
    const ColoredCompleteGraph g = random_balanced(k, n, 42);
    REQUIRE(g.order() == 2 * k * n);
    REQUIRE(g.is_balanced());
    for (long long c : g.color_counts())
      REQUIRE(c == static_cast<long long>(n) * (2 * k * n - 1));
  }
  CHECK_THROWS_AS(random_balanced(0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(random_balanced(3, 0, 0), std::invalid_argument);
}

TEST_CASE("random_balanced is seed-deterministic") {
  const ColoredCompleteGraph a = random_balanced(3, 2, 9);
  const ColoredCompleteGraph b = random_balanced(3, 2, 9);
  const ColoredCompleteGraph c = random_balanced(3, 2, 10);
  CHECK(render(a) == render(b));
  CHECK(render(a) != render(c));
}

TEST_CASE("random_balanced spreads colors evenly across seeds") {
  // Edge (0,1) of K6 under k = 3 should carry each color about 1/3 of the
  // time over many seeds.
  int counts[3] = {0, 0, 0};
  const int trials = 10000;
  for (int s = 0; s < trials; ++s) ++counts[random_balanced(3, 1, s).edge_color(0, 1)];
  for (int c : counts) {
    CHECK(c > trials / 3 - 200);
    CHECK(c < trials / 3 + 200);
  }
}

TEST_CASE("the built-in K6 instance matches its published color classes") {
  const ColoredCompleteGraph g = figure1_instance();
  REQUIRE(g.order() == 6);
  REQUIRE(g.num_colors() == 3);
  CHECK(g.is_balanced());
  const std::vector<std::pair<int, int>> c0 = {{4, 5}, {0, 4}, {0, 1}, {1, 3}, {3, 4}};
  const std::vector<std::pair<int, int>> c1 = {{1, 2}, {0, 3}, {3, 5}, {2, 4}, {0, 5}};
  const std::vector<std::pair<int, int>> c2 = {{0, 2}, {2, 3}, {1, 4}, {1, 5}, {2, 5}};
  for (const auto& [u, v] : c0) CHECK(g.edge_color(u, v) == 0);
  for (const auto& [u, v] : c1) CHECK(g.edge_color(u, v) == 1);
  for (const auto& [u, v] : c2) CHECK(g.edge_color(u, v) == 2);
}

TEST_CASE("instance files render in the fixed format") {
  CHECK(render(figure1_instance()) == "6 3\n1 3 2 2 1 3 1 3 2 1 2 3 3 2 1\n");
  // 28 edges wrap at 20 tokens per line.
  const std::string text = render(random_balanced(2, 2, 0));
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "8 2");
  std::getline(in, line);
  CHECK(std::count(line.begin(), line.end(), ' ') == 19);
  std::getline(in, line);
  CHECK(std::count(line.begin(), line.end(), ' ') == 7);
  CHECK(text.back() == '\n');
  CHECK(text.find("  ") == std::string::npos);
}

TEST_CASE("write and read round-trip through streams and files") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ColoredCompleteGraph g = random_balanced(3, 2, s);
    const ColoredCompleteGraph back = parse(render(g));
    REQUIRE(render(back) == render(g));
  }
  const auto path = std::filesystem::temp_directory_path() / "chromatch_roundtrip.txt";
  const ColoredCompleteGraph g = random_balanced(4, 2, 3);
  write_instance(path.string(), g);
  const ColoredCompleteGraph back = read_instance(path.string());
  CHECK(render(back) == render(g));
  std::filesystem::remove(path);
}

TEST_CASE("reader accepts comments and arbitrary whitespace") {
  const ColoredCompleteGraph g = parse(
      "# K6 sample\n"
      "6 3   # header\n"
      "\n"
      "1 3 2 2 1\n"
      "3 1 3 2 1 2 3 3 2 1\n");
  CHECK(render(g) == render(figure1_instance()));
}

TEST_CASE("reader reports malformed input with line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("6\n1 2 3\n") == 1);                     // missing color count
  CHECK(line_of("5 3\n") == 1);                          // odd order
  CHECK(line_of("6 0\n") == 1);                          // no colors
  CHECK(line_of("abc 3\n") == 1);                        // not a number
  CHECK(line_of("6 3\n1 2 3\n") == 2);                   // too few colors
  CHECK(line_of("6 3\n1 3 2 2 1 3 1 3 2 1 2 3 3 2 4\n") == 2);  // color out of range
  CHECK(line_of("6 3\n1 3 2 2 1 3 1 3 2 1\n2 3 3 2 1\n9\n") == 4);  // trailing data
  CHECK(line_of("6 3\n1 3 2 2 1 3 1 3 2 1 2 3 3 2 0\n") == 2);  // colors are 1-based
  CHECK_THROWS_AS(read_instance("/nonexistent/chromatch.txt"), std::runtime_error);

  try {
    parse("6 3\n1 2 3\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("hull instances are deterministic and carry exact certificates") {
  const HullInstance a = unbalanced_hull_instance(4, 2, 1);
  const HullInstance b = unbalanced_hull_instance(4, 2, 1);
  CHECK(render(a.graph) == render(b.graph));
  CHECK(a.attempts == b.attempts);
  CHECK_FALSE(a.fell_back_to_balanced);
  CHECK_FALSE(a.graph.is_balanced());
  // The certificate must survive exact validation against its own graph.
  CHECK_NOTHROW(validate_combination(a.graph, 2, a.certificate.combination));
  CHECK_THROWS_AS(unbalanced_hull_instance(3, 2, 1), std::invalid_argument);  // needs k >= 4
}
