#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chromatch/graph.hpp"
#include "chromatch/rng.hpp"
#include "chromatch/rounding.hpp"

namespace chromatch {

/// Uniformly random coloring of K_{2kn} among those with exactly n(2kn-1)
/// edges of each color: a multiset with the exact per-color counts is
/// shuffled and laid out in edge-index order.
inline ColoredCompleteGraph random_balanced(int k, int n, std::uint64_t seed) {
  if (k < 1 || n < 1) throw std::invalid_argument("random_balanced: k, n must be positive");
  const long long order = 2LL * k * n;
  if (order > kMaxOrder)
    throw std::invalid_argument("random_balanced: 2kn exceeds supported maximum order");
  const int N = static_cast<int>(order);
  const long long per_color = static_cast<long long>(n) * (order - 1);
  std::vector<Color> colors;
  colors.reserve(edge_count(N));
  for (Color c = 0; c < k; ++c) colors.insert(colors.end(), per_color, c);
  Rng rng(seed);
  for (std::size_t i = colors.size() - 1; i > 0; --i)
    std::swap(colors[i], colors[rng.below(i + 1)]);
  return ColoredCompleteGraph(N, k, std::move(colors));
}

/// The 3-colored K6 with no perfect matching using all three colors: every
/// one of its 15 perfect matchings has imbalance exactly 2. Color classes
/// (1-based vertices u1..u6 mapped to 0..5):
///   color 1: {4,5} {0,4} {0,1} {1,3} {3,4}
///   color 2: {1,2} {0,3} {3,5} {2,4} {0,5}
///   color 3: {0,2} {1,4} {1,5} {2,3} {2,5}
inline ColoredCompleteGraph figure1_instance() {
  const std::vector<Color> colors = {0, 2, 1, 1, 0, 2, 0, 2, 1, 0, 1, 2, 2, 1, 0};
  return ColoredCompleteGraph(6, 3, colors);
}

inline constexpr int kHullAttemptCap = 100;

struct HullInstance {
  ColoredCompleteGraph graph;
  OriginCertificate certificate;
  int attempts = 0;
  bool fell_back_to_balanced = false;
};

/// Generates a coloring that is NOT balanced yet still admits an exact
/// convex combination of matching deviation vectors hitting the origin.
/// Each attempt perturbs a fresh balanced instance by overwriting the color
/// of one edge of a random unequal-color pair (k overwrites), then asks the
/// LP for a certificate; unbalanced colorings carry no general guarantee,
/// so failures retry with a derived seed up to kHullAttemptCap, after which
/// a balanced instance (always certifiable) is returned with a flag.
inline HullInstance unbalanced_hull_instance(int k, int n, std::uint64_t seed) {
  if (k < 4) throw std::invalid_argument("unbalanced_hull_instance: requires k >= 4");
  if (n < 1) throw std::invalid_argument("unbalanced_hull_instance: n must be positive");
  for (int attempt = 1; attempt <= kHullAttemptCap; ++attempt) {
    const std::uint64_t attempt_seed = derive_seed(seed, attempt);
    ColoredCompleteGraph balanced = random_balanced(k, n, attempt_seed);
    Rng rng(derive_seed(attempt_seed, 0));
    std::vector<Color> colors = balanced.colors();
    const std::uint64_t edges = colors.size();
    for (int i = 0; i < k; ++i) {
      for (int tries = 0; tries < 1000; ++tries) {
        const std::size_t e1 = rng.below(edges);
        const std::size_t e2 = rng.below(edges);
        if (colors[e1] != colors[e2]) {
          colors[e1] = colors[e2];
          break;
        }
      }
    }
    ColoredCompleteGraph g(balanced.order(), k, std::move(colors));
    if (g.is_balanced()) continue;
    Rng cert_rng(derive_seed(attempt_seed, 1));
    OriginCertificate cert = certify_origin(g, n, {}, kDefaultCertifyBudget, cert_rng);
    if (cert.found) return HullInstance{std::move(g), std::move(cert), attempt, false};
  }
  ColoredCompleteGraph g = random_balanced(k, n, seed);
  Rng cert_rng(derive_seed(seed, 0));
  OriginCertificate cert = certify_origin(g, n, {}, kDefaultCertifyBudget, cert_rng);
  return HullInstance{std::move(g), std::move(cert), kHullAttemptCap, true};
}

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line)
      : std::runtime_error(message + " (line " + std::to_string(line) + ")"), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

/// Canonical text form: line 1 is "N k"; the edge colors follow in
/// edge-index order as 1-based integers, single-space separated, 20 per
/// line. Writing then reading is lossless, and rewriting a canonical file
/// reproduces it byte for byte.
inline void write_instance(std::ostream& out, const ColoredCompleteGraph& g) {
  out << g.order() << ' ' << g.num_colors() << '\n';
  const std::vector<Color>& colors = g.colors();
  for (std::size_t i = 0; i < colors.size(); ++i) {
    out << colors[i] + 1;
    out << ((i % 20 == 19 || i + 1 == colors.size()) ? '\n' : ' ');
  }
}

inline void write_instance(const std::string& path, const ColoredCompleteGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_instance: cannot open " + path);
  write_instance(out, g);
  if (!out) throw std::runtime_error("write_instance: write failed for " + path);
}

inline ColoredCompleteGraph read_instance(std::istream& in) {
  std::vector<std::pair<long long, int>> tokens;  // value, source line
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        const long long value = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        tokens.emplace_back(value, line_no);
      } catch (const std::exception&) {
        throw ParseError("read_instance: not an integer: '" + tok + "'", line_no);
      }
    }
  }
  if (tokens.size() < 2) throw ParseError("read_instance: missing 'N k' header", 1);
  if (tokens[0].second != tokens[1].second)
    throw ParseError("read_instance: 'N k' header must sit on one line", tokens[0].second);
  const long long order = tokens[0].first;
  const long long k = tokens[1].first;
  if (order < 2 || order % 2 != 0)
    throw ParseError("read_instance: order must be even and >= 2", tokens[0].second);
  if (order > kMaxOrder)
    throw ParseError("read_instance: order exceeds supported maximum", tokens[0].second);
  if (k < 1) throw ParseError("read_instance: need at least one color", tokens[1].second);
  const long long expected = edge_count(static_cast<int>(order));
  const long long got = static_cast<long long>(tokens.size()) - 2;
  if (got < expected)
    throw ParseError("read_instance: expected " + std::to_string(expected) +
                         " edge colors, found only " + std::to_string(got),
                     line_no == 0 ? 1 : line_no);
  if (got > expected)
    throw ParseError("read_instance: trailing data after " + std::to_string(expected) +
                         " edge colors",
                     tokens[2 + expected].second);
  std::vector<Color> colors;
  colors.reserve(expected);
  for (long long i = 0; i < expected; ++i) {
    const auto [value, at_line] = tokens[2 + i];
    if (value < 1 || value > k)
      throw ParseError("read_instance: color " + std::to_string(value) + " outside 1.." +
                           std::to_string(k),
                       at_line);
    colors.push_back(static_cast<Color>(value - 1));
  }
  return ColoredCompleteGraph(static_cast<int>(order), static_cast<int>(k), std::move(colors));
}

inline ColoredCompleteGraph read_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_instance: cannot open " + path);
  return read_instance(in);
}

}  // namespace chromatch
