#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chromatch/graph.hpp"
#include "chromatch/matching.hpp"

namespace chromatch {

// Hard caps for the exhaustive routines below. (N-1)!! grows fast: N = 16
// already means 2,027,025 matchings.
inline constexpr int kMaxEnumerationOrder = 16;
inline constexpr int kMaxSumOrder = 14;

inline long long count_perfect_matchings(int order) {
  if (order < 2 || order % 2 != 0)
    throw std::invalid_argument("count_perfect_matchings: order must be even and >= 2");
  long long c = 1;
  for (int i = order - 1; i > 1; i -= 2) c *= i;
  return c;
}

/// Enumerates every perfect matching of K_order exactly once, in the
/// canonical order given by repeatedly matching the least unmatched vertex
/// to each larger unmatched vertex in increasing order. fn receives a
/// const PerfectMatching&.
template <typename Fn>
void for_each_perfect_matching(int order, Fn&& fn) {
  if (order < 2 || order % 2 != 0)
    throw std::invalid_argument("for_each_perfect_matching: order must be even and >= 2");
  if (order > kMaxEnumerationOrder)
    throw std::invalid_argument("for_each_perfect_matching: order exceeds enumeration cap");
  std::vector<Vertex> partner(order, -1);
  auto rec = [&](auto&& self, int matched) -> void {
    if (matched == order) {
      fn(PerfectMatching(partner));
      return;
    }
    Vertex u = 0;
    while (partner[u] != -1) ++u;
    for (Vertex v = u + 1; v < order; ++v) {
      if (partner[v] != -1) continue;
      partner[u] = v;
      partner[v] = u;
      self(self, matched + 2);
      partner[u] = -1;
      partner[v] = -1;
    }
  };
  rec(rec, 0);
}

// Materialized enumeration; kept to small orders since all matchings are
// held at once.
inline std::vector<PerfectMatching> all_perfect_matchings(int order) {
  if (order > 12)
    throw std::invalid_argument("all_perfect_matchings: order exceeds materialization cap");
  std::vector<PerfectMatching> out;
  out.reserve(count_perfect_matchings(order));
  for_each_perfect_matching(order, [&](const PerfectMatching& m) { out.push_back(m); });
  return out;
}

struct MinImbalanceResult {
  int min_f = 0;
  std::vector<Vertex> witness;  // partner array of the first minimizer
  long long minimizer_count = 0;
  long long total = 0;
};

/// Exhaustive minimum imbalance over all perfect matchings.
inline MinImbalanceResult exhaustive_min_f(const ColoredCompleteGraph& g, int n) {
  if (g.order() > kMaxEnumerationOrder)
    throw std::invalid_argument("exhaustive_min_f: order exceeds enumeration cap");
  if (g.order() != 2 * g.num_colors() * n)
    throw std::invalid_argument("exhaustive_min_f: order != 2kn");
  MinImbalanceResult r;
  r.min_f = -1;
  for_each_perfect_matching(g.order(), [&](const PerfectMatching& m) {
    const int f = imbalance(g, m, n);
    ++r.total;
    if (r.min_f < 0 || f < r.min_f) {
      r.min_f = f;
      r.witness = m.partners();
      r.minimizer_count = 1;
    } else if (f == r.min_f) {
      ++r.minimizer_count;
    }
  });
  return r;
}

/// Sum of deviation vectors over all perfect matchings. For balanced
/// colorings this is the zero vector, which puts the origin inside the
/// convex hull of the v(M); unbalanced colorings generally break it.
inline std::vector<long long> total_deviation_sum(const ColoredCompleteGraph& g, int n) {
  if (g.order() > kMaxSumOrder)
    throw std::invalid_argument("total_deviation_sum: order exceeds enumeration cap");
  if (g.order() != 2 * g.num_colors() * n)
    throw std::invalid_argument("total_deviation_sum: order != 2kn");
  std::vector<long long> sum(g.num_colors(), 0);
  for_each_perfect_matching(g.order(), [&](const PerfectMatching& m) {
    for (Vertex u = 0; u < g.order(); ++u) {
      const Vertex v = m.partner(u);
      if (v > u) ++sum[g.edge_color(u, v)];
    }
  });
  const long long matchings = count_perfect_matchings(g.order());
  for (auto& s : sum) s -= matchings * n;
  return sum;
}

}  // namespace chromatch
