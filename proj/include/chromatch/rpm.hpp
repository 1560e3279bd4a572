#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chromatch/graph.hpp"
#include "chromatch/matching.hpp"
#include "chromatch/rng.hpp"

namespace chromatch {

/// Draws a perfect matching of K_order uniformly at random: repeatedly take
/// the least unmatched vertex and pair it with a uniform choice among the
/// remaining unmatched vertices. Every matching has probability 1/(N-1)!!.
inline PerfectMatching rpm_sample(int order, Rng& rng) {
  if (order < 2 || order % 2 != 0)
    throw std::invalid_argument("rpm_sample: order must be even and >= 2");
  std::vector<Vertex> partner(order, -1);
  std::vector<Vertex> live(order);
  std::vector<int> pos(order);
  for (Vertex v = 0; v < order; ++v) {
    live[v] = v;
    pos[v] = v;
  }
  auto remove = [&](Vertex v) {
    const int p = pos[v];
    const Vertex last = live.back();
    live[p] = last;
    pos[last] = p;
    live.pop_back();
  };
  Vertex cursor = 0;
  while (!live.empty()) {
    while (partner[cursor] != -1) ++cursor;
    const Vertex x = cursor;
    remove(x);
    const Vertex y = live[rng.below(live.size())];
    remove(y);
    partner[x] = y;
    partner[y] = x;
  }
  return PerfectMatching(std::move(partner));
}

// High-probability imbalance bound for a uniform matching on a balanced
// k-coloring of K_{2kn}: 3k sqrt(kn ln(2k)).
inline double imbalance_bound(int k, int n) {
  if (k < 1 || n < 1) throw std::invalid_argument("imbalance_bound: k, n must be positive");
  return 3.0 * k * std::sqrt(static_cast<double>(k) * n * std::log(2.0 * k));
}

struct BoundedSampleResult {
  PerfectMatching matching;
  ColorVector cv;
  int attempts = 0;
  bool met_bound = false;
  double bound = 0.0;
};

/// Samples until the imbalance bound is met or the budget runs out; the last
/// sample is returned either way.
inline BoundedSampleResult sample_until_bound(const ColoredCompleteGraph& g, int n, int budget,
                                              Rng& rng) {
  if (budget < 1) throw std::invalid_argument("sample_until_bound: budget must be >= 1");
  const double bound = imbalance_bound(g.num_colors(), n);
  PerfectMatching m = rpm_sample(g.order(), rng);
  ColorVector cv = color_vector(g, m, n);
  int attempts = 1;
  while (cv.norm1() > bound && attempts < budget) {
    m = rpm_sample(g.order(), rng);
    cv = color_vector(g, m, n);
    ++attempts;
  }
  const bool ok = cv.norm1() <= bound;
  return BoundedSampleResult{std::move(m), std::move(cv), attempts, ok, bound};
}

}  // namespace chromatch
