#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "chromatch/graph.hpp"
#include "chromatch/matching.hpp"
#include "chromatch/parallel.hpp"
#include "chromatch/rng.hpp"
#include "chromatch/rpm.hpp"

namespace chromatch {

inline constexpr int kDefaultPlateauBudget = 200;

struct SwapMove {
  Edge e1;
  Edge e2;
  SwapMode mode;
  int delta;
};

namespace detail {

inline std::vector<Edge> edges_by_index(const PerfectMatching& m) {
  std::vector<Edge> es = m.edges();
  std::sort(es.begin(), es.end(),
            [](const Edge& a, const Edge& b) { return edge_index(a) < edge_index(b); });
  return es;
}

}  // namespace detail

/// Scans all edge pairs and both rewirings for the most improving swap.
/// Ties go to the lexicographically smallest (edge index, edge index, mode),
/// which the scan order yields for free. Returns nothing when no swap
/// strictly decreases the imbalance.
inline std::optional<SwapMove> best_swap(const ColoredCompleteGraph& g, const PerfectMatching& m,
                                         const ColorVector& cv) {
  const std::vector<Edge> es = detail::edges_by_index(m);
  std::optional<SwapMove> best;
  for (std::size_t i = 0; i + 1 < es.size(); ++i) {
    for (std::size_t j = i + 1; j < es.size(); ++j) {
      for (SwapMode mode : {SwapMode::kStraight, SwapMode::kCrossed}) {
        const int d = swap_delta(g, cv, es[i], es[j], mode);
        if (d < 0 && (!best || d < best->delta)) best = SwapMove{es[i], es[j], mode, d};
      }
    }
  }
  return best;
}

inline std::optional<SwapMove> best_swap(const ColoredCompleteGraph& g, const PerfectMatching& m,
                                         int n) {
  return best_swap(g, m, color_vector(g, m, n));
}

struct SearchTrace {
  std::vector<int> f_history;  // f after each applied move, starting at f(m0)
  int improving_moves = 0;
  int plateau_moves = 0;
};

struct SearchResult {
  PerfectMatching matching;
  ColorVector cv;
  SearchTrace trace;
};

/// Steepest-descent swap search. Applies best improving swaps while any
/// exist; on a plateau spends one unit of plateau_budget on a uniformly
/// random zero-delta swap and resumes. Stops when no improving swap exists
/// and the budget is gone (or no sideways move exists). f never increases.
inline SearchResult local_search(const ColoredCompleteGraph& g, PerfectMatching m, int n,
                                 int plateau_budget, Rng& rng) {
  ColorVector cv = color_vector(g, m, n);
  SearchTrace trace;
  trace.f_history.push_back(cv.norm1());
  std::vector<SwapMove> sideways;
  while (true) {
    if (cv.norm1() == 0) break;
    if (auto mv = best_swap(g, m, cv)) {
      m = apply_swap(m, mv->e1, mv->e2, mv->mode);
      apply_swap_to_vector(g, cv, mv->e1, mv->e2, mv->mode);
      ++trace.improving_moves;
      trace.f_history.push_back(trace.f_history.back() + mv->delta);
      assert(cv == color_vector(g, m, n));
      assert(cv.norm1() == trace.f_history.back());
      continue;
    }
    if (plateau_budget <= 0) break;
    sideways.clear();
    const std::vector<Edge> es = detail::edges_by_index(m);
    for (std::size_t i = 0; i + 1 < es.size(); ++i)
      for (std::size_t j = i + 1; j < es.size(); ++j)
        for (SwapMode mode : {SwapMode::kStraight, SwapMode::kCrossed})
          if (swap_delta(g, cv, es[i], es[j], mode) == 0)
            sideways.push_back(SwapMove{es[i], es[j], mode, 0});
    if (sideways.empty()) break;
    const SwapMove& mv = sideways[rng.below(sideways.size())];
    m = apply_swap(m, mv.e1, mv.e2, mv.mode);
    apply_swap_to_vector(g, cv, mv.e1, mv.e2, mv.mode);
    --plateau_budget;
    ++trace.plateau_moves;
    trace.f_history.push_back(trace.f_history.back());
  }
  return SearchResult{std::move(m), std::move(cv), std::move(trace)};
}

struct RestartStat {
  int restart = 0;
  int initial_f = 0;
  int final_f = 0;
  int improving_moves = 0;
  int plateau_moves = 0;
};

struct MultiStartResult {
  PerfectMatching best;
  int best_f = 0;
  int best_restart = 0;
  std::vector<RestartStat> restarts;
};

/// Multi-start search: each restart draws a fresh uniform matching from its
/// own seed stream (derived from seed and the restart index) and runs
/// local_search. Restarts execute in parallel but the outcome is identical
/// for any worker count; the best final matching wins, earliest restart on
/// ties.
inline MultiStartResult search_from_rpm(const ColoredCompleteGraph& g, int n, int restarts,
                                        int plateau_budget, std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("search_from_rpm: restarts must be >= 1");
  std::vector<std::optional<SearchResult>> results(restarts);
  std::vector<RestartStat> stats(restarts);
  parallel_for(static_cast<std::size_t>(restarts), [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    PerfectMatching start = rpm_sample(g.order(), rng);
    const int f0 = imbalance(g, start, n);
    SearchResult r = local_search(g, std::move(start), n, plateau_budget, rng);
    stats[i] = RestartStat{static_cast<int>(i), f0, r.cv.norm1(), r.trace.improving_moves,
                           r.trace.plateau_moves};
    results[i] = std::move(r);
  });
  int best = 0;
  for (int i = 1; i < restarts; ++i)
    if (results[i]->cv.norm1() < results[best]->cv.norm1()) best = i;
  return MultiStartResult{std::move(results[best]->matching), stats[best].final_f, best,
                          std::move(stats)};
}

}  // namespace chromatch
