#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chromatch/exact_lp.hpp"
#include "chromatch/graph.hpp"
#include "chromatch/matching.hpp"
#include "chromatch/rational.hpp"
#include "chromatch/rng.hpp"
#include "chromatch/rpm.hpp"

namespace chromatch {

inline constexpr int kDefaultRetryCap = 50;
inline constexpr int kDefaultCertifyBudget = 1024;

// Per-merge deviation threshold: 13 k^{7/4} n^{3/4} sqrt(ln 2k).
inline double stage_deviation_bound(int k, int n) {
  return 13.0 * std::pow(k, 1.75) * std::pow(n, 0.75) * std::sqrt(std::log(2.0 * k));
}

// Telescoped bound over the at most k merges: 13 k^{11/4} n^{3/4} sqrt(ln 2k).
inline double pipeline_deviation_bound(int k, int n) {
  return 13.0 * std::pow(k, 2.75) * std::pow(n, 0.75) * std::sqrt(std::log(2.0 * k));
}

// Smallest integer a with a*a >= x.
inline long long ceil_sqrt(long long x) {
  if (x < 0) throw std::invalid_argument("ceil_sqrt: negative input");
  long long a = static_cast<long long>(std::sqrt(static_cast<double>(x)));
  while (a > 0 && (a - 1) * (a - 1) >= x) --a;
  while (a * a < x) ++a;
  return a;
}

/// Cycle of the symmetric difference of two matchings, stored as its vertex
/// sequence. Position-0 starts the walk on an m1 edge, so edges at even
/// positions (and only those) belong to m1; the closing edge does not.
using AlternatingCycle = std::vector<Vertex>;

/// Decomposes the symmetric difference of m1 and m2 into its cycles. Each cycle starts at its minimum
/// vertex, followed by that vertex's m1 partner; cycles are listed by
/// increasing minimum vertex. Vertices matched identically in both
/// matchings appear in no cycle.
inline std::vector<AlternatingCycle> alternating_cycles(const PerfectMatching& m1,
                                                        const PerfectMatching& m2) {
  if (m1.order() != m2.order())
    throw std::invalid_argument("alternating_cycles: matchings on different vertex sets");
  const int order = m1.order();
  std::vector<char> visited(order, 0);
  std::vector<AlternatingCycle> cycles;
  for (Vertex v0 = 0; v0 < order; ++v0) {
    if (visited[v0] || m1.partner(v0) == m2.partner(v0)) continue;
    AlternatingCycle cyc;
    Vertex cur = v0;
    bool use_m1 = true;
    do {
      cyc.push_back(cur);
      visited[cur] = 1;
      cur = use_m1 ? m1.partner(cur) : m2.partner(cur);
      use_m1 = !use_m1;
    } while (cur != v0);
    cycles.push_back(std::move(cyc));
  }
  return cycles;
}

namespace detail {

inline std::vector<Edge> cycle_edges(const AlternatingCycle& cyc) {
  std::vector<Edge> es;
  es.reserve(cyc.size());
  for (std::size_t t = 0; t + 1 < cyc.size(); ++t) es.emplace_back(cyc[t], cyc[t + 1]);
  es.emplace_back(cyc.back(), cyc.front());
  return es;
}

// x(C) = v(m1 xor E(C)) - v(m1): toggling removes the m1 edges (even
// positions) and inserts the others (odd positions and the closing edge).
inline std::vector<int> cycle_delta(const ColoredCompleteGraph& g, const AlternatingCycle& cyc) {
  std::vector<int> delta(g.num_colors(), 0);
  const std::size_t len = cyc.size();
  for (std::size_t t = 0; t < len; ++t) {
    const Color c = g.edge_color(cyc[t], cyc[(t + 1) % len]);
    delta[c] += (t % 2 == 0) ? -1 : +1;
  }
  return delta;
}

// Re-closes an oversized cycle as r = floor(m/a) shorter ones. Cuts fall on
// the non-m1 edge after every a-th m1 edge; the wrap-around segment absorbs
// the remainder, so segments hold between a and 2a-1 m1 edges. Each new
// cycle is the segment's vertex run closed by a chord between its ends; the
// chord is not an m1 edge because segments hold at least two m1 edges.
inline std::vector<AlternatingCycle> split_long_cycle(const AlternatingCycle& cyc, long long a) {
  const std::size_t len = cyc.size();
  const long long m = static_cast<long long>(len) / 2;
  const long long r = m / a;
  if (r < 2) throw std::logic_error("split_long_cycle: cycle too short to split");
  std::vector<AlternatingCycle> out;
  out.reserve(r);
  for (long long j = 1; j < r; ++j) {
    AlternatingCycle seg(cyc.begin() + 2 * j * a, cyc.begin() + 2 * (j + 1) * a);
    out.push_back(std::move(seg));
  }
  AlternatingCycle wrap(cyc.begin() + 2 * r * a, cyc.end());
  wrap.insert(wrap.end(), cyc.begin(), cyc.begin() + 2 * a);
  out.push_back(std::move(wrap));
  return out;
}

}  // namespace detail

/// Union of vertex-disjoint m1-alternating cycles, toggled as one unit
/// during rounding. delta is the deviation change caused by the toggle.
struct CycleBundle {
  std::vector<Edge> edges;
  int m1_edge_count = 0;
  std::vector<int> delta;
};

struct SplitResult {
  PerfectMatching m2_prime;
  std::vector<CycleBundle> bundles;
};

/// Applies the selected bundles to m1 in one pass: every vertex covered by
/// a selected bundle is re-matched along its unique non-m1 bundle edge.
inline PerfectMatching toggle_bundles(const PerfectMatching& m1,
                                      const std::vector<CycleBundle>& bundles,
                                      const std::vector<char>& selected) {
  if (selected.size() != bundles.size())
    throw std::invalid_argument("toggle_bundles: one selection flag per bundle required");
  std::vector<Vertex> partner = m1.partners();
  for (std::size_t b = 0; b < bundles.size(); ++b) {
    if (!selected[b]) continue;
    for (const Edge& e : bundles[b].edges) {
      if (m1.partner(e.u) == e.v) continue;
      partner[e.u] = e.v;
      partner[e.v] = e.u;
    }
  }
  return PerfectMatching(std::move(partner));
}

inline PerfectMatching toggle_all_bundles(const PerfectMatching& m1,
                                          const std::vector<CycleBundle>& bundles) {
  return toggle_bundles(m1, bundles, std::vector<char>(bundles.size(), 1));
}

/// Rebuilds m2 into a nearby matching m2' whose difference from m1 splits
/// into small toggle units: cycles with more than 5 sqrt(kn) m1-edges are
/// cut and re-closed into segments of a to 2a-1 m1-edges (a = ceil sqrt(kn)),
/// cycles with fewer than sqrt(kn) m1-edges are packed first-fit by
/// decreasing size into bundles of at most 4 sqrt(kn) m1-edges. Guarantees:
///   (i)   m2' = m1 xor (union of all bundle edges)
///   (ii)  |v(m2) - v(m2')|_1 <= 2 sqrt(kn)
///   (iii) at most 3 sqrt(kn) bundles
///   (iv)  bundles split into vertex-disjoint alternating cycles, each with
///         at most 5 sqrt(kn) m1-edges
inline SplitResult split_and_group(const ColoredCompleteGraph& g, const PerfectMatching& m1,
                                   const PerfectMatching& m2, int n) {
  const int k = g.num_colors();
  if (g.order() != 2 * k * n) throw std::invalid_argument("split_and_group: order != 2kn");
  if (m1.order() != g.order() || m2.order() != g.order())
    throw std::invalid_argument("split_and_group: matching order differs from graph order");
  const long long kn = static_cast<long long>(k) * n;
  const long long a = ceil_sqrt(kn);

  std::vector<AlternatingCycle> cycles;
  for (AlternatingCycle& cyc : alternating_cycles(m1, m2)) {
    const long long m = static_cast<long long>(cyc.size()) / 2;
    if (m * m > 25 * kn) {
      for (AlternatingCycle& part : detail::split_long_cycle(cyc, a))
        cycles.push_back(std::move(part));
    } else {
      cycles.push_back(std::move(cyc));
    }
  }

  // Heavy cycles (at least sqrt(kn) m1-edges) become bundles of their own;
  // the rest are packed together so most bundles also reach sqrt(kn).
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> shorts;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    const long long m = static_cast<long long>(cycles[i].size()) / 2;
    if (m * m >= kn)
      groups.push_back({i});
    else
      shorts.push_back(i);
  }
  std::stable_sort(shorts.begin(), shorts.end(), [&](std::size_t x, std::size_t y) {
    return cycles[x].size() > cycles[y].size();
  });
  std::vector<std::vector<std::size_t>> packed;
  std::vector<long long> packed_m;
  for (std::size_t i : shorts) {
    const long long m = static_cast<long long>(cycles[i].size()) / 2;
    bool placed = false;
    for (std::size_t b = 0; b < packed.size(); ++b) {
      const long long total = packed_m[b] + m;
      if (total * total <= 16 * kn) {
        packed[b].push_back(i);
        packed_m[b] += m;
        placed = true;
        break;
      }
    }
    if (!placed) {
      packed.push_back({i});
      packed_m.push_back(m);
    }
  }
  groups.insert(groups.end(), packed.begin(), packed.end());

  std::vector<CycleBundle> bundles;
  bundles.reserve(groups.size());
  for (const auto& group : groups) {
    CycleBundle b;
    b.delta.assign(k, 0);
    for (std::size_t i : group) {
      const std::vector<Edge> es = detail::cycle_edges(cycles[i]);
      b.edges.insert(b.edges.end(), es.begin(), es.end());
      b.m1_edge_count += static_cast<int>(cycles[i].size() / 2);
      const std::vector<int> d = detail::cycle_delta(g, cycles[i]);
      for (int c = 0; c < k; ++c) b.delta[c] += d[c];
    }
    bundles.push_back(std::move(b));
  }

  PerfectMatching m2_prime = toggle_all_bundles(m1, bundles);
  return SplitResult{std::move(m2_prime), std::move(bundles)};
}

/// Programmatic check of the split_and_group guarantees, used by the test
/// and experiment harnesses.
struct SplitCheck {
  bool toggle_matches = false;     // (i)
  bool v_close = false;            // (ii)
  bool bundle_count_ok = false;    // (iii)
  bool cycles_ok = false;          // (iv)
  bool deltas_consistent = false;  // bundle bookkeeping recomputes exactly

  bool all() const {
    return toggle_matches && v_close && bundle_count_ok && cycles_ok && deltas_consistent;
  }
};

inline SplitCheck check_split(const ColoredCompleteGraph& g, const PerfectMatching& m1,
                              const PerfectMatching& m2, int n, const SplitResult& result) {
  const int k = g.num_colors();
  const long long kn = static_cast<long long>(k) * n;
  SplitCheck check;

  check.toggle_matches = toggle_all_bundles(m1, result.bundles) == result.m2_prime;

  const ColorVector v2 = color_vector(g, m2, n);
  const ColorVector v2p = color_vector(g, result.m2_prime, n);
  long long dist = 0;
  for (int c = 0; c < k; ++c) dist += std::llabs(v2.deviations[c] - v2p.deviations[c]);
  check.v_close = dist * dist <= 4 * kn;

  const long long count = static_cast<long long>(result.bundles.size());
  check.bundle_count_ok = count * count <= 9 * kn;

  // (iv) plus bookkeeping: walk each bundle's edges, demand every covered
  // vertex has exactly one m1 and one non-m1 incident edge, cycles close,
  // no vertex appears in two bundles, and per-cycle m1 counts stay small.
  check.cycles_ok = true;
  check.deltas_consistent = true;
  std::vector<char> seen(g.order(), 0);
  const ColorVector v1 = color_vector(g, m1, n);
  for (const CycleBundle& bundle : result.bundles) {
    std::vector<Vertex> m1_mate(g.order(), -1), other_mate(g.order(), -1);
    bool shape_ok = true;
    for (const Edge& e : bundle.edges) {
      const bool in_m1 = m1.partner(e.u) == e.v;
      auto& mate = in_m1 ? m1_mate : other_mate;
      if (mate[e.u] != -1 || mate[e.v] != -1) shape_ok = false;
      mate[e.u] = e.v;
      mate[e.v] = e.u;
    }
    std::vector<Vertex> covered;
    int m1_edges = 0;
    for (const Edge& e : bundle.edges) {
      for (Vertex w : {e.u, e.v}) {
        if (m1_mate[w] == -1 || other_mate[w] == -1) shape_ok = false;
        // seen == 2 marks vertices of earlier bundles; a vertex legitimately
        // appears twice within its own bundle (one m1 and one non-m1 edge).
        if (seen[w] == 2) shape_ok = false;
        if (seen[w] == 0) {
          covered.push_back(w);
          seen[w] = 1;
        }
      }
      if (m1.partner(e.u) == e.v) ++m1_edges;
    }
    for (Vertex w : covered) seen[w] = 2;
    if (m1_edges != bundle.m1_edge_count) check.deltas_consistent = false;
    if (!shape_ok) {
      check.cycles_ok = false;
      continue;
    }
    // Component walk: every component must close and hold <= 5 sqrt(kn) m1 edges.
    std::vector<char> walked(g.order(), 0);
    for (Vertex start : covered) {
      if (walked[start]) continue;
      Vertex cur = start;
      bool via_m1 = true;
      long long comp_m1 = 0;
      do {
        walked[cur] = 1;
        cur = via_m1 ? m1_mate[cur] : other_mate[cur];
        if (via_m1) ++comp_m1;
        via_m1 = !via_m1;
        if (cur < 0) {
          check.cycles_ok = false;
          break;
        }
      } while (cur != start);
      if (cur != start || comp_m1 * comp_m1 > 25 * kn) check.cycles_ok = false;
    }
    // delta recomputation and the norm cap. Toggling swaps m1_edge_count
    // matched edges for the same number of non-m1 edges, so the deviation
    // change is at most 2 * m1_edge_count in l1 norm (the bundle's length).
    const std::vector<char> only(1, 1);
    const PerfectMatching toggled =
        toggle_bundles(m1, std::vector<CycleBundle>{bundle}, only);
    const ColorVector vt = color_vector(g, toggled, n);
    long long norm = 0;
    for (int c = 0; c < k; ++c) {
      if (vt.deviations[c] - v1.deviations[c] != bundle.delta[c]) check.deltas_consistent = false;
      norm += std::llabs(bundle.delta[c]);
    }
    if (norm > 2 * static_cast<long long>(bundle.m1_edge_count))
      check.deltas_consistent = false;
  }
  return check;
}

struct RoundResult {
  PerfectMatching matching;
  ColorVector cv;
  int attempts = 0;
  bool accepted = false;
  double deviation = 0.0;
  double threshold = 0.0;
};

/// Rounds the bundle set to a single matching between m1 and m2': each coin
/// keeps weight p on m1, so every bundle toggles independently with
/// probability 1-p and E[v(M)] = p v(m1) + (1-p) v(m2') exactly. Redraws
/// until the realized deviation from that target is at most
/// stage_deviation_bound(k, n), up to retry_cap attempts; the closest draw
/// is returned when the cap runs out.
inline RoundResult round_bundles(const ColoredCompleteGraph& g, const PerfectMatching& m1,
                                 const std::vector<CycleBundle>& bundles, const Rational& p,
                                 int n, Rng& rng, int retry_cap = kDefaultRetryCap) {
  if (p < 0 || p > 1) throw std::invalid_argument("round_bundles: p must lie in [0, 1]");
  if (retry_cap < 1) throw std::invalid_argument("round_bundles: retry_cap must be >= 1");
  const int k = g.num_colors();
  const ColorVector v1 = color_vector(g, m1, n);

  const Rational q = 1 - p;  // per-bundle toggle probability
  RationalVector target(k);
  for (int c = 0; c < k; ++c) {
    long long total = 0;
    for (const CycleBundle& b : bundles) total += b.delta[c];
    target[c] = Rational(v1.deviations[c]) + q * total;
  }
  const double threshold = stage_deviation_bound(k, n);

  // Coin: toggle iff draw/2^64 < q, decided exactly in integers.
  const BigInt num = numerator(q);
  const BigInt den_shifted = BigInt(denominator(q));
  const BigInt num_shifted = num << 64;

  std::optional<RoundResult> best;
  std::vector<char> selected(bundles.size(), 0);
  for (int attempt = 1; attempt <= retry_cap; ++attempt) {
    for (std::size_t b = 0; b < bundles.size(); ++b)
      selected[b] = BigInt(rng.next()) * den_shifted < num_shifted ? 1 : 0;
    ColorVector cv = v1;
    for (std::size_t b = 0; b < bundles.size(); ++b)
      if (selected[b])
        for (int c = 0; c < k; ++c) cv.deviations[c] += bundles[b].delta[c];
    Rational dev = 0;
    for (int c = 0; c < k; ++c) {
      Rational d = Rational(cv.deviations[c]) - target[c];
      dev += d < 0 ? -d : d;
    }
    const double dev_d = to_double(dev);
    if (dev_d <= threshold) {
      PerfectMatching m = toggle_bundles(m1, bundles, selected);
      return RoundResult{std::move(m), std::move(cv), attempt, true, dev_d, threshold};
    }
    if (!best || dev_d < best->deviation) {
      PerfectMatching m = toggle_bundles(m1, bundles, selected);
      best = RoundResult{std::move(m), std::move(cv), attempt, false, dev_d, threshold};
    }
  }
  best->attempts = retry_cap;
  return std::move(*best);
}

/// Convex combination of matchings whose deviation vectors average to the
/// origin, with exact rational weights.
struct ConvexCombination {
  std::vector<PerfectMatching> matchings;
  RationalVector weights;

  std::size_t support() const { return matchings.size(); }
};

inline void validate_combination(const ColoredCompleteGraph& g, int n,
                                 const ConvexCombination& cc) {
  if (cc.matchings.empty() || cc.matchings.size() != cc.weights.size())
    throw std::invalid_argument("combination: empty or mismatched matchings/weights");
  Rational total = 0;
  RationalVector sum(g.num_colors(), 0);
  for (std::size_t j = 0; j < cc.matchings.size(); ++j) {
    if (cc.weights[j] <= 0) throw std::invalid_argument("combination: weights must be positive");
    total += cc.weights[j];
    const ColorVector v = color_vector(g, cc.matchings[j], n);
    for (int c = 0; c < g.num_colors(); ++c) sum[c] += cc.weights[j] * v.deviations[c];
  }
  if (total != 1) throw std::invalid_argument("combination: weights must sum to 1");
  if (!is_zero(sum))
    throw std::invalid_argument("combination: weighted deviation sum is not the origin");
}

struct OriginCertificate {
  ConvexCombination combination;
  int samples_used = 0;
  bool found = false;
};

/// Searches for an exact convex combination of matchings hitting the origin.
/// Starts from the given matchings (any with v = 0 wins outright with
/// weight 1); while the LP over the pool is infeasible, extends the pool
/// with uniform samples in doubling batches of 64, 128, ... until
/// sample_budget draws have been spent. found = false means the hull
/// hypothesis could not be verified for this instance within budget.
inline OriginCertificate certify_origin(const ColoredCompleteGraph& g, int n,
                                        std::vector<PerfectMatching> initial, int sample_budget,
                                        Rng& rng) {
  if (sample_budget < 0) throw std::invalid_argument("certify_origin: negative budget");
  std::vector<PerfectMatching> pool = std::move(initial);
  std::vector<std::vector<int>> vs;
  vs.reserve(pool.size());
  for (const PerfectMatching& m : pool) vs.push_back(color_vector(g, m, n).deviations);

  OriginCertificate cert;
  auto zero_witness = [&](std::size_t j) {
    cert.combination = ConvexCombination{{pool[j]}, {Rational(1)}};
    cert.found = true;
    return cert;
  };
  for (std::size_t j = 0; j < pool.size(); ++j) {
    bool zero = true;
    for (int d : vs[j]) zero = zero && d == 0;
    if (zero) return zero_witness(j);
  }

  int batch = 64;
  for (;;) {
    if (!pool.empty()) {
      if (auto weights = zero_combination_weights(vs)) {
        ConvexCombination cc;
        for (std::size_t j = 0; j < pool.size(); ++j) {
          if ((*weights)[j] == 0) continue;
          cc.matchings.push_back(pool[j]);
          cc.weights.push_back((*weights)[j]);
        }
        validate_combination(g, n, cc);
        cert.combination = std::move(cc);
        cert.found = true;
        return cert;
      }
    }
    if (cert.samples_used >= sample_budget) return cert;
    const int take = std::min(batch, sample_budget - cert.samples_used);
    for (int i = 0; i < take; ++i) {
      pool.push_back(rpm_sample(g.order(), rng));
      vs.push_back(color_vector(g, pool.back(), n).deviations);
      ++cert.samples_used;
      bool zero = true;
      for (int d : vs.back()) zero = zero && d == 0;
      if (zero) return zero_witness(pool.size() - 1);
    }
    batch *= 2;
  }
}

namespace detail {

// Nonzero rational kernel vector of the (rows x cols) matrix, cols > rank.
inline RationalVector kernel_vector(std::vector<RationalVector> b, std::size_t cols) {
  const std::size_t rows = b.size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pr = r;
    while (pr < rows && b[pr][c] == 0) ++pr;
    if (pr == rows) continue;
    std::swap(b[r], b[pr]);
    const Rational lead = b[r][c];
    for (auto& x : b[r]) x /= lead;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || b[i][c] == 0) continue;
      const Rational factor = b[i][c];
      for (std::size_t j = 0; j < cols; ++j) b[i][j] -= factor * b[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<char> is_pivot(cols, 0);
  for (std::size_t c : pivot_col) is_pivot[c] = 1;
  std::size_t free_col = cols;
  for (std::size_t c = 0; c < cols; ++c) {
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  }
  if (free_col == cols) throw std::logic_error("kernel_vector: matrix has full column rank");
  RationalVector lambda(cols, 0);
  lambda[free_col] = 1;
  for (std::size_t i = 0; i < pivot_col.size(); ++i) lambda[pivot_col[i]] = -b[i][free_col];
  return lambda;
}

}  // namespace detail

/// Shrinks a certifying combination to support at most k+1 without moving
/// the weighted sum off the origin: repeatedly finds an affine dependency
/// among the (v, 1)-lifted points and walks along it until some weight hits
/// zero exactly.
inline ConvexCombination caratheodory_reduce(const ColoredCompleteGraph& g, int n,
                                             ConvexCombination cc) {
  validate_combination(g, n, cc);
  const int k = g.num_colors();
  std::vector<std::vector<int>> vs;
  vs.reserve(cc.matchings.size());
  for (const PerfectMatching& m : cc.matchings) vs.push_back(color_vector(g, m, n).deviations);

  while (cc.matchings.size() > static_cast<std::size_t>(k) + 1) {
    const std::size_t s = cc.matchings.size();
    std::vector<RationalVector> b(k + 1, RationalVector(s, 0));
    for (std::size_t j = 0; j < s; ++j) {
      for (int c = 0; c < k; ++c) b[c][j] = vs[j][c];
      b[k][j] = 1;
    }
    RationalVector lambda = detail::kernel_vector(std::move(b), s);
    bool has_positive = false;
    for (const Rational& l : lambda) has_positive = has_positive || l > 0;
    if (!has_positive)
      for (Rational& l : lambda) l = -l;

    std::size_t arg = s;
    Rational t = 0;
    for (std::size_t j = 0; j < s; ++j) {
      if (lambda[j] <= 0) continue;
      const Rational ratio = cc.weights[j] / lambda[j];
      if (arg == s || ratio < t) {
        arg = j;
        t = ratio;
      }
    }
    ConvexCombination next;
    std::vector<std::vector<int>> next_vs;
    for (std::size_t j = 0; j < s; ++j) {
      const Rational w = cc.weights[j] - t * lambda[j];
      if (w == 0) continue;
      if (w < 0) throw std::logic_error("caratheodory_reduce: negative weight after walk");
      next.matchings.push_back(std::move(cc.matchings[j]));
      next.weights.push_back(w);
      next_vs.push_back(std::move(vs[j]));
    }
    if (next.matchings.size() >= cc.matchings.size())
      throw std::logic_error("caratheodory_reduce: dependency walk removed nothing");
    cc = std::move(next);
    vs = std::move(next_vs);
  }
  validate_combination(g, n, cc);
  return cc;
}

struct StageRecord {
  int stage = 0;  // 1-based merge index
  Rational p;     // weight kept on the accumulated matching
  int bundle_count = 0;
  int attempts = 0;
  bool accepted = false;
  double deviation = 0.0;     // |v(M) - target|_1 realized by round_bundles
  double stage_change = 0.0;  // |x_{i+1} - x_i|_1
};

struct RoundingTrace {
  std::vector<RationalVector> stage_vectors;  // x_1, ..., x_s
  std::vector<StageRecord> stages;
  bool all_stages_accepted = true;
  bool below_guarantee_range = false;  // k < 4: outside the proven regime
  double stage_bound = 0.0;
  double final_bound = 0.0;
  int final_f = 0;
};

struct PipelineResult {
  PerfectMatching matching;
  RoundingTrace trace;
};

/// Collapses a certified convex combination into one nearly balanced
/// matching. Matchings merge pairwise: at stage i the accumulated matching
/// (total weight P) absorbs the next one (weight w) by splitting their
/// difference into bundles and rounding with p = P/(P+w). The trace records
/// the exact stage vectors x_i; every accepted stage moves x by at most
/// stage_deviation_bound, so the final imbalance telescopes to at most
/// pipeline_deviation_bound whenever all stages accept.
inline PipelineResult merge_rounding_pipeline(const ColoredCompleteGraph& g, int n,
                                              ConvexCombination cc, Rng& rng,
                                              int retry_cap = kDefaultRetryCap) {
  const int k = g.num_colors();
  validate_combination(g, n, cc);
  if (cc.support() > static_cast<std::size_t>(k) + 1) cc = caratheodory_reduce(g, n, cc);

  RoundingTrace trace;
  trace.below_guarantee_range = k < 4;
  trace.stage_bound = stage_deviation_bound(k, n);
  trace.final_bound = pipeline_deviation_bound(k, n);

  const std::size_t s = cc.support();
  std::vector<std::vector<int>> vs;
  vs.reserve(s);
  for (const PerfectMatching& m : cc.matchings) vs.push_back(color_vector(g, m, n).deviations);

  RationalVector x(k, 0);
  for (std::size_t j = 0; j < s; ++j)
    for (int c = 0; c < k; ++c) x[c] += cc.weights[j] * vs[j][c];
  trace.stage_vectors.push_back(x);  // x_1 = 0 for a valid certificate

  PerfectMatching cur = cc.matchings[0];
  Rational cum = cc.weights[0];
  for (std::size_t i = 1; i < s; ++i) {
    const Rational p = cum / (cum + cc.weights[i]);
    SplitResult split = split_and_group(g, cur, cc.matchings[i], n);
    RoundResult rr = round_bundles(g, cur, split.bundles, p, n, rng, retry_cap);
    cur = std::move(rr.matching);
    cum += cc.weights[i];

    RationalVector x_new(k, 0);
    for (int c = 0; c < k; ++c) x_new[c] = cum * rr.cv.deviations[c];
    for (std::size_t j = i + 1; j < s; ++j)
      for (int c = 0; c < k; ++c) x_new[c] += cc.weights[j] * vs[j][c];

    RationalVector diff(k);
    for (int c = 0; c < k; ++c) diff[c] = x_new[c] - x[c];
    StageRecord rec;
    rec.stage = static_cast<int>(i);
    rec.p = p;
    rec.bundle_count = static_cast<int>(split.bundles.size());
    rec.attempts = rr.attempts;
    rec.accepted = rr.accepted;
    rec.deviation = rr.deviation;
    rec.stage_change = to_double(l1_norm(diff));
    trace.stages.push_back(rec);
    trace.all_stages_accepted = trace.all_stages_accepted && rr.accepted;
    x = std::move(x_new);
    trace.stage_vectors.push_back(x);
  }
  trace.final_f = imbalance(g, cur, n);
  return PipelineResult{std::move(cur), std::move(trace)};
}

}  // namespace chromatch
