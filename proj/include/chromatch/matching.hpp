#pragma once

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chromatch/graph.hpp"

namespace chromatch {

/// Perfect matching of K_N, stored as a partner array: partner[u] is the
/// vertex matched to u. Validated on construction (fixed-point-free
/// involution over all vertices) and immutable afterwards.
class PerfectMatching {
 public:
  explicit PerfectMatching(std::vector<Vertex> partner) : partner_(std::move(partner)) {
    const int n = static_cast<int>(partner_.size());
    if (n < 2 || n % 2 != 0)
      throw std::invalid_argument("PerfectMatching: order must be even and >= 2");
    for (Vertex u = 0; u < n; ++u) {
      const Vertex v = partner_[u];
      if (v < 0 || v >= n) throw std::invalid_argument("PerfectMatching: partner out of range");
      if (v == u) throw std::invalid_argument("PerfectMatching: vertex matched to itself");
      if (partner_[v] != u) throw std::invalid_argument("PerfectMatching: partners disagree");
    }
  }

  static PerfectMatching from_pairs(int order, const std::vector<Edge>& pairs) {
    std::vector<Vertex> partner(order, -1);
    for (const Edge& e : pairs) {
      if (e.v >= order) throw std::invalid_argument("from_pairs: vertex out of range");
      if (partner[e.u] != -1 || partner[e.v] != -1)
        throw std::invalid_argument("from_pairs: vertex covered twice");
      partner[e.u] = e.v;
      partner[e.v] = e.u;
    }
    for (Vertex u = 0; u < order; ++u)
      if (partner[u] == -1) throw std::invalid_argument("from_pairs: vertex left unmatched");
    return PerfectMatching(std::move(partner));
  }

  int order() const { return static_cast<int>(partner_.size()); }

  Vertex partner(Vertex u) const {
    if (u < 0 || u >= order()) throw std::invalid_argument("partner: vertex out of range");
    return partner_[u];
  }

  bool contains(const Edge& e) const {
    return e.v < order() && partner_[e.u] == e.v;
  }

  // The N/2 edges, listed with ascending lower endpoint.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(partner_.size() / 2);
    for (Vertex u = 0; u < order(); ++u)
      if (partner_[u] > u) out.emplace_back(u, partner_[u]);
    return out;
  }

  const std::vector<Vertex>& partners() const { return partner_; }

  bool operator==(const PerfectMatching&) const = default;

 private:
  std::vector<Vertex> partner_;
};

/// Per-color deviation vector of a matching: deviations[i] = m_i(M) - n,
/// where m_i counts edges of color i. Entries always sum to zero, and the
/// imbalance f(M) = norm1() is even.
struct ColorVector {
  std::vector<int> deviations;

  int norm1() const {
    int s = 0;
    for (int d : deviations) s += std::abs(d);
    return s;
  }

  bool is_zero() const {
    for (int d : deviations)
      if (d != 0) return false;
    return true;
  }

  bool operator==(const ColorVector&) const = default;
};

inline ColorVector color_vector(const ColoredCompleteGraph& g, const PerfectMatching& m, int n) {
  if (m.order() != g.order())
    throw std::invalid_argument("color_vector: matching order differs from graph order");
  if (g.order() != 2 * g.num_colors() * n)
    throw std::invalid_argument("color_vector: order != 2kn for the given n");
  ColorVector cv{std::vector<int>(g.num_colors(), -n)};
  for (Vertex u = 0; u < g.order(); ++u) {
    const Vertex v = m.partner(u);
    if (v > u) ++cv.deviations[g.edge_color(u, v)];
  }
  return cv;
}

inline int imbalance(const ColoredCompleteGraph& g, const PerfectMatching& m, int n) {
  return color_vector(g, m, n).norm1();
}

/// The two ways to rewire two matching edges {u,v}, {x,y} (u<v, x<y) into
/// two new parallel edges: straight keeps low-with-low ({u,x}, {v,y}),
/// crossed pairs low-with-high ({u,y}, {v,x}).
enum class SwapMode { kStraight, kCrossed };

inline std::pair<Edge, Edge> swap_replacement(const Edge& e1, const Edge& e2, SwapMode mode) {
  if (mode == SwapMode::kStraight) return {Edge(e1.u, e2.u), Edge(e1.v, e2.v)};
  return {Edge(e1.u, e2.v), Edge(e1.v, e2.u)};
}

inline PerfectMatching apply_swap(const PerfectMatching& m, const Edge& e1, const Edge& e2,
                                  SwapMode mode) {
  if (!m.contains(e1) || !m.contains(e2))
    throw std::invalid_argument("apply_swap: edge not in matching");
  if (e1 == e2) throw std::invalid_argument("apply_swap: edges must be distinct");
  std::vector<Vertex> partner = m.partners();
  const auto [a, b] = swap_replacement(e1, e2, mode);
  partner[a.u] = a.v;
  partner[a.v] = a.u;
  partner[b.u] = b.v;
  partner[b.v] = b.u;
  return PerfectMatching(std::move(partner));
}

namespace detail {

// Net color-count changes of a swap: -1 for each removed edge, +1 for each
// added edge, combined per color. At most four colors are touched.
struct SwapColorDelta {
  int colors[4];
  int net[4];
  int count;
};

inline SwapColorDelta swap_color_delta(const ColoredCompleteGraph& g, const Edge& e1,
                                       const Edge& e2, SwapMode mode) {
  const auto [a, b] = swap_replacement(e1, e2, mode);
  const int cols[4] = {g.edge_color(e1), g.edge_color(e2), g.edge_color(a), g.edge_color(b)};
  const int sign[4] = {-1, -1, +1, +1};
  SwapColorDelta d{{0, 0, 0, 0}, {0, 0, 0, 0}, 0};
  for (int i = 0; i < 4; ++i) {
    bool merged = false;
    for (int j = 0; j < d.count; ++j) {
      if (d.colors[j] == cols[i]) {
        d.net[j] += sign[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      d.colors[d.count] = cols[i];
      d.net[d.count] = sign[i];
      ++d.count;
    }
  }
  return d;
}

}  // namespace detail

// Change in imbalance if the swap were applied, computed in O(1) from the
// current deviation vector.
inline int swap_delta(const ColoredCompleteGraph& g, const ColorVector& cv, const Edge& e1,
                      const Edge& e2, SwapMode mode) {
  const auto d = detail::swap_color_delta(g, e1, e2, mode);
  int delta = 0;
  for (int j = 0; j < d.count; ++j) {
    const int dev = cv.deviations[d.colors[j]];
    delta += std::abs(dev + d.net[j]) - std::abs(dev);
  }
  return delta;
}

inline int swap_delta(const ColoredCompleteGraph& g, const PerfectMatching& m, const Edge& e1,
                      const Edge& e2, SwapMode mode, int n) {
  if (!m.contains(e1) || !m.contains(e2))
    throw std::invalid_argument("swap_delta: edge not in matching");
  return swap_delta(g, color_vector(g, m, n), e1, e2, mode);
}

// In-place deviation update matching swap_delta.
inline void apply_swap_to_vector(const ColoredCompleteGraph& g, ColorVector& cv, const Edge& e1,
                                 const Edge& e2, SwapMode mode) {
  const auto d = detail::swap_color_delta(g, e1, e2, mode);
  for (int j = 0; j < d.count; ++j) cv.deviations[d.colors[j]] += d.net[j];
}

}  // namespace chromatch
