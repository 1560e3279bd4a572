#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chromatch {

using Vertex = int;
// Colors are 0-based everywhere in memory; files and reports use 1..k.
using Color = int;

// Largest supported graph order. Keeps the flat color table comfortably in
// memory and edge counts inside long long.
inline constexpr int kMaxOrder = 4096;

/// Unordered vertex pair, stored normalized with u < v.
struct Edge {
  Vertex u;
  Vertex v;

  Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {
    if (a == b) throw std::invalid_argument("Edge: endpoints must differ");
    if (a < 0 || b < 0) throw std::invalid_argument("Edge: negative vertex");
  }

  bool operator==(const Edge&) const = default;
};

inline long long edge_count(int order) {
  return static_cast<long long>(order) * (order - 1) / 2;
}

// Position of {u, v} in the flat lower-triangular layout; requires u < v.
// Enumerates edges as {0,1}, {0,2}, {1,2}, {0,3}, ... (row v, column u).
inline long long edge_index(Vertex u, Vertex v) {
  if (!(0 <= u && u < v)) throw std::invalid_argument("edge_index: requires 0 <= u < v");
  return static_cast<long long>(v) * (v - 1) / 2 + u;
}

inline long long edge_index(const Edge& e) { return edge_index(e.u, e.v); }

/// Complete graph K_N with an edge coloring in colors {0, .., k-1}.
/// Immutable after construction; all invariants are checked up front.
class ColoredCompleteGraph {
 public:
  ColoredCompleteGraph(int order, int num_colors, std::vector<Color> edge_colors)
      : order_(order), num_colors_(num_colors), edge_colors_(std::move(edge_colors)) {
    if (order_ < 2 || order_ % 2 != 0)
      throw std::invalid_argument("ColoredCompleteGraph: order must be even and >= 2");
    if (order_ > kMaxOrder)
      throw std::invalid_argument("ColoredCompleteGraph: order exceeds supported maximum " +
                                  std::to_string(kMaxOrder));
    if (num_colors_ < 1)
      throw std::invalid_argument("ColoredCompleteGraph: need at least one color");
    const long long edges = edge_count(order_);
    if (static_cast<long long>(edge_colors_.size()) != edges)
      throw std::invalid_argument("ColoredCompleteGraph: expected " + std::to_string(edges) +
                                  " edge colors, got " + std::to_string(edge_colors_.size()));
    color_counts_.assign(num_colors_, 0);
    for (Color c : edge_colors_) {
      if (c < 0 || c >= num_colors_)
        throw std::invalid_argument("ColoredCompleteGraph: color out of range");
      ++color_counts_[c];
    }
  }

  int order() const { return order_; }
  int num_colors() const { return num_colors_; }

  Color edge_color(Vertex u, Vertex v) const {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("edge_color: no self-loops in K_N");
    if (u > v) std::swap(u, v);
    return edge_colors_[edge_index(u, v)];
  }

  Color edge_color(const Edge& e) const { return edge_color(e.u, e.v); }

  // Edge colors in edge-index order; this is the serialization order.
  const std::vector<Color>& colors() const { return edge_colors_; }

  const std::vector<long long>& color_counts() const { return color_counts_; }

  // A coloring is balanced when every color class has the same size. For
  // N = 2kn that common size is n(2kn - 1).
  bool is_balanced() const {
    for (long long c : color_counts_)
      if (c != color_counts_[0]) return false;
    return edge_count(order_) % num_colors_ == 0;
  }

 private:
  void check_vertex(Vertex w) const {
    if (w < 0 || w >= order_) throw std::invalid_argument("vertex out of range");
  }

  int order_;
  int num_colors_;
  std::vector<Color> edge_colors_;
  std::vector<long long> color_counts_;
};

// The per-color target n with order = 2kn. Errors when the order is not a
// multiple of 2k, since deviation vectors are undefined in that case.
inline int per_color_target(const ColoredCompleteGraph& g) {
  const int denom = 2 * g.num_colors();
  if (g.order() % denom != 0)
    throw std::invalid_argument("per_color_target: order is not a multiple of 2k");
  return g.order() / denom;
}

}  // namespace chromatch
