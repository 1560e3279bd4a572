#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "chromatch/rational.hpp"

namespace chromatch {

/// Finds nonnegative rational weights w with sum(w) = 1 and
/// sum_j w_j * points[j] = 0, or nothing if the origin lies outside the
/// convex hull of the points. Phase-1 simplex over exact rationals with
/// Bland's rule, so it terminates and never misreports feasibility. Any
/// returned solution is basic, hence supported on at most dim+1 points.
inline std::optional<RationalVector> zero_combination_weights(
    const std::vector<std::vector<int>>& points) {
  if (points.empty()) return std::nullopt;
  const std::size_t dim = points[0].size();
  for (const auto& p : points)
    if (p.size() != dim) throw std::invalid_argument("zero_combination_weights: ragged points");

  const std::size_t rows = dim + 1;  // coordinates plus the sum-to-one row
  const std::size_t cols = points.size();
  const std::size_t width = cols + rows + 1;  // originals, artificials, rhs

  // b = (0,...,0,1) >= 0, so artificials give an immediate feasible basis.
  std::vector<RationalVector> t(rows, RationalVector(width, 0));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < cols; ++j) t[i][j] = points[j][i];
  for (std::size_t j = 0; j < cols; ++j) t[dim][j] = 1;
  for (std::size_t i = 0; i < rows; ++i) t[i][cols + i] = 1;
  t[dim][width - 1] = 1;

  // Reduced-cost row for minimizing the sum of artificials.
  RationalVector obj(width, 0);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) obj[j] -= t[i][j];
  obj[width - 1] = -1;  // negated objective value; feasible iff it reaches 0

  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) basis[i] = cols + i;

  for (;;) {
    std::size_t enter = width - 1;
    for (std::size_t j = 0; j < cols + rows; ++j) {
      if (obj[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width - 1) break;

    std::size_t leave = rows;
    Rational best_ratio = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (t[i][enter] <= 0) continue;
      const Rational ratio = t[i][width - 1] / t[i][enter];
      if (leave == rows || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == rows)
      throw std::logic_error("zero_combination_weights: unbounded phase-1 objective");

    const Rational pivot = t[leave][enter];
    for (auto& x : t[leave]) x /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const Rational factor = t[i][enter];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= factor * t[leave][j];
    }
    if (obj[enter] != 0) {
      const Rational factor = obj[enter];
      for (std::size_t j = 0; j < width; ++j) obj[j] -= factor * t[leave][j];
    }
    basis[leave] = enter;
  }

  if (obj[width - 1] != 0) return std::nullopt;

  RationalVector weights(cols, 0);
  for (std::size_t i = 0; i < rows; ++i)
    if (basis[i] < cols) weights[basis[i]] = t[i][width - 1];

  // Exact sanity: nonnegative, sums to one, hits the origin.
  Rational total = 0;
  RationalVector combo(dim, 0);
  for (std::size_t j = 0; j < cols; ++j) {
    if (weights[j] < 0) throw std::logic_error("zero_combination_weights: negative weight");
    total += weights[j];
    for (std::size_t i = 0; i < dim; ++i) combo[i] += weights[j] * points[j][i];
  }
  if (total != 1 || !is_zero(combo))
    throw std::logic_error("zero_combination_weights: solution failed exact recheck");
  return weights;
}

}  // namespace chromatch
