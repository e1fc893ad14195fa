#include "tpgm/hungarian.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tpgm/error.hpp"

namespace tpgm {

HungarianResult hungarian_max(std::span<const double> scores, std::size_t n1, std::size_t n2) {
  if (scores.size() != n1 * n2)
    fail(ErrorKind::dimension, "hungarian_max: expected " + std::to_string(n1 * n2) + " scores, got " +
                                   std::to_string(scores.size()));
  for (double v : scores)
    if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, "hungarian_max: non-finite score");

  HungarianResult res{Assignment(n1, n2), 0.0};
  if (n1 == 0 || n2 == 0) return res;

  // Shortest augmenting path with potentials on a cost matrix with rows <= cols
  // (1-based, column 0 is the virtual start). Transpose when n1 > n2.
  const bool transpose = n1 > n2;
  const std::size_t rows = transpose ? n2 : n1;
  const std::size_t cols = transpose ? n1 : n2;
  auto cost = [&](std::size_t i, std::size_t j) {  // 1-based
    const double s = transpose ? scores[(j - 1) * n2 + (i - 1)] : scores[(i - 1) * n2 + (j - 1)];
    return -s;
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<std::size_t> match(cols + 1, 0), way(cols + 1, 0);
  std::vector<double> minv(cols + 1);
  std::vector<char> used(cols + 1);
  for (std::size_t i = 1; i <= rows; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> target(n1, 0);
  std::vector<char> has(n1, 0);
  for (std::size_t j = 1; j <= cols; ++j) {
    if (match[j] == 0) continue;
    const std::size_t r = match[j] - 1;
    const std::size_t c = j - 1;
    const std::size_t i = transpose ? c : r;
    target[i] = transpose ? r : c;
    has[i] = 1;
  }
  for (std::size_t i = 0; i < n1; ++i) {
    if (!has[i]) continue;
    res.assignment.set(i, target[i]);
    res.score += scores[i * n2 + target[i]];
  }
  return res;
}

}  // namespace tpgm
