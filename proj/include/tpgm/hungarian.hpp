#pragma once

#include <cstddef>
#include <span>

#include "tpgm/assignment.hpp"

namespace tpgm {

struct HungarianResult {
  Assignment assignment;
  /// Sum of the selected entries, added in increasing row order.
  double score = 0.0;
};

/// Maximum-weight assignment on a row-major n1 x n2 score matrix. Matches
/// min(n1, n2) pairs. Ties resolve deterministically by scan order.
HungarianResult hungarian_max(std::span<const double> scores, std::size_t n1, std::size_t n2);

}  // namespace tpgm
