#pragma once

#include <string>
#include <vector>

#include "tpgm/product_graph.hpp"

namespace tpgm {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestOptions {
  /// Lambda rule used wherever a check builds a product graph. Tests swap in
  /// a wrong rule to make sure the suite notices.
  LambdaRule lambda_rule = &default_lambda_rule;
};

/// Small embedded oracle suite. Never throws; an exception inside a check
/// counts as a failure of that check.
std::vector<CheckResult> run_selftest(const SelftestOptions& opts = {});

/// A deliberately wrong lambda rule (1 / (1 + max degree)).
double mutated_lambda_rule(std::size_t max_out_degree, std::size_t max_in_degree);

}  // namespace tpgm
