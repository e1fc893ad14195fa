#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tpgm/assignment.hpp"
#include "tpgm/graph.hpp"
#include "tpgm/matcher.hpp"

namespace tpgm {

/// Random pattern/target pairs: n_inlier shared nodes plus n_outlier unrelated
/// nodes in each graph, scalar U(0,1) labels, N(0, sigma^2) label noise on the
/// target's inliers, and arcs per ordered node pair with probability rho.
struct SyntheticConfig {
  std::size_t n_inlier = 20;
  std::size_t n_outlier = 0;
  double sigma = 0.0;
  double rho = 1.0;
  std::uint64_t seed = 0;
  std::size_t trials = 1;

  void validate() const;
};

struct SyntheticPair {
  AttributedGraph g1;
  AttributedGraph g2;
  /// Pattern inlier i -> its (shuffled) position in the target.
  Assignment ground_truth;
};

/// Deterministic in (cfg, trial); independent of any other trial.
SyntheticPair gen_synthetic_pair(const SyntheticConfig& cfg, std::size_t trial);

/// Fraction of ground-truth pairs reproduced by `assignment`.
double accuracy(const Assignment& assignment, const Assignment& ground_truth);

/// Raw QAP objective of an assignment.
double objective_score(const SparseMatrix& k, const Assignment& assignment);

/// Divides by `reference` (the ground-truth objective) when given, otherwise
/// by the largest score in the batch. A zero divisor leaves zeros.
std::vector<double> normalize_scores(std::span<const double> raw, std::optional<double> reference = std::nullopt);

struct MethodOutcome {
  WalkModel method = WalkModel::pairwise;
  Assignment assignment;
  double accuracy = 0.0;
  double raw_objective = 0.0;
  double norm_objective = 0.0;
  double time_ms = 0.0;
};

struct TrialOutcome {
  std::size_t trial = 0;
  Assignment ground_truth;
  double truth_objective = 0.0;
  std::vector<MethodOutcome> methods;
};

/// Generates trial `trial` and matches it with every method. `base` supplies
/// the affinity and solver settings; its model field is overridden.
TrialOutcome run_trial(const SyntheticConfig& cfg, std::size_t trial, std::span<const WalkModel> methods,
                       const MatchConfig& base = {});

enum class SweepParam { n_outlier, sigma, rho };

std::string_view to_string(SweepParam p);
SweepParam parse_sweep_param(std::string_view name);

/// The base config with one parameter replaced.
SyntheticConfig apply_sweep_value(SyntheticConfig cfg, SweepParam param, double value);

struct SweepSpec {
  SweepParam param = SweepParam::n_outlier;
  std::vector<double> values;
};

struct SweepRow {
  SweepParam param = SweepParam::n_outlier;
  double value = 0.0;
  WalkModel method = WalkModel::pairwise;
  double mean_accuracy = 0.0;
  double mean_norm_objective = 0.0;
  double mean_time_ms = 0.0;
  std::size_t trials = 0;
};

struct SweepOptions {
  /// Worker threads; 0 means one per hardware thread.
  std::size_t jobs = 1;
};

/// One row per (sweep value, method), in sweep order then method order.
/// The first failing trial (in (value, trial) order) aborts the sweep.
std::vector<SweepRow> run_sweep(const SyntheticConfig& base, const SweepSpec& sweep,
                                std::span<const WalkModel> methods, const MatchConfig& match_cfg = {},
                                const SweepOptions& opts = {});

/// CSV with header
/// sweep_param,sweep_value,method,mean_accuracy,mean_norm_objective,mean_time_ms,trials.
/// Without `timings` the time column is left empty so output is reproducible.
std::string to_csv(std::span<const SweepRow> rows, bool timings);

}  // namespace tpgm
