#include "tpgm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "tpgm/affinity.hpp"
#include "tpgm/error.hpp"

namespace tpgm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Each trial gets its own stream keyed by (seed, trial).
std::mt19937_64 trial_engine(std::uint64_t seed, std::size_t trial) {
  const std::uint64_t key = splitmix64(splitmix64(seed) ^ splitmix64(0x5eed0000ULL + trial));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

void SyntheticConfig::validate() const {
  if (n_inlier < 1) fail(ErrorKind::invalid_argument, "n_inlier must be >= 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) fail(ErrorKind::invalid_argument, "sigma must be >= 0");
  if (!(rho >= 0.0 && rho <= 1.0)) fail(ErrorKind::invalid_argument, "rho must lie in [0, 1]");
}

SyntheticPair gen_synthetic_pair(const SyntheticConfig& cfg, std::size_t trial) {
  cfg.validate();
  auto rng = trial_engine(cfg.seed, trial);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto noise = [&] { return cfg.sigma * gauss(rng); };

  const std::size_t n = cfg.n_inlier + cfg.n_outlier;
  std::vector<NodeAttr> nodes1(n), nodes2(n);
  for (std::size_t v = 0; v < n; ++v) {
    const double a = unit(rng);
    nodes1[v] = Vector{a};
    nodes2[v] = Vector{v < cfg.n_inlier ? a + noise() : unit(rng)};
  }

  std::vector<Arc> arcs1, arcs2;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t d = 0; d < n; ++d) {
      if (s == d) continue;
      if (s < cfg.n_inlier && d < cfg.n_inlier) {
        if (unit(rng) >= cfg.rho) continue;
        const double b = unit(rng);
        arcs1.push_back({s, d, {b}});
        arcs2.push_back({s, d, {b + noise()}});
        continue;
      }
      if (unit(rng) < cfg.rho) arcs1.push_back({s, d, {unit(rng)}});
      if (unit(rng) < cfg.rho) arcs2.push_back({s, d, {unit(rng)}});
    }
  }

  // Hide the correspondence behind a random relabeling of the target.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<NodeAttr> shuffled(n);
  for (std::size_t v = 0; v < n; ++v) shuffled[perm[v]] = std::move(nodes2[v]);
  for (auto& a : arcs2) {
    a.src = perm[a.src];
    a.dst = perm[a.dst];
  }

  SyntheticPair out{AttributedGraph(std::move(nodes1), std::move(arcs1), true),
                    AttributedGraph(std::move(shuffled), std::move(arcs2), true), Assignment(n, n)};
  for (std::size_t v = 0; v < cfg.n_inlier; ++v) out.ground_truth.set(v, perm[v]);
  return out;
}

double accuracy(const Assignment& assignment, const Assignment& ground_truth) {
  if (ground_truth.empty()) fail(ErrorKind::invalid_argument, "accuracy: empty ground truth");
  if (assignment.n1() != ground_truth.n1() || assignment.n2() != ground_truth.n2())
    fail(ErrorKind::dimension, "accuracy: assignment and ground truth shapes differ");
  std::size_t hits = 0;
  for (const auto& [i, j] : ground_truth.pairs())
    if (assignment.contains(i, j)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(ground_truth.size());
}

double objective_score(const SparseMatrix& k, const Assignment& assignment) {
  return qap_objective(k, assignment);
}

std::vector<double> normalize_scores(std::span<const double> raw, std::optional<double> reference) {
  double denom = 0.0;
  if (reference) {
    denom = *reference;
  } else {
    for (double v : raw) denom = std::max(denom, v);
  }
  std::vector<double> out(raw.begin(), raw.end());
  for (double& v : out) v = denom > 0.0 ? v / denom : 0.0;
  return out;
}

TrialOutcome run_trial(const SyntheticConfig& cfg, std::size_t trial, std::span<const WalkModel> methods,
                       const MatchConfig& base) {
  const auto pair = gen_synthetic_pair(cfg, trial);
  const auto k = build_affinity_matrix(pair.g1, pair.g2, base.affinity);

  TrialOutcome out;
  out.trial = trial;
  out.ground_truth = pair.ground_truth;
  out.truth_objective = objective_score(k, pair.ground_truth);

  std::vector<double> raw;
  for (WalkModel m : methods) {
    MatchConfig mc = base;
    mc.model = m;
    mc.discretize = true;
    const auto r = match(pair.g1, pair.g2, mc);
    MethodOutcome mo;
    mo.method = m;
    mo.assignment = *r.assignment;
    mo.accuracy = accuracy(mo.assignment, pair.ground_truth);
    mo.raw_objective = objective_score(k, mo.assignment);
    mo.time_ms = r.timings.total_ms;
    raw.push_back(mo.raw_objective);
    out.methods.push_back(std::move(mo));
  }
  const auto norm = normalize_scores(raw, out.truth_objective);
  for (std::size_t i = 0; i < norm.size(); ++i) out.methods[i].norm_objective = norm[i];
  return out;
}

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::n_outlier: return "n_outlier";
    case SweepParam::sigma: return "sigma";
    case SweepParam::rho: return "rho";
  }
  return "?";
}

SweepParam parse_sweep_param(std::string_view name) {
  for (auto p : {SweepParam::n_outlier, SweepParam::sigma, SweepParam::rho})
    if (to_string(p) == name) return p;
  fail(ErrorKind::parse, "unknown sweep parameter '" + std::string(name) + "' (n_outlier, sigma, rho)");
}

SyntheticConfig apply_sweep_value(SyntheticConfig cfg, SweepParam param, double value) {
  switch (param) {
    case SweepParam::n_outlier:
      if (!(value >= 0.0) || value != std::floor(value))
        fail(ErrorKind::invalid_argument, "n_outlier values must be non-negative integers");
      cfg.n_outlier = static_cast<std::size_t>(value);
      break;
    case SweepParam::sigma: cfg.sigma = value; break;
    case SweepParam::rho: cfg.rho = value; break;
  }
  cfg.validate();
  return cfg;
}

std::vector<SweepRow> run_sweep(const SyntheticConfig& base, const SweepSpec& sweep,
                                std::span<const WalkModel> methods, const MatchConfig& match_cfg,
                                const SweepOptions& opts) {
  std::vector<SyntheticConfig> configs;
  for (double v : sweep.values) configs.push_back(apply_sweep_value(base, sweep.param, v));
  const std::size_t trials = base.trials;
  const std::size_t tasks = configs.size() * trials;

  std::vector<std::optional<TrialOutcome>> results(tasks);
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks || failed.load()) return;
      try {
        results[t] = run_trial(configs[t / trials], t % trials, methods, match_cfg);
      } catch (...) {
        errors[t] = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::size_t jobs = opts.jobs ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(1, tasks));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t t = 0; t < tasks; ++t) {
    if (!errors[t]) continue;
    const std::string where = std::string(to_string(sweep.param)) + "=" + std::to_string(sweep.values[t / trials]) +
                              ", trial " + std::to_string(t % trials);
    try {
      std::rethrow_exception(errors[t]);
    } catch (const Error& e) {
      throw Error(e.kind(), where + ": " + e.what(), e.stage());
    } catch (const std::exception& e) {
      throw Error(ErrorKind::internal, where + ": " + e.what());
    }
  }

  std::vector<SweepRow> rows;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (std::size_t m = 0; m < methods.size(); ++m) {
      SweepRow row;
      row.param = sweep.param;
      row.value = sweep.values[c];
      row.method = methods[m];
      row.trials = trials;
      for (std::size_t t = 0; t < trials; ++t) {
        const auto& mo = results[c * trials + t]->methods[m];
        row.mean_accuracy += mo.accuracy;
        row.mean_norm_objective += mo.norm_objective;
        row.mean_time_ms += mo.time_ms;
      }
      if (trials > 0) {
        const auto n = static_cast<double>(trials);
        row.mean_accuracy /= n;
        row.mean_norm_objective /= n;
        row.mean_time_ms /= n;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string to_csv(std::span<const SweepRow> rows, bool timings) {
  std::string out = "sweep_param,sweep_value,method,mean_accuracy,mean_norm_objective,mean_time_ms,trials\n";
  char buf[256];
  for (const auto& r : rows) {
    char time_field[64] = "";
    if (timings) std::snprintf(time_field, sizeof time_field, "%.3f", r.mean_time_ms);
    std::snprintf(buf, sizeof buf, "%s,%.10g,%s,%.6f,%.6f,%s,%zu\n", std::string(to_string(r.param)).c_str(),
                  r.value, std::string(to_string(r.method)).c_str(), r.mean_accuracy, r.mean_norm_objective,
                  time_field, r.trials);
    out += buf;
  }
  return out;
}

}  // namespace tpgm
