// tpgmatch: match two graph files, run synthetic sweeps, or run the self test.
//
// Exit codes: 0 ok, 1 self test failure, 2 bad input, 3 solver failure,
// 4 product graph size cap exceeded.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "tpgm/bench.hpp"
#include "tpgm/error.hpp"
#include "tpgm/io.hpp"
#include "tpgm/matcher.hpp"
#include "tpgm/selftest.hpp"

namespace {

using namespace tpgm;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::parse:
    case ErrorKind::invalid_argument:
    case ErrorKind::dimension: return 2;
    case ErrorKind::size_cap: return 4;
    case ErrorKind::solver:
    case ErrorKind::internal: return 3;
  }
  return 3;
}

int report(const Error& e, int code) {
  std::cerr << "tpgmatch: ";
  if (!e.stage().empty()) std::cerr << "stage '" << e.stage() << "': ";
  std::cerr << to_string(e.kind()) << ": " << e.what() << "\n";
  return code;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(path, text);
  }
}

std::string flag_name(const std::string& key) {
  std::string f = "--";
  for (char c : key) f += c == '_' ? '-' : c;
  return f;
}

// Config flags shared by match and sweep: one string option per config key,
// applied after the config file and the environment.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  bool no_discretize = false;

  void attach(CLI::App* app, bool with_discretize) {
    app->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    for (const auto& key : config_keys()) {
      if (key == "discretize") continue;
      app->add_option(flag_name(key), values[key], "Overrides config key " + key);
    }
    if (with_discretize) app->add_flag("--no-discretize", no_discretize, "Skip the Hungarian step");
  }

  MatchConfig resolve(CLI::App* app) const {
    MatchConfig cfg;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    apply_env_overrides(cfg);
    for (const auto& [key, value] : values)
      if (app->count(flag_name(key)) > 0) apply_config_value(cfg, key, value);
    if (no_discretize) cfg.discretize = false;
    validate(cfg);
    return cfg;
  }
};

int cmd_match(CLI::App* app, const ConfigFlags& flags, const std::string& pattern, const std::string& target,
              const std::string& out, bool timings) {
  MatchConfig cfg;
  AttributedGraph g1, g2;
  try {
    cfg = flags.resolve(app);
    g1 = read_graph_file(pattern);
    g2 = read_graph_file(target);
  } catch (const Error& e) {
    return report(e, 2);
  }
  try {
    const auto r = match(g1, g2, cfg);
    emit(out, result_to_json(r, timings));
  } catch (const Error& e) {
    return report(e, exit_code(e.kind()));
  }
  return 0;
}

struct SweepFlags {
  std::string sweep;
  std::vector<double> values;
  SyntheticConfig synth;
  std::vector<std::string> methods{"PG-N", "PG-R", "PG-B"};
  std::string out;
  std::size_t jobs = 0;
  bool timings = false;
};

int cmd_sweep(CLI::App* app, const ConfigFlags& flags, const SweepFlags& s) {
  MatchConfig cfg;
  SweepSpec spec;
  std::vector<WalkModel> methods;
  try {
    cfg = flags.resolve(app);
    spec.param = parse_sweep_param(s.sweep);
    spec.values = s.values;
    for (const auto& m : s.methods) methods.push_back(parse_walk_model(m));
    s.synth.validate();
    for (double v : spec.values) apply_sweep_value(s.synth, spec.param, v);
  } catch (const Error& e) {
    return report(e, 2);
  }
  try {
    SweepOptions opts;
    opts.jobs = s.jobs;
    const auto rows = run_sweep(s.synth, spec, methods, cfg, opts);
    emit(s.out, to_csv(rows, s.timings));
  } catch (const Error& e) {
    return report(e, e.kind() == ErrorKind::size_cap ? 4 : 3);
  }
  return 0;
}

int cmd_selftest(bool mutate_lambda) {
  SelftestOptions opts;
  if (mutate_lambda) opts.lambda_rule = &mutated_lambda_rule;
  const auto results = run_selftest(opts);
  std::size_t failed = 0;
  for (const auto& r : results) {
    std::printf("%s %-36s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    if (!r.passed) ++failed;
  }
  std::printf("%zu/%zu checks passed\n", results.size() - failed, results.size());
  if (failed) {
    for (const auto& r : results)
      if (!r.passed) std::fprintf(stderr, "tpgmatch: selftest check '%s' failed\n", r.name.c_str());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph matching with contextual similarities on the tensor product graph"};
  app.require_subcommand(1);

  auto* match_cmd = app.add_subcommand("match", "Match a pattern graph against a target graph");
  std::string pattern, target, match_out;
  bool match_timings = false;
  ConfigFlags match_flags;
  match_cmd->add_option("--pattern", pattern, "Pattern graph (JSON)")->required();
  match_cmd->add_option("--target", target, "Target graph (JSON)")->required();
  match_cmd->add_option("--out", match_out, "Result file; stdout when omitted");
  match_cmd->add_flag("--timings", match_timings, "Include per-stage wall times");
  match_flags.attach(match_cmd, true);

  auto* sweep_cmd = app.add_subcommand("sweep", "Synthetic benchmark sweep, CSV output");
  SweepFlags sf;
  ConfigFlags sweep_flags;
  sweep_cmd->add_option("--sweep", sf.sweep, "n_outlier, sigma or rho")->required();
  sweep_cmd->add_option("--values", sf.values, "Comma-separated sweep values")->required()->delimiter(',');
  sweep_cmd->add_option("--trials", sf.synth.trials, "Trials per sweep value")->capture_default_str();
  sweep_cmd->add_option("--seed", sf.synth.seed, "Base seed")->capture_default_str();
  sweep_cmd->add_option("--n-inlier", sf.synth.n_inlier, "Inlier nodes per graph")->capture_default_str();
  sweep_cmd->add_option("--n-outlier", sf.synth.n_outlier, "Outlier nodes per graph")->capture_default_str();
  sweep_cmd->add_option("--sigma", sf.synth.sigma, "Label noise std")->capture_default_str();
  sweep_cmd->add_option("--rho", sf.synth.rho, "Edge density")->capture_default_str();
  sweep_cmd->add_option("--methods", sf.methods, "Comma-separated methods")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--out", sf.out, "CSV file; stdout when omitted");
  sweep_cmd->add_option("--jobs", sf.jobs, "Worker threads (default: number of logical processors)");
  sweep_cmd->add_flag("--timings", sf.timings, "Fill the mean_time_ms column");
  sweep_flags.attach(sweep_cmd, false);

  auto* self_cmd = app.add_subcommand("selftest", "Run the embedded oracle checks");
  bool mutate_lambda = false;
  self_cmd->add_flag("--mutate-lambda", mutate_lambda)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (sf.jobs == 0) sf.jobs = std::max(1u, std::thread::hardware_concurrency());
  try {
    if (*match_cmd) return cmd_match(match_cmd, match_flags, pattern, target, match_out, match_timings);
    if (*sweep_cmd) return cmd_sweep(sweep_cmd, sweep_flags, sf);
    return cmd_selftest(mutate_lambda);
  } catch (const Error& e) {
    return report(e, exit_code(e.kind()));
  } catch (const std::exception& e) {
    std::cerr << "tpgmatch: " << e.what() << "\n";
    return 3;
  }
}
