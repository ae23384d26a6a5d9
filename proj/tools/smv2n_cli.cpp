// smv2n command-line front end: run, sweep, compare, snapshot, validate.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smv2n/smv2n.hpp"

namespace {

using namespace smv2n;

enum Exit : int { kOk = 0, kConfigError = 1, kRuntimeError = 2, kInfeasible = 3 };

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string algorithm = "maxsnr";
  std::string mode = "sm";
  int workers = 1;
  std::string format = "both";
  std::optional<std::string> stamp;
  std::uint64_t trial_index = 0;
  std::optional<std::string> snapshot_dir;
  bool snr_samples = false;
};

std::vector<Algorithm> algorithms_from(const std::string& s) {
  if (s == "both") return {Algorithm::MaxSNR, Algorithm::MinDis};
  return {parse_algorithm(s, "--algorithm")};
}

std::vector<BaselineMode> modes_from(const std::string& s) {
  if (s == "both") return {BaselineMode::SM, BaselineMode::BS};
  return {parse_mode(s, "--mode")};
}

ScenarioConfig resolve_config(const Options& o) {
  ScenarioConfig c = o.config_path.empty() ? ScenarioConfig{} : load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.trials) c.trials = *o.trials;
  validate(c);
  return c;
}

SweepSpec resolve_sweep(const Options& o, bool algorithm_given, bool mode_given) {
  if (o.config_path.empty()) throw ConfigError("--config", "a sweep spec file is required");
  SweepSpec spec = sweep_spec_from_json(read_json_file(o.config_path));
  if (o.seed) spec.base.seed = *o.seed;
  if (o.trials) spec.trials_per_point = *o.trials;
  if (algorithm_given) spec.algorithms = algorithms_from(o.algorithm);
  if (mode_given) spec.modes = modes_from(o.mode);
  validate(spec);
  return spec;
}

int cmd_run(const Options& o) {
  const ScenarioConfig base = resolve_config(o);
  Json doc;
  doc["metadata"] = {{"tool", std::string(kToolName)},
                     {"version", std::string(kToolVersion)},
                     {"config", config_to_json(base)}};
  Json results = Json::array();
  for (BaselineMode m : modes_from(o.mode)) {
    ScenarioConfig c = base;
    c.baseline_mode = m;
    for (Algorithm a : algorithms_from(o.algorithm)) {
      const MetricsSummary s = run_trials(c, a, c.trials, o.workers);
      results.push_back({{"algorithm", std::string(to_string(a))},
                         {"mode", std::string(to_string(m))},
                         {"summary", summary_to_json(s, o.snr_samples)}});
    }
  }
  doc["results"] = std::move(results);
  std::cout << doc.dump(2) << "\n";
  return kOk;
}

int cmd_sweep(const Options& o, std::string_view name, SweepSpec spec) {
  const SweepResult r = name == "compare" ? compare_sm_vs_bs(spec, o.workers) : run_sweep(spec, o.workers);
  const auto rows = rows_from_sweep(r);
  for (const auto& path : write_results(rows, r, name, parse_format(o.format), o.out_dir, o.stamp)) {
    std::cout << path.string() << "\n";
  }
  for (const SweepCell& c : r.cells) {
    if (!c.error.empty()) {
      std::cerr << "cell " << axis_name(spec.axis) << "=" << c.axis_value << " " << to_string(c.algorithm) << "/"
                << to_string(c.mode) << " failed: " << c.error << "\n";
    }
  }
  return kOk;
}

int cmd_snapshot(const Options& o) {
  ScenarioConfig c = resolve_config(o);
  const auto modes = modes_from(o.mode);
  const auto algs = algorithms_from(o.algorithm);
  if (modes.size() != 1 || algs.size() != 1) {
    throw ConfigError("--algorithm", "snapshot takes exactly one algorithm and one mode");
  }
  c.baseline_mode = modes.front();
  const TrialRun run = simulate_trial(c, algs.front(), o.trial_index);
  const std::string text = snapshot_to_json(run, algs.front(), o.trial_index).dump(2) + "\n";
  if (o.snapshot_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*o.snapshot_dir, ec);
    if (ec) throw IoError("cannot create output directory " + *o.snapshot_dir);
    const auto path = std::filesystem::path(*o.snapshot_dir) /
                      ("snapshot_" + std::string(to_string(algs.front())) + "_" + o.stamp.value_or(utc_stamp()) +
                       ".json");
    detail::write_file(path, text);
    std::cout << path.string() << "\n";
  } else {
    std::cout << text;
  }
  return kOk;
}

int cmd_validate(const Options& o) {
  if (o.config_path.empty()) throw ConfigError("--config", "nothing to validate");
  const Json j = read_json_file(o.config_path);
  if (j.is_object() && j.contains("axis")) {
    sweep_spec_from_json(j);
    std::cout << "ok: sweep spec " << o.config_path << "\n";
  } else {
    config_from_json(j);
    std::cout << "ok: scenario config " << o.config_path << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smart-meter V2N Monte Carlo simulator"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "Scenario config (run/snapshot/validate) or sweep spec JSON");
    sub->add_option("--seed", o.seed, "Override the base seed");
    sub->add_option("--trials", o.trials, "Override the trial count");
    sub->add_option("--algorithm", o.algorithm, "maxsnr|mindis|both")
        ->check(CLI::IsMember({"maxsnr", "mindis", "both"}));
    sub->add_option("--mode", o.mode, "sm|bs|both")->check(CLI::IsMember({"sm", "bs", "both"}));
    sub->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Run one scenario for N trials; summary JSON on stdout");
  common(run);
  run->add_flag("--snr-samples", o.snr_samples, "Include every terminal-hop SNR sample");

  std::vector<CLI::App*> sweeps;
  for (const char* name : {"sweep", "compare"}) {
    auto* sub = app.add_subcommand(name, std::string(name) == "sweep" ? "Parameter sweep from a sweep spec"
                                                                     : "Paired SM vs BS sweep");
    common(sub);
    sub->add_option("--out", o.out_dir, "Output directory");
    sub->add_option("--format", o.format, "csv|json|both")->check(CLI::IsMember({"csv", "json", "both"}));
    sub->add_option("--stamp", o.stamp, "Fixed file-name stamp instead of the UTC time");
    sweeps.push_back(sub);
  }

  auto* snapshot = app.add_subcommand("snapshot", "Node positions and association edges of one trial");
  common(snapshot);
  snapshot->add_option("--trial", o.trial_index, "Trial index");
  snapshot->add_option("--out", o.snapshot_dir, "Write to a file in this directory instead of stdout");
  snapshot->add_option("--stamp", o.stamp, "Fixed file-name stamp");

  auto* validate_cmd = app.add_subcommand("validate", "Lint a scenario config or sweep spec");
  validate_cmd->add_option("--config", o.config_path, "File to check")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(o);
    for (auto* sub : sweeps) {
      if (sub->parsed()) {
        const bool alg_given = sub->count("--algorithm") > 0;
        const bool mode_given = sub->count("--mode") > 0;
        return cmd_sweep(o, sub->get_name(), resolve_sweep(o, alg_given, mode_given));
      }
    }
    if (snapshot->parsed()) return cmd_snapshot(o);
    if (validate_cmd->parsed()) return cmd_validate(o);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const InfeasibleScenario& e) {
    std::cerr << "infeasible scenario: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kRuntimeError;
}
