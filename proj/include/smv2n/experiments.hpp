#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "smv2n/association.hpp"
#include "smv2n/channel.hpp"
#include "smv2n/config.hpp"
#include "smv2n/metrics.hpp"
#include "smv2n/rng.hpp"
#include "smv2n/topology.hpp"

namespace smv2n {

struct TrialSeeds {
  std::uint64_t placement = 0;
  std::uint64_t fading = 0;
};

/// Placement depends only on (seed, trial) so that SM and BS runs of the same
/// trial share vehicle coordinates; fading additionally depends on the
/// algorithm and the baseline mode.
inline TrialSeeds trial_seeds(std::uint64_t seed, std::uint64_t trial_index, Algorithm algorithm,
                              BaselineMode mode) {
  TrialSeeds s;
  s.placement = derive_seed({seed, stream::kTrial, trial_index});
  s.fading = derive_seed({s.placement, stream::kFading, static_cast<std::uint64_t>(algorithm),
                          static_cast<std::uint64_t>(mode)});
  return s;
}

struct TrialRun {
  Scenario scenario;
  std::vector<AssociationPath> paths;
  TrialSeeds seeds;
};

/// Builds and associates one trial without summarizing it.
inline TrialRun simulate_trial(const ScenarioConfig& config, Algorithm algorithm, std::uint64_t trial_index) {
  TrialRun run;
  run.seeds = trial_seeds(config.seed, trial_index, algorithm, config.baseline_mode);
  run.scenario = build_scenario(config, run.seeds.placement);
  ChannelModel channel(run.scenario.config(), run.seeds.fading);
  run.paths = associate_all(run.scenario, algorithm, channel);
  return run;
}

inline MetricsSummary run_trial(const ScenarioConfig& config, Algorithm algorithm, std::uint64_t trial_index) {
  TrialRun run = simulate_trial(config, algorithm, trial_index);
  return summarize(run.paths, config);
}

/// Runs trials 0..n-1 of one configuration and pools them. Trial errors
/// propagate.
inline MetricsSummary run_trials(const ScenarioConfig& config, Algorithm algorithm, int n_trials, int workers = 1) {
  if (n_trials < 1) throw ConfigError("trials", "must be >= 1");
  std::vector<std::optional<MetricsSummary>> slots(static_cast<std::size_t>(n_trials));
  std::vector<std::exception_ptr> errors(slots.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t = next++; t < slots.size(); t = next++) {
      try {
        slots[t] = run_trial(config, algorithm, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min(workers, n_trials));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(work);
  }
  std::vector<MetricsSummary> parts;
  parts.reserve(slots.size());
  for (std::size_t t = 0; t < slots.size(); ++t) {
    if (errors[t]) std::rethrow_exception(errors[t]);
    parts.push_back(std::move(*slots[t]));
  }
  return merge(parts);
}

enum class SweepAxis { TxPower, VehiclesPerRoad, SmsPerPlot, PlotSize };

/// Column name used in result files. Tx power values are in milliwatts.
inline std::string_view axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::TxPower: return "tx_power_mw";
    case SweepAxis::VehiclesPerRoad: return "vehicles_per_road";
    case SweepAxis::SmsPerPlot: return "sms_per_plot";
    case SweepAxis::PlotSize: return "plot_size_m";
  }
  return "?";
}

inline ScenarioConfig apply_axis(ScenarioConfig c, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::TxPower:
      if (!(value > 0.0)) throw ConfigError("values", "tx power must be > 0 mW");
      c.tx_power_dbm = mw_to_dbm(value);
      break;
    case SweepAxis::VehiclesPerRoad: c.vehicles_per_road = static_cast<int>(std::lround(value)); break;
    case SweepAxis::SmsPerPlot: c.sms_per_plot = static_cast<int>(std::lround(value)); break;
    case SweepAxis::PlotSize: c.plot_size_m = value; break;
  }
  return c;
}

struct SweepSpec {
  ScenarioConfig base;
  SweepAxis axis = SweepAxis::TxPower;
  std::vector<double> values;
  std::vector<Algorithm> algorithms{Algorithm::MaxSNR};
  std::vector<BaselineMode> modes{BaselineMode::SM};
  int trials_per_point = 200;
};

inline void validate(const SweepSpec& spec) {
  validate(spec.base);
  if (spec.values.empty()) throw ConfigError("values", "sweep needs at least one value");
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > spec.values[i - 1])) throw ConfigError("values", "values must be strictly increasing");
  }
  if (spec.algorithms.empty()) throw ConfigError("algorithms", "at least one algorithm required");
  if (spec.modes.empty()) throw ConfigError("modes", "at least one mode required");
  if (spec.trials_per_point < 1) throw ConfigError("trials_per_point", "must be >= 1");
}

struct SweepCell {
  std::size_t axis_index = 0;
  double axis_value = 0.0;
  Algorithm algorithm = Algorithm::MaxSNR;
  BaselineMode mode = BaselineMode::SM;
  std::uint64_t cell_seed = 0;  // config.seed used for every trial of the cell
  int n_trials = 0;
  std::optional<MetricsSummary> summary;
  std::string error;  // non-empty when the cell failed
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepCell> cells;  // axis-major, then algorithm, then mode

  const SweepCell* find(double axis_value, Algorithm algorithm, BaselineMode mode) const {
    for (const auto& c : cells) {
      if (c.axis_value == axis_value && c.algorithm == algorithm && c.mode == mode) return &c;
    }
    return nullptr;
  }
};

/// The seed shared by every trial at one axis point. Independent of
/// algorithm and mode, which enter through the fading stream instead.
inline std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t axis_index) {
  return derive_seed({base_seed, stream::kCell, axis_index});
}

inline ScenarioConfig cell_config(const SweepSpec& spec, std::size_t axis_index, BaselineMode mode) {
  ScenarioConfig c = apply_axis(spec.base, spec.axis, spec.values.at(axis_index));
  c.baseline_mode = mode;
  c.seed = cell_seed(spec.base.seed, axis_index);
  c.trials = spec.trials_per_point;
  return c;
}

/// Runs every (value, algorithm, mode) cell for trials_per_point trials.
/// Work is spread over `workers` threads; the merge is per cell in trial
/// order, so the result is identical for any worker count.
inline SweepResult run_sweep(const SweepSpec& spec, int workers = 1) {
  validate(spec);
  SweepResult result;
  result.spec = spec;
  std::vector<ScenarioConfig> configs;
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    for (Algorithm a : spec.algorithms) {
      for (BaselineMode m : spec.modes) {
        SweepCell cell;
        cell.axis_index = i;
        cell.axis_value = spec.values[i];
        cell.algorithm = a;
        cell.mode = m;
        cell.n_trials = spec.trials_per_point;
        ScenarioConfig config;
        try {
          config = cell_config(spec, i, m);
          validate(config);
        } catch (const std::exception& e) {
          cell.error = e.what();
        }
        cell.cell_seed = cell_seed(spec.base.seed, i);
        configs.push_back(config);
        result.cells.push_back(std::move(cell));
      }
    }
  }

  const std::size_t trials = static_cast<std::size_t>(spec.trials_per_point);
  const std::size_t n_items = result.cells.size() * trials;
  std::vector<std::optional<MetricsSummary>> slots(n_items);
  std::vector<std::string> errors(n_items);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t item = next++; item < n_items; item = next++) {
      const std::size_t ci = item / trials;
      const SweepCell& cell = result.cells[ci];
      if (!cell.error.empty()) continue;
      try {
        slots[item] = run_trial(configs[ci], cell.algorithm, item % trials);
      } catch (const std::exception& e) {
        errors[item] = e.what();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(n_items)));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }

  for (std::size_t ci = 0; ci < result.cells.size(); ++ci) {
    SweepCell& cell = result.cells[ci];
    if (!cell.error.empty()) continue;
    std::vector<MetricsSummary> parts;
    parts.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      const std::size_t item = ci * trials + t;
      if (!errors[item].empty()) {
        cell.error = "trial " + std::to_string(t) + ": " + errors[item];
        break;
      }
      parts.push_back(std::move(*slots[item]));
    }
    if (cell.error.empty()) cell.summary = merge(parts);
  }
  return result;
}

/// Paired SM-versus-BS sweep: both modes see identical vehicle layouts per
/// trial index; only the infrastructure differs.
inline SweepResult compare_sm_vs_bs(SweepSpec spec, int workers = 1) {
  spec.modes = {BaselineMode::SM, BaselineMode::BS};
  return run_sweep(spec, workers);
}

}  // namespace smv2n
