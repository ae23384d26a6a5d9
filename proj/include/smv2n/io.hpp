#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "smv2n/config.hpp"
#include "smv2n/errors.hpp"
#include "smv2n/experiments.hpp"
#include "smv2n/metrics.hpp"

namespace smv2n {

inline constexpr std::string_view kToolName = "smv2n";
inline constexpr std::string_view kToolVersion = "0.1.0";

class IoError : public Error {
 public:
  using Error::Error;
};

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// enums

inline BaselineMode parse_mode(std::string_view s, const char* key = "baseline_mode") {
  if (s == "SM" || s == "sm") return BaselineMode::SM;
  if (s == "BS" || s == "bs") return BaselineMode::BS;
  throw ConfigError(key, "expected \"SM\" or \"BS\", got \"" + std::string(s) + "\"");
}

inline Algorithm parse_algorithm(std::string_view s, const char* key = "algorithms") {
  if (s == "maxsnr" || s == "MaxSNR") return Algorithm::MaxSNR;
  if (s == "mindis" || s == "MinDis") return Algorithm::MinDis;
  throw ConfigError(key, "expected \"maxsnr\" or \"mindis\", got \"" + std::string(s) + "\"");
}

inline ReliabilityCounting parse_counting(std::string_view s) {
  if (s == "per_vehicle") return ReliabilityCounting::PerVehicle;
  if (s == "per_link") return ReliabilityCounting::PerLink;
  throw ConfigError("reliability_counting", "expected \"per_vehicle\" or \"per_link\"");
}

inline SweepAxis parse_axis(std::string_view s) {
  for (SweepAxis a : {SweepAxis::TxPower, SweepAxis::VehiclesPerRoad, SweepAxis::SmsPerPlot, SweepAxis::PlotSize}) {
    if (s == axis_name(a)) return a;
  }
  throw ConfigError("axis", "unknown sweep axis \"" + std::string(s) + "\"");
}

// ---------------------------------------------------------------------------
// ScenarioConfig <-> JSON

namespace detail {

template <class T>
T get_as(const Json& v, const std::string& key) {
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ConfigError(key, "expected a string");
    return v.get<std::string>();
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    if (!v.is_number_unsigned()) throw ConfigError(key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    return v.get<T>();
  } else {
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    return v.get<T>();
  }
}

// Visits every (key, member) pair of ScenarioConfig in file order.
template <class Config, class F>
void for_each_field(Config& c, F&& f) {
  f("area_width_m", c.area_width_m);
  f("area_height_m", c.area_height_m);
  f("plot_size_m", c.plot_size_m);
  f("street_width_m", c.street_width_m);
  f("vehicles_per_road", c.vehicles_per_road);
  f("min_vehicle_spacing_m", c.min_vehicle_spacing_m);
  f("sms_per_plot", c.sms_per_plot);
  f("tx_power_dbm", c.tx_power_dbm);
  f("carrier_freq_ghz", c.carrier_freq_ghz);
  f("bandwidth_hz", c.bandwidth_hz);
  f("packet_size_bits", c.packet_size_bits);
  f("sensitivity_v2i_dbm", c.sensitivity_v2i_dbm);
  f("sensitivity_v2v_dbm", c.sensitivity_v2v_dbm);
  f("sensitivity_bs_dbm", c.sensitivity_bs_dbm);
  f("noise_density_dbm_hz", c.noise_density_dbm_hz);
  f("h_sm_m", c.h_sm_m);
  f("h_vehicle_m", c.h_vehicle_m);
  f("h_bs_m", c.h_bs_m);
  f("max_hops", c.max_hops);
  f("transfer_time_s", c.transfer_time_s);
  f("reliability_counting", c.reliability_counting);
  f("baseline_mode", c.baseline_mode);
  f("seed", c.seed);
  f("trials", c.trials);
}

}  // namespace detail

inline Json config_to_json(const ScenarioConfig& c) {
  Json j = Json::object();
  detail::for_each_field(c, [&](const char* key, const auto& v) {
    using T = std::decay_t<decltype(v)>;
    if constexpr (std::is_same_v<T, BaselineMode> || std::is_same_v<T, ReliabilityCounting>) {
      j[key] = std::string(to_string(v));
    } else {
      j[key] = v;
    }
  });
  return j;
}

/// Fields absent from `j` keep their defaults; unknown keys are an error.
/// The result is validated.
inline ScenarioConfig config_from_json(const Json& j, ScenarioConfig c = {}) {
  if (!j.is_object()) throw ConfigError("<root>", "configuration must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    detail::for_each_field(c, [&](const char* name, auto& field) {
      if (key != name) return;
      known = true;
      using T = std::decay_t<decltype(field)>;
      if constexpr (std::is_same_v<T, BaselineMode>) {
        field = parse_mode(detail::get_as<std::string>(value, key));
      } else if constexpr (std::is_same_v<T, ReliabilityCounting>) {
        field = parse_counting(detail::get_as<std::string>(value, key));
      } else {
        field = detail::get_as<T>(value, key);
      }
    });
    if (!known) throw ConfigError(key, "unknown configuration key \"" + key + "\"");
  }
  validate(c);
  return c;
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
}

inline ScenarioConfig load_config(const std::filesystem::path& path) { return config_from_json(read_json_file(path)); }

inline Json sweep_spec_to_json(const SweepSpec& s) {
  Json j;
  j["base"] = config_to_json(s.base);
  j["axis"] = std::string(axis_name(s.axis));
  j["values"] = s.values;
  Json algs = Json::array();
  for (Algorithm a : s.algorithms) algs.push_back(std::string(to_string(a)));
  j["algorithms"] = algs;
  Json modes = Json::array();
  for (BaselineMode m : s.modes) modes.push_back(std::string(to_string(m)));
  j["modes"] = modes;
  j["trials_per_point"] = s.trials_per_point;
  return j;
}

inline SweepSpec sweep_spec_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "sweep spec must be a JSON object");
  SweepSpec s;
  for (const auto& [key, value] : j.items()) {
    if (key == "base") {
      s.base = config_from_json(value);
    } else if (key == "axis") {
      s.axis = parse_axis(detail::get_as<std::string>(value, key));
    } else if (key == "values") {
      if (!value.is_array()) throw ConfigError(key, "expected an array of numbers");
      s.values.clear();
      for (const auto& v : value) s.values.push_back(detail::get_as<double>(v, key));
    } else if (key == "algorithms") {
      if (!value.is_array()) throw ConfigError(key, "expected an array");
      s.algorithms.clear();
      for (const auto& v : value) s.algorithms.push_back(parse_algorithm(detail::get_as<std::string>(v, key)));
    } else if (key == "modes") {
      if (!value.is_array()) throw ConfigError(key, "expected an array");
      s.modes.clear();
      for (const auto& v : value) s.modes.push_back(parse_mode(detail::get_as<std::string>(v, key), "modes"));
    } else if (key == "trials_per_point") {
      s.trials_per_point = detail::get_as<int>(value, key);
    } else {
      throw ConfigError(key, "unknown sweep key \"" + key + "\"");
    }
  }
  validate(s);
  return s;
}

// ---------------------------------------------------------------------------
// result rows

/// One sweep cell. NaN marks a missing value (failed cell, or a statistic
/// over zero reliable paths) and is written as an empty CSV field / JSON null.
struct ResultRow {
  std::string axis_name;
  double axis_value = 0.0;
  std::string algorithm;
  std::string mode;
  double reliability_pct = stats::kNaN;
  double latency_mean_s = stats::kNaN;
  double latency_p95_s = stats::kNaN;
  double throughput_mean_bps = stats::kNaN;
  double pct_single_hop = stats::kNaN;
  double pct_multi_hop = stats::kNaN;
  int n_trials = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::string_view kResultColumns[] = {
    "axis_name",      "axis_value",   "algorithm",     "mode",          "reliability_pct", "latency_mean_s",
    "latency_p95_s", "throughput_mean_bps", "pct_single_hop", "pct_multi_hop", "n_trials",        "seed"};

inline std::vector<ResultRow> rows_from_sweep(const SweepResult& r) {
  std::vector<ResultRow> rows;
  rows.reserve(r.cells.size());
  for (const SweepCell& c : r.cells) {
    ResultRow row;
    row.axis_name = std::string(axis_name(r.spec.axis));
    row.axis_value = c.axis_value;
    row.algorithm = std::string(to_string(c.algorithm));
    row.mode = std::string(to_string(c.mode));
    row.n_trials = c.n_trials;
    row.seed = c.cell_seed;
    if (c.summary) {
      const MetricsSummary& s = *c.summary;
      row.reliability_pct = s.reliability_pct;
      row.latency_mean_s = s.latency_s.mean;
      row.latency_p95_s = s.latency_s.p95;
      row.throughput_mean_bps = s.throughput_bps.mean;
      row.pct_single_hop = s.pct_single_hop;
      row.pct_multi_hop = s.pct_multi_hop;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Shortest round-trip decimal representation; empty for NaN/inf.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) return {};
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace detail {
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }
}  // namespace detail

inline std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < std::size(kResultColumns); ++i) out << (i ? "," : "") << kResultColumns[i];
  out << "\r\n";
  for (const ResultRow& r : rows) {
    out << detail::csv_field(r.axis_name) << ',' << format_number(r.axis_value) << ','
        << detail::csv_field(r.algorithm) << ',' << detail::csv_field(r.mode) << ','
        << format_number(r.reliability_pct) << ',' << format_number(r.latency_mean_s) << ','
        << format_number(r.latency_p95_s) << ',' << format_number(r.throughput_mean_bps) << ','
        << format_number(r.pct_single_hop) << ',' << format_number(r.pct_multi_hop) << ',' << r.n_trials << ','
        << r.seed << "\r\n";
  }
  return out.str();
}

inline Json row_to_json(const ResultRow& r) {
  using detail::number_or_null;
  Json j;
  j["axis_name"] = r.axis_name;
  j["axis_value"] = r.axis_value;
  j["algorithm"] = r.algorithm;
  j["mode"] = r.mode;
  j["reliability_pct"] = number_or_null(r.reliability_pct);
  j["latency_mean_s"] = number_or_null(r.latency_mean_s);
  j["latency_p95_s"] = number_or_null(r.latency_p95_s);
  j["throughput_mean_bps"] = number_or_null(r.throughput_mean_bps);
  j["pct_single_hop"] = number_or_null(r.pct_single_hop);
  j["pct_multi_hop"] = number_or_null(r.pct_multi_hop);
  j["n_trials"] = r.n_trials;
  j["seed"] = r.seed;
  return j;
}

inline Json seed_schedule_json(const SweepResult& r) {
  Json sched = Json::array();
  for (const SweepCell& c : r.cells) {
    Json e;
    e["axis_value"] = c.axis_value;
    e["algorithm"] = std::string(to_string(c.algorithm));
    e["mode"] = std::string(to_string(c.mode));
    e["cell_seed"] = c.cell_seed;
    e["trials"] = c.n_trials;
    if (!c.error.empty()) e["error"] = c.error;
    sched.push_back(std::move(e));
  }
  return sched;
}

inline Json results_document(const std::vector<ResultRow>& rows, const SweepResult& r, std::string_view subcommand) {
  Json doc;
  Json meta;
  meta["tool"] = std::string(kToolName);
  meta["version"] = std::string(kToolVersion);
  meta["subcommand"] = std::string(subcommand);
  meta["sweep"] = sweep_spec_to_json(r.spec);
  meta["config"] = config_to_json(r.spec.base);
  meta["seed_schedule"] = seed_schedule_json(r);
  doc["metadata"] = std::move(meta);
  Json arr = Json::array();
  for (const ResultRow& row : rows) arr.push_back(row_to_json(row));
  doc["rows"] = std::move(arr);
  return doc;
}

enum class OutputFormat { Csv, Json, Both };

inline OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  if (s == "both") return OutputFormat::Both;
  throw ConfigError("--format", "expected csv|json|both");
}

/// UTC timestamp used in result file names, e.g. 20261016T101500Z.
inline std::string utc_stamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

namespace detail {
inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}
}  // namespace detail

/// Writes `<subcommand>_<axis>_<stamp>.{csv,json}` into `dir` and returns the
/// paths written.
inline std::vector<std::filesystem::path> write_results(const std::vector<ResultRow>& rows, const SweepResult& r,
                                                        std::string_view subcommand, OutputFormat format,
                                                        const std::filesystem::path& dir,
                                                        std::optional<std::string> stamp = std::nullopt) {
  if (rows.empty()) throw IoError("no result rows to write");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  const std::string base =
      std::string(subcommand) + "_" + std::string(axis_name(r.spec.axis)) + "_" + stamp.value_or(utc_stamp());
  std::vector<std::filesystem::path> written;
  if (format != OutputFormat::Json) {
    written.push_back(dir / (base + ".csv"));
    detail::write_file(written.back(), rows_to_csv(rows));
  }
  if (format != OutputFormat::Csv) {
    written.push_back(dir / (base + ".json"));
    detail::write_file(written.back(), results_document(rows, r, subcommand).dump(2) + "\n");
  }
  return written;
}

// ---------------------------------------------------------------------------
// summaries and snapshots

inline Json summary_to_json(const MetricsSummary& s, bool include_samples = false) {
  using detail::number_or_null;
  Json j;
  j["reliability_counting"] = std::string(to_string(s.counting));
  j["reliability_pct"] = number_or_null(s.reliability_pct);
  j["reliability_trial_mean_pct"] = number_or_null(s.reliability_trial_mean_pct);
  j["latency_s"] = {{"mean", number_or_null(s.latency_s.mean)},
                    {"median", number_or_null(s.latency_s.median)},
                    {"p95", number_or_null(s.latency_s.p95)},
                    {"trial_mean", number_or_null(s.latency_trial_mean_s)}};
  j["throughput_bps"] = {{"mean", number_or_null(s.throughput_bps.mean)},
                         {"median", number_or_null(s.throughput_bps.median)}};
  j["snr_db"] = {{"mean", number_or_null(stats::mean(s.snr_samples_db))},
                 {"stddev", number_or_null(stats::stddev(s.snr_samples_db))},
                 {"count", s.snr_samples_db.size()}};
  j["pct_single_hop"] = number_or_null(s.pct_single_hop);
  j["pct_multi_hop"] = number_or_null(s.pct_multi_hop);
  j["n_vehicles"] = s.n_vehicles;
  j["n_reliable"] = s.n_reliable;
  j["n_unreliable"] = s.n_unreliable;
  j["links_total"] = s.links_total;
  j["links_unreliable"] = s.links_unreliable;
  j["trial_count"] = s.trial_count;
  if (include_samples) j["snr_samples_db"] = s.snr_samples_db;
  return j;
}

/// Node positions plus every association edge of one trial: the hops of
/// each path (reliable) and the failed final checks of unreliable paths.
inline Json snapshot_to_json(const TrialRun& run, Algorithm algorithm, std::uint64_t trial_index) {
  Json j;
  j["metadata"] = {{"tool", std::string(kToolName)},
                   {"version", std::string(kToolVersion)},
                   {"algorithm", std::string(to_string(algorithm))},
                   {"trial", trial_index},
                   {"placement_seed", run.seeds.placement},
                   {"fading_seed", run.seeds.fading},
                   {"config", config_to_json(run.scenario.config())}};
  Json nodes = Json::array();
  for (const Node& n : run.scenario.nodes()) {
    nodes.push_back({{"id", n.id.value}, {"role", std::string(to_string(n.role))}, {"x", n.x}, {"y", n.y},
                     {"height_m", n.height_m}});
  }
  j["nodes"] = std::move(nodes);
  Json edges = Json::array();
  Json paths = Json::array();
  for (const AssociationPath& p : run.paths) {
    Json hop_ids = Json::array();
    hop_ids.push_back(p.source_vehicle.value);
    int k = 0;
    for (const LinkBudget& h : p.hops) {
      edges.push_back({{"tx", h.tx_id.value}, {"rx", h.rx_id.value}, {"snr_db", h.snr_db},
                       {"reliable", h.reliable}, {"source", p.source_vehicle.value}, {"hop", k++}});
      hop_ids.push_back(h.rx_id.value);
    }
    for (const LinkBudget& f : p.failed_checks) {
      edges.push_back({{"tx", f.tx_id.value}, {"rx", f.rx_id.value}, {"snr_db", f.snr_db},
                       {"reliable", f.reliable}, {"source", p.source_vehicle.value}, {"hop", k}});
    }
    Json pj = {{"source", p.source_vehicle.value}, {"status", std::string(to_string(p.status))},
               {"terminal", p.terminal ? Json(p.terminal->value) : Json(nullptr)}, {"nodes", hop_ids}};
    paths.push_back(std::move(pj));
  }
  j["edges"] = std::move(edges);
  j["paths"] = std::move(paths);
  return j;
}

}  // namespace smv2n
