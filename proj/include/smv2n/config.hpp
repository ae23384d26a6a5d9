#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "smv2n/errors.hpp"

namespace smv2n {

enum class BaselineMode { SM, BS };
enum class ReliabilityCounting { PerVehicle, PerLink };

inline std::string_view to_string(BaselineMode m) { return m == BaselineMode::SM ? "SM" : "BS"; }

inline std::string_view to_string(ReliabilityCounting c) {
  return c == ReliabilityCounting::PerVehicle ? "per_vehicle" : "per_link";
}

inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

/// Full parameter set of one scenario. Defaults reproduce the 802.11p
/// smart-meter deployment over a 2 km x 2 km suburban grid.
struct ScenarioConfig {
  // geometry
  double area_width_m = 2000.0;
  double area_height_m = 2000.0;
  double plot_size_m = 200.0;
  double street_width_m = 20.0;
  int vehicles_per_road = 30;
  double min_vehicle_spacing_m = 7.0;
  int sms_per_plot = 2;

  // radio
  double tx_power_dbm = 23.0;
  double carrier_freq_ghz = 5.9;
  double bandwidth_hz = 10e6;
  double packet_size_bits = 1600.0;
  double sensitivity_v2i_dbm = -92.0;
  double sensitivity_v2v_dbm = -89.0;
  /// V2I sensitivity applied to links terminating at a base station.
  double sensitivity_bs_dbm = -103.5;
  double noise_density_dbm_hz = -174.0;

  // antenna heights
  double h_sm_m = 2.0;
  double h_vehicle_m = 1.5;
  double h_bs_m = 25.0;

  // association / latency
  int max_hops = 3;
  double transfer_time_s = 0.0;
  ReliabilityCounting reliability_counting = ReliabilityCounting::PerLink;

  BaselineMode baseline_mode = BaselineMode::SM;
  std::uint64_t seed = 1;
  int trials = 200;

  double pitch_m() const { return plot_size_m + street_width_m; }
  double noise_power_dbm() const { return noise_density_dbm_hz + 10.0 * std::log10(bandwidth_hz); }

  bool operator==(const ScenarioConfig&) const = default;
};

namespace detail {
inline void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}
}  // namespace detail

/// Throws ConfigError naming the first violated field.
inline void validate(const ScenarioConfig& c) {
  using detail::require;
  require(std::isfinite(c.area_width_m) && c.area_width_m > 0, "area_width_m", "must be > 0");
  require(std::isfinite(c.area_height_m) && c.area_height_m > 0, "area_height_m", "must be > 0");
  require(std::isfinite(c.plot_size_m) && c.plot_size_m > 0, "plot_size_m", "must be > 0");
  require(std::isfinite(c.street_width_m) && c.street_width_m > 0, "street_width_m", "must be > 0");
  require(c.pitch_m() <= std::min(c.area_width_m, c.area_height_m), "plot_size_m",
          "plot_size_m + street_width_m exceeds the area dimensions");
  require(c.vehicles_per_road >= 0, "vehicles_per_road", "must be >= 0");
  require(std::isfinite(c.min_vehicle_spacing_m) && c.min_vehicle_spacing_m > 0,
          "min_vehicle_spacing_m", "must be > 0");
  require(c.sms_per_plot >= 0, "sms_per_plot", "must be >= 0");
  require(std::isfinite(c.tx_power_dbm), "tx_power_dbm", "must be finite");
  require(std::isfinite(c.carrier_freq_ghz) && c.carrier_freq_ghz > 0, "carrier_freq_ghz", "must be > 0");
  require(std::isfinite(c.bandwidth_hz) && c.bandwidth_hz > 0, "bandwidth_hz", "must be > 0");
  require(std::isfinite(c.packet_size_bits) && c.packet_size_bits > 0, "packet_size_bits", "must be > 0");
  require(std::isfinite(c.sensitivity_v2i_dbm), "sensitivity_v2i_dbm", "must be finite");
  require(std::isfinite(c.sensitivity_v2v_dbm), "sensitivity_v2v_dbm", "must be finite");
  require(std::isfinite(c.sensitivity_bs_dbm), "sensitivity_bs_dbm", "must be finite");
  require(std::isfinite(c.noise_density_dbm_hz), "noise_density_dbm_hz", "must be finite");
  require(std::isfinite(c.h_sm_m) && c.h_sm_m > 0, "h_sm_m", "must be > 0");
  require(std::isfinite(c.h_vehicle_m) && c.h_vehicle_m > 0, "h_vehicle_m", "must be > 0");
  require(std::isfinite(c.h_bs_m) && c.h_bs_m > 0, "h_bs_m", "must be > 0");
  require(c.max_hops >= 1, "max_hops", "must be >= 1");
  require(std::isfinite(c.transfer_time_s) && c.transfer_time_s >= 0, "transfer_time_s", "must be >= 0");
  require(c.trials >= 1, "trials", "must be >= 1");
}

}  // namespace smv2n
