#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "smv2n/config.hpp"
#include "smv2n/errors.hpp"
#include "smv2n/rng.hpp"

namespace smv2n {

struct NodeId {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const NodeId&) const = default;
};

enum class Role { Vehicle, SmartMeter, BaseStation };

inline std::string_view to_string(Role r) {
  switch (r) {
    case Role::Vehicle: return "vehicle";
    case Role::SmartMeter: return "sm";
    case Role::BaseStation: return "bs";
  }
  return "?";
}

struct Node {
  NodeId id;
  Role role = Role::Vehicle;
  double x = 0.0;
  double y = 0.0;
  double height_m = 0.0;

  bool is_infrastructure() const { return role != Role::Vehicle; }
  bool operator==(const Node&) const = default;
};

enum class Axis { Horizontal, Vertical };

/// Street centerline spanning the full area. A horizontal road runs along x
/// at y = centerline_m; a vertical road runs along y at x = centerline_m.
struct Road {
  Axis axis = Axis::Horizontal;
  double centerline_m = 0.0;
  double length_m = 0.0;

  bool operator==(const Road&) const = default;
};

/// Axis-aligned square plot with lower-left corner (x0, y0).
struct Plot {
  double x0 = 0.0;
  double y0 = 0.0;
  double size_m = 0.0;

  bool contains(double x, double y) const {
    return x >= x0 && x <= x0 + size_m && y >= y0 && y <= y0 + size_m;
  }
  bool operator==(const Plot&) const = default;
};

struct GridLayout {
  int plot_columns = 0;
  int plot_rows = 0;
  std::vector<Plot> plots;
  std::vector<Road> roads;
};

/// Plots tile the area from the origin on a pitch of plot + street. The
/// street following each plot column (row) is one vertical (horizontal) road.
/// Leftover margin at the far edges is border street with no road.
inline GridLayout build_grid(const ScenarioConfig& config) {
  const double pitch = config.pitch_m();
  if (!(pitch <= config.area_width_m && pitch <= config.area_height_m)) {
    throw ConfigError("plot_size_m", "pitch " + std::to_string(pitch) + " m exceeds the area dimensions");
  }
  GridLayout g;
  g.plot_columns = static_cast<int>(std::floor(config.area_width_m / pitch));
  g.plot_rows = static_cast<int>(std::floor(config.area_height_m / pitch));
  g.plots.reserve(static_cast<std::size_t>(g.plot_columns) * g.plot_rows);
  for (int col = 0; col < g.plot_columns; ++col) {
    for (int row = 0; row < g.plot_rows; ++row) {
      g.plots.push_back({col * pitch, row * pitch, config.plot_size_m});
    }
  }
  const double half_street = config.street_width_m / 2.0;
  for (int row = 0; row < g.plot_rows; ++row) {
    g.roads.push_back({Axis::Horizontal, row * pitch + config.plot_size_m + half_street, config.area_width_m});
  }
  for (int col = 0; col < g.plot_columns; ++col) {
    g.roads.push_back({Axis::Vertical, col * pitch + config.plot_size_m + half_street, config.area_height_m});
  }
  return g;
}

inline constexpr int kVehiclePlacementAttemptsPerRoad = 10'000;

/// Places vehicles_per_road vehicles on every road. Each vehicle's axial
/// position is redrawn until it clears min_vehicle_spacing_m to every vehicle
/// already on the same road; lateral offset is uniform across the street.
template <class Engine>
std::vector<Node> place_vehicles(const GridLayout& layout, const ScenarioConfig& config, Engine& rng,
                                 std::uint32_t first_id = 0) {
  std::vector<Node> out;
  const int per_road = config.vehicles_per_road;
  if (per_road <= 0) return out;
  out.reserve(layout.roads.size() * static_cast<std::size_t>(per_road));

  const double spacing = config.min_vehicle_spacing_m;
  const double half_street = config.street_width_m / 2.0;
  std::uniform_real_distribution<double> lateral(-half_street, half_street);
  std::uint32_t next_id = first_id;

  for (const Road& road : layout.roads) {
    if ((per_road - 1) * spacing > road.length_m) {
      throw InfeasibleScenario("vehicle density infeasible: " + std::to_string(per_road) + " vehicles at " +
                               std::to_string(spacing) + " m spacing need more than " +
                               std::to_string(road.length_m) + " m of road");
    }
    std::uniform_real_distribution<double> axial(0.0, road.length_m);
    std::vector<double> placed;  // kept sorted
    placed.reserve(static_cast<std::size_t>(per_road));
    int attempts = 0;
    while (static_cast<int>(placed.size()) < per_road) {
      if (++attempts > kVehiclePlacementAttemptsPerRoad) {
        throw InfeasibleScenario("vehicle placement exceeded " + std::to_string(kVehiclePlacementAttemptsPerRoad) +
                                 " attempts on one road");
      }
      const double pos = axial(rng);
      auto it = std::lower_bound(placed.begin(), placed.end(), pos);
      if (it != placed.end() && *it - pos < spacing) continue;
      if (it != placed.begin() && pos - *std::prev(it) < spacing) continue;
      placed.insert(it, pos);
      const double across = road.centerline_m + lateral(rng);
      Node v{NodeId{next_id++}, Role::Vehicle, 0.0, 0.0, config.h_vehicle_m};
      if (road.axis == Axis::Horizontal) {
        v.x = pos;
        v.y = across;
      } else {
        v.x = across;
        v.y = pos;
      }
      out.push_back(v);
    }
  }
  return out;
}

template <class Engine>
std::vector<Node> place_sms(const GridLayout& layout, const ScenarioConfig& config, Engine& rng,
                            std::uint32_t first_id = 0) {
  std::vector<Node> out;
  if (config.sms_per_plot <= 0) return out;
  out.reserve(layout.plots.size() * static_cast<std::size_t>(config.sms_per_plot));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uint32_t next_id = first_id;
  for (const Plot& p : layout.plots) {
    for (int k = 0; k < config.sms_per_plot; ++k) {
      const double x = p.x0 + unit(rng) * p.size_m;
      const double y = p.y0 + unit(rng) * p.size_m;
      out.push_back({NodeId{next_id++}, Role::SmartMeter, x, y, config.h_sm_m});
    }
  }
  return out;
}

/// Two base stations at the centroids of the left and right halves.
inline std::vector<Node> place_bss(const ScenarioConfig& config, std::uint32_t first_id = 0) {
  const double y = config.area_height_m / 2.0;
  return {
      {NodeId{first_id}, Role::BaseStation, config.area_width_m / 4.0, y, config.h_bs_m},
      {NodeId{first_id + 1}, Role::BaseStation, 3.0 * config.area_width_m / 4.0, y, config.h_bs_m},
  };
}

/// Materialized snapshot. Node ids index `nodes`: vehicles first, then smart
/// meters, then base stations.
class Scenario {
 public:
  Scenario() = default;
  Scenario(ScenarioConfig config, GridLayout layout, std::vector<Node> vehicles, std::vector<Node> sms,
           std::vector<Node> bss)
      : config_(std::move(config)), layout_(std::move(layout)) {
    n_vehicles_ = vehicles.size();
    n_sms_ = sms.size();
    nodes_.reserve(vehicles.size() + sms.size() + bss.size());
    for (auto* group : {&vehicles, &sms, &bss}) {
      for (Node n : *group) {
        n.id = NodeId{static_cast<std::uint32_t>(nodes_.size())};
        nodes_.push_back(n);
      }
    }
  }

  const ScenarioConfig& config() const { return config_; }
  const GridLayout& layout() const { return layout_; }
  std::span<const Road> roads() const { return layout_.roads; }

  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Node> vehicles() const { return std::span(nodes_).first(n_vehicles_); }
  std::span<const Node> sms() const { return std::span(nodes_).subspan(n_vehicles_, n_sms_); }
  std::span<const Node> bss() const { return std::span(nodes_).subspan(n_vehicles_ + n_sms_); }
  /// Every SM and BS: the set a vehicle may terminate at.
  std::span<const Node> infrastructure() const { return std::span(nodes_).subspan(n_vehicles_); }

  const Node& node(NodeId id) const { return nodes_.at(id.value); }

 private:
  ScenarioConfig config_;
  GridLayout layout_;
  std::vector<Node> nodes_;
  std::size_t n_vehicles_ = 0;
  std::size_t n_sms_ = 0;
};

/// Builds the full scenario for `config` from `placement_seed`. Vehicle and
/// smart-meter draws come from independent sub-streams so the vehicle layout
/// is identical across baseline modes.
inline Scenario build_scenario(const ScenarioConfig& config, std::uint64_t placement_seed) {
  validate(config);
  GridLayout layout = build_grid(config);
  SplitMix64Engine vehicle_rng(derive_seed({placement_seed, stream::kVehicles}));
  auto vehicles = place_vehicles(layout, config, vehicle_rng);
  std::vector<Node> sms;
  std::vector<Node> bss;
  if (config.baseline_mode == BaselineMode::SM) {
    SplitMix64Engine meter_rng(derive_seed({placement_seed, stream::kMeters}));
    sms = place_sms(layout, config, meter_rng);
  } else {
    bss = place_bss(config);
  }
  return Scenario(config, std::move(layout), std::move(vehicles), std::move(sms), std::move(bss));
}

}  // namespace smv2n
