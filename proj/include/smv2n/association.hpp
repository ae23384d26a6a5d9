#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "smv2n/channel.hpp"
#include "smv2n/topology.hpp"

namespace smv2n {

enum class Algorithm { MaxSNR, MinDis };

inline std::string_view to_string(Algorithm a) { return a == Algorithm::MaxSNR ? "maxsnr" : "mindis"; }

enum class PathStatus { DirectReliable, MultiHopReliable, Unreliable };

inline std::string_view to_string(PathStatus s) {
  switch (s) {
    case PathStatus::DirectReliable: return "direct";
    case PathStatus::MultiHopReliable: return "multihop";
    case PathStatus::Unreliable: return "unreliable";
  }
  return "?";
}

struct AssociationPath {
  NodeId source_vehicle;
  std::vector<LinkBudget> hops;  // hops[k].rx_id == hops[k + 1].tx_id
  std::optional<NodeId> terminal;
  PathStatus status = PathStatus::Unreliable;
  /// Links checked against a sensitivity threshold while building the path,
  /// and how many of those checks failed.
  int links_checked = 0;
  int links_failed = 0;
  /// The candidates that failed their threshold on the last step of an
  /// unreliable path (infrastructure first, then vehicle if one was tried).
  std::vector<LinkBudget> failed_checks;

  int n_hops() const { return static_cast<int>(hops.size()); }
  bool reliable() const { return status != PathStatus::Unreliable; }
};

struct StepDecision {
  enum class Kind { Terminate, Relay, Fail };

  Kind kind = Kind::Fail;
  std::optional<LinkBudget> infrastructure_check;
  std::optional<LinkBudget> relay_check;

  /// The link taken on Terminate or Relay.
  const LinkBudget& chosen() const { return kind == Kind::Terminate ? *infrastructure_check : *relay_check; }
};

namespace detail {

inline bool contains(std::span<const NodeId> visited, NodeId id) {
  return std::find(visited.begin(), visited.end(), id) != visited.end();
}

// Strict comparisons keep the lowest node id on exact ties.
inline std::optional<LinkBudget> best_by_snr(const Node& from, std::span<const Node> candidates,
                                             std::span<const NodeId> visited, const ChannelModel& channel) {
  const Node* best = nullptr;
  double best_snr = 0.0;
  for (const Node& c : candidates) {
    if (c.id == from.id || contains(visited, c.id)) continue;
    const double snr = channel.snr_db(from, c);
    if (!best || snr > best_snr) {
      best = &c;
      best_snr = snr;
    }
  }
  if (!best) return std::nullopt;
  return channel.link(from, *best);
}

inline std::optional<LinkBudget> nearest(const Node& from, std::span<const Node> candidates,
                                         std::span<const NodeId> visited, const ChannelModel& channel) {
  const Node* best = nullptr;
  double best_d = 0.0;
  for (const Node& c : candidates) {
    if (c.id == from.id || contains(visited, c.id)) continue;
    const double d = distance_3d(from, c);
    if (!best || d < best_d) {
      best = &c;
      best_d = d;
    }
  }
  if (!best) return std::nullopt;
  return channel.link(from, *best);
}

inline StepDecision step(Algorithm algorithm, NodeId current, std::span<const NodeId> visited,
                         const Scenario& scenario, const ChannelModel& channel, bool allow_relay) {
  const Node& from = scenario.node(current);
  auto pick = [&](std::span<const Node> candidates) {
    return algorithm == Algorithm::MaxSNR ? best_by_snr(from, candidates, visited, channel)
                                          : nearest(from, candidates, visited, channel);
  };
  StepDecision d;
  d.infrastructure_check = pick(scenario.infrastructure());
  if (d.infrastructure_check && d.infrastructure_check->reliable) {
    d.kind = StepDecision::Kind::Terminate;
    return d;
  }
  if (!allow_relay) return d;
  d.relay_check = pick(scenario.vehicles());
  if (d.relay_check && d.relay_check->reliable) d.kind = StepDecision::Kind::Relay;
  return d;
}

}  // namespace detail

/// One MaxSNR step from `current`: best-SNR infrastructure node if it clears
/// its threshold, otherwise the best-SNR unvisited vehicle if that clears the
/// V2V threshold, otherwise failure.
inline StepDecision step_maxsnr(NodeId current, std::span<const NodeId> visited, const Scenario& scenario,
                                const ChannelModel& channel, bool allow_relay = true) {
  return detail::step(Algorithm::MaxSNR, current, visited, scenario, channel, allow_relay);
}

/// One MinDis step: as step_maxsnr but candidates are chosen by 3D distance.
/// The threshold checks still see the faded received power.
inline StepDecision step_mindis(NodeId current, std::span<const NodeId> visited, const Scenario& scenario,
                                const ChannelModel& channel, bool allow_relay = true) {
  return detail::step(Algorithm::MinDis, current, visited, scenario, channel, allow_relay);
}

inline AssociationPath run_path(NodeId source, Algorithm algorithm, const Scenario& scenario,
                                const ChannelModel& channel) {
  const int max_hops = scenario.config().max_hops;
  AssociationPath path;
  path.source_vehicle = source;
  std::vector<NodeId> visited{source};
  NodeId current = source;

  while (path.n_hops() < max_hops) {
    // A relay is only useful if a further hop still fits under the cap.
    const bool allow_relay = path.n_hops() + 2 <= max_hops;
    StepDecision d = detail::step(algorithm, current, visited, scenario, channel, allow_relay);
    path.links_checked += static_cast<int>(d.infrastructure_check.has_value()) +
                          static_cast<int>(d.relay_check.has_value());

    if (d.kind == StepDecision::Kind::Terminate) {
      path.hops.push_back(*d.infrastructure_check);
      path.terminal = d.infrastructure_check->rx_id;
      path.status = path.n_hops() == 1 ? PathStatus::DirectReliable : PathStatus::MultiHopReliable;
      return path;
    }
    if (d.infrastructure_check) {
      ++path.links_failed;
      path.failed_checks = {*d.infrastructure_check};
    } else {
      path.failed_checks.clear();
    }
    if (d.kind == StepDecision::Kind::Relay) {
      path.hops.push_back(*d.relay_check);
      current = d.relay_check->rx_id;
      visited.push_back(current);
      continue;
    }
    if (d.relay_check) {
      ++path.links_failed;
      path.failed_checks.push_back(*d.relay_check);
    }
    break;
  }
  path.status = PathStatus::Unreliable;
  return path;
}

/// One path per vehicle, in vehicle id order. Paths are independent: no
/// admission limit at smart meters and relays may serve several sources.
inline std::vector<AssociationPath> associate_all(const Scenario& scenario, Algorithm algorithm,
                                                  const ChannelModel& channel) {
  std::vector<AssociationPath> out;
  out.reserve(scenario.vehicles().size());
  for (const Node& v : scenario.vehicles()) out.push_back(run_path(v.id, algorithm, scenario, channel));
  return out;
}

/// Same association rules with the two base stations as the only
/// infrastructure (BS sensitivity threshold and mast height).
inline std::vector<AssociationPath> baseline_bs_associate(const Scenario& scenario, Algorithm algorithm,
                                                          const ChannelModel& channel) {
  if (scenario.config().baseline_mode != BaselineMode::BS) {
    throw Error("baseline_bs_associate requires baseline_mode = BS");
  }
  return associate_all(scenario, algorithm, channel);
}

}  // namespace smv2n
