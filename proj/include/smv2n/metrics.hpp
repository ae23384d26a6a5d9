#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "smv2n/association.hpp"
#include "smv2n/config.hpp"
#include "smv2n/errors.hpp"
#include "smv2n/stats.hpp"

namespace smv2n {

struct LatencyBreakdown {
  double propagation_s = 0.0;
  std::vector<double> transmission_s;  // per hop
  double transfer_s = 0.0;             // (N_H - 1) * t_transfer
  double processing_s = 0.0;
  double total_s = 0.0;
};

/// End-to-end latency of a reliable path. Propagation is summed over hops;
/// every hop costs 2 * packet / capacity (send + receive) and every relay
/// adds the configured transfer time.
inline LatencyBreakdown latency_breakdown(const AssociationPath& path, const ScenarioConfig& config) {
  if (!path.reliable()) throw DomainError("latency is undefined for an unreliable path");
  LatencyBreakdown b;
  double two_trans = 0.0;
  for (const LinkBudget& hop : path.hops) {
    b.propagation_s += hop.d3d_m / kSpeedOfLight;
    const double t_trans = config.packet_size_bits / hop.capacity_bps;
    b.transmission_s.push_back(t_trans);
    two_trans += 2.0 * t_trans;
  }
  b.transfer_s = (path.n_hops() - 1) * config.transfer_time_s;
  b.processing_s = two_trans + b.transfer_s;
  b.total_s = b.propagation_s + b.processing_s;
  return b;
}

inline double path_latency(const AssociationPath& path, const ScenarioConfig& config) {
  return latency_breakdown(path, config).total_s;
}

struct LatencyStats {
  double mean = stats::kNaN;
  double median = stats::kNaN;
  double p95 = stats::kNaN;
};

struct ThroughputStats {
  double mean = stats::kNaN;
  double median = stats::kNaN;
};

/// Aggregates over one or more trials. Raw samples are retained so that
/// merged summaries pool exactly; the per-trial vectors feed paired tests.
struct MetricsSummary {
  ReliabilityCounting counting = ReliabilityCounting::PerVehicle;
  double reliability_pct = stats::kNaN;
  double reliability_trial_mean_pct = stats::kNaN;
  LatencyStats latency_s;
  double latency_trial_mean_s = stats::kNaN;
  ThroughputStats throughput_bps;
  double pct_single_hop = stats::kNaN;
  double pct_multi_hop = stats::kNaN;
  long n_vehicles = 0;
  long n_reliable = 0;
  long n_unreliable = 0;
  long n_single_hop = 0;
  long n_multi_hop = 0;
  long links_total = 0;
  long links_unreliable = 0;
  int trial_count = 0;

  std::vector<double> snr_samples_db;  // terminal-hop SNR of reliable paths
  std::vector<double> latency_samples_s;
  std::vector<double> throughput_samples_bps;
  std::vector<double> trial_reliability_pct;
  std::vector<double> trial_latency_mean_s;
};

namespace detail {

inline void finalize(MetricsSummary& s) {
  if (s.counting == ReliabilityCounting::PerVehicle) {
    s.reliability_pct = 100.0 * static_cast<double>(s.n_vehicles - s.n_unreliable) / static_cast<double>(s.n_vehicles);
  } else {
    s.reliability_pct =
        s.links_total > 0
            ? 100.0 * static_cast<double>(s.links_total - s.links_unreliable) / static_cast<double>(s.links_total)
            : 0.0;
  }
  s.reliability_trial_mean_pct = stats::mean(s.trial_reliability_pct);

  std::vector<double> lat = s.latency_samples_s;
  std::sort(lat.begin(), lat.end());
  s.latency_s = {stats::mean(lat), stats::quantile_sorted(lat, 0.5), stats::quantile_sorted(lat, 0.95)};

  std::vector<double> trial_lat;
  for (double x : s.trial_latency_mean_s) {
    if (!std::isnan(x)) trial_lat.push_back(x);
  }
  std::sort(trial_lat.begin(), trial_lat.end());
  s.latency_trial_mean_s = stats::mean(trial_lat);

  std::vector<double> thr = s.throughput_samples_bps;
  std::sort(thr.begin(), thr.end());
  s.throughput_bps = {stats::mean(thr), stats::quantile_sorted(thr, 0.5)};

  if (s.n_reliable > 0) {
    s.pct_single_hop = 100.0 * static_cast<double>(s.n_single_hop) / static_cast<double>(s.n_reliable);
    s.pct_multi_hop = 100.0 - s.pct_single_hop;
  } else {
    s.pct_single_hop = s.pct_multi_hop = stats::kNaN;
  }
}

}  // namespace detail

/// Single-trial summary.
inline MetricsSummary summarize(std::span<const AssociationPath> paths, const ScenarioConfig& config) {
  if (paths.empty()) throw EmptySummary("cannot summarize an empty set of paths");
  MetricsSummary s;
  s.counting = config.reliability_counting;
  s.trial_count = 1;
  s.n_vehicles = static_cast<long>(paths.size());
  for (const AssociationPath& p : paths) {
    s.links_total += p.links_checked;
    s.links_unreliable += p.links_failed;
    if (!p.reliable()) {
      ++s.n_unreliable;
      continue;
    }
    ++s.n_reliable;
    if (p.status == PathStatus::DirectReliable) ++s.n_single_hop;
    else ++s.n_multi_hop;
    s.snr_samples_db.push_back(p.hops.back().snr_db);
    s.latency_samples_s.push_back(path_latency(p, config));
    double bottleneck = p.hops.front().capacity_bps;
    for (const LinkBudget& h : p.hops) bottleneck = std::min(bottleneck, h.capacity_bps);
    s.throughput_samples_bps.push_back(bottleneck);
  }
  detail::finalize(s);
  s.trial_reliability_pct = {s.reliability_pct};
  s.trial_latency_mean_s = {s.latency_s.mean};
  s.reliability_trial_mean_pct = s.reliability_pct;
  s.latency_trial_mean_s = s.latency_s.mean;
  return s;
}

/// Pools trial summaries. Vectors are concatenated in the given order;
/// every statistic is computed over sorted data, so the result does not
/// depend on merge order.
inline MetricsSummary merge(std::span<const MetricsSummary> parts) {
  if (parts.empty()) throw EmptySummary("cannot merge zero summaries");
  MetricsSummary s;
  s.counting = parts.front().counting;
  for (const MetricsSummary& p : parts) {
    s.n_vehicles += p.n_vehicles;
    s.n_reliable += p.n_reliable;
    s.n_unreliable += p.n_unreliable;
    s.n_single_hop += p.n_single_hop;
    s.n_multi_hop += p.n_multi_hop;
    s.links_total += p.links_total;
    s.links_unreliable += p.links_unreliable;
    s.trial_count += p.trial_count;
    auto append = [](std::vector<double>& dst, const std::vector<double>& src) {
      dst.insert(dst.end(), src.begin(), src.end());
    };
    append(s.snr_samples_db, p.snr_samples_db);
    append(s.latency_samples_s, p.latency_samples_s);
    append(s.throughput_samples_bps, p.throughput_samples_bps);
    append(s.trial_reliability_pct, p.trial_reliability_pct);
    append(s.trial_latency_mean_s, p.trial_latency_mean_s);
  }
  detail::finalize(s);
  std::vector<double> rel = s.trial_reliability_pct;
  std::sort(rel.begin(), rel.end());
  s.reliability_trial_mean_pct = stats::mean(rel);
  return s;
}

struct Histogram {
  double origin_db = 0.0;  // left edge of bin 0
  double bin_width_db = 0.0;
  std::vector<double> density;

  double bin_center(std::size_t i) const { return origin_db + (static_cast<double>(i) + 0.5) * bin_width_db; }
  double integral() const {
    double sum = 0.0;
    for (double d : density) sum += d;
    return sum * bin_width_db;
  }
};

/// Normalized histogram (density integrates to 1). Bin edges are aligned to
/// integer multiples of the bin width.
inline Histogram snr_pdf(std::span<const double> samples_db, double bin_width_db) {
  if (samples_db.empty()) throw EmptySummary("snr_pdf needs at least one sample");
  if (!(bin_width_db > 0.0)) throw DomainError("bin width must be > 0");
  const auto [lo_it, hi_it] = std::minmax_element(samples_db.begin(), samples_db.end());
  Histogram h;
  h.bin_width_db = bin_width_db;
  h.origin_db = std::floor(*lo_it / bin_width_db) * bin_width_db;
  const auto n_bins = static_cast<std::size_t>(std::floor((*hi_it - h.origin_db) / bin_width_db)) + 1;
  std::vector<double> counts(n_bins, 0.0);
  for (double x : samples_db) {
    auto i = static_cast<std::size_t>(std::floor((x - h.origin_db) / bin_width_db));
    counts[std::min(i, n_bins - 1)] += 1.0;
  }
  const double norm = static_cast<double>(samples_db.size()) * bin_width_db;
  h.density.reserve(n_bins);
  for (double c : counts) h.density.push_back(c / norm);
  return h;
}

}  // namespace smv2n
