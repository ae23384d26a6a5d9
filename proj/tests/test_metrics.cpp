#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "smv2n/metrics.hpp"

using namespace smv2n;

namespace {

// Frozen from tests/oracles/formula_oracles.py.
constexpr double kLatencySingleHop = 3.233356409519815205e-5;  // 100 m, 100 Mbit/s
constexpr double kPropagationTwoHops = 6.6712819039630409915e-7;  // 2 x 100 m

LinkBudget hop(std::uint32_t tx, std::uint32_t rx, double d3d, double capacity, double snr_db = 20.0) {
  LinkBudget h;
  h.tx_id = NodeId{tx};
  h.rx_id = NodeId{rx};
  h.d3d_m = d3d;
  h.d2d_m = d3d;
  h.capacity_bps = capacity;
  h.snr_db = snr_db;
  h.reliable = true;
  return h;
}

AssociationPath path_of(std::vector<LinkBudget> hops) {
  AssociationPath p;
  p.source_vehicle = hops.front().tx_id;
  p.terminal = hops.back().rx_id;
  p.status = hops.size() == 1 ? PathStatus::DirectReliable : PathStatus::MultiHopReliable;
  p.links_checked = static_cast<int>(hops.size());
  p.hops = std::move(hops);
  return p;
}

AssociationPath failed(std::uint32_t src, int checked, int failed_links) {
  AssociationPath p;
  p.source_vehicle = NodeId{src};
  p.links_checked = checked;
  p.links_failed = failed_links;
  return p;
}

}  // namespace

TEST(Latency, SingleHop) {
  ScenarioConfig c;
  const auto b = latency_breakdown(path_of({hop(0, 1, 100.0, 100e6)}), c);
  EXPECT_NEAR(b.total_s, kLatencySingleHop, 1e-9 * kLatencySingleHop);
  EXPECT_NEAR(b.propagation_s, 100.0 / 299792458.0, 1e-20);
  ASSERT_EQ(b.transmission_s.size(), 1u);
  EXPECT_DOUBLE_EQ(b.transmission_s[0], 16e-6);
  EXPECT_DOUBLE_EQ(b.transfer_s, 0.0);
  // three-decimal microsecond figure
  EXPECT_LT(std::abs(b.total_s * 1e6 - 32.334), 1e-3);
}

TEST(Latency, TwoHopsAddTransmissionAndTransfer) {
  ScenarioConfig c;
  const AssociationPath p = path_of({hop(0, 5, 100.0, 100e6), hop(5, 9, 100.0, 100e6)});
  auto b = latency_breakdown(p, c);
  EXPECT_NEAR(b.propagation_s, kPropagationTwoHops, 1e-24);
  EXPECT_NEAR(b.total_s, 64e-6 + kPropagationTwoHops, 1e-15);

  c.transfer_time_s = 1e-3;
  b = latency_breakdown(p, c);
  EXPECT_DOUBLE_EQ(b.transfer_s, 1e-3);
  EXPECT_NEAR(b.total_s, 64e-6 + kPropagationTwoHops + 1e-3, 1e-15);
}

TEST(Latency, ZeroPacketLeavesPropagationOnly) {
  ScenarioConfig c;
  c.packet_size_bits = 1e-300;  // validation requires > 0; effectively zero
  const AssociationPath p = path_of({hop(0, 1, 150.0, 50e6), hop(1, 2, 70.0, 10e6)});
  EXPECT_NEAR(path_latency(p, c), 220.0 / 299792458.0, 1e-18);
}

TEST(Latency, EqualCapacityReduces) {
  ScenarioConfig c;
  const double C = 37e6;
  const AssociationPath p = path_of({hop(0, 1, 40.0, C), hop(1, 2, 60.0, C), hop(2, 3, 80.0, C)});
  EXPECT_NEAR(path_latency(p, c), 180.0 / 299792458.0 + 3 * 2 * 1600.0 / C, 1e-15);
}

TEST(Latency, UnreliablePathIsDomainError) {
  ScenarioConfig c;
  EXPECT_THROW(path_latency(failed(0, 1, 1), c), DomainError);
}

TEST(Summary, PerVehicleReliability) {
  ScenarioConfig c;
  c.reliability_counting = ReliabilityCounting::PerVehicle;
  std::vector<AssociationPath> paths;
  for (std::uint32_t i = 0; i < 99; ++i) paths.push_back(path_of({hop(i, 1000, 50.0, 80e6)}));
  paths.push_back(failed(99, 2, 2));
  const MetricsSummary s = summarize(paths, c);
  EXPECT_DOUBLE_EQ(s.reliability_pct, 99.0);
  EXPECT_EQ(s.n_vehicles, 100);
  EXPECT_EQ(s.n_unreliable, 1);
  EXPECT_DOUBLE_EQ(s.pct_single_hop, 100.0);
  EXPECT_DOUBLE_EQ(s.pct_multi_hop, 0.0);
}

TEST(Summary, PerLinkReliability) {
  ScenarioConfig c;
  c.reliability_counting = ReliabilityCounting::PerLink;
  std::vector<AssociationPath> paths;
  AssociationPath relayed = path_of({hop(0, 1, 50.0, 80e6), hop(1, 9, 50.0, 80e6)});
  relayed.links_checked = 3;  // one failed direct check before the relay
  relayed.links_failed = 1;
  paths.push_back(relayed);
  paths.push_back(path_of({hop(2, 9, 20.0, 90e6)}));
  paths.push_back(failed(3, 2, 2));
  const MetricsSummary s = summarize(paths, c);
  EXPECT_EQ(s.links_total, 6);
  EXPECT_EQ(s.links_unreliable, 3);
  EXPECT_DOUBLE_EQ(s.reliability_pct, 50.0);
  EXPECT_DOUBLE_EQ(s.pct_multi_hop, 50.0);
}

TEST(Summary, BottleneckThroughput) {
  ScenarioConfig c;
  const std::vector<AssociationPath> paths{path_of({hop(0, 1, 50.0, 80e6), hop(1, 2, 50.0, 30e6)}),
                                           path_of({hop(3, 2, 50.0, 60e6)})};
  const MetricsSummary s = summarize(paths, c);
  ASSERT_EQ(s.throughput_samples_bps.size(), 2u);
  EXPECT_DOUBLE_EQ(s.throughput_samples_bps[0], 30e6);
  EXPECT_DOUBLE_EQ(s.throughput_bps.mean, 45e6);
}

TEST(Summary, LatencyQuantiles) {
  ScenarioConfig c;
  c.packet_size_bits = 1e-300;
  std::vector<AssociationPath> paths;
  for (int i = 1; i <= 21; ++i) paths.push_back(path_of({hop(i, 0, 299792458.0 * i * 1e-6, 1e8)}));
  const MetricsSummary s = summarize(paths, c);
  EXPECT_NEAR(s.latency_s.mean, 11e-6, 1e-15);
  EXPECT_NEAR(s.latency_s.median, 11e-6, 1e-15);
  EXPECT_NEAR(s.latency_s.p95, 20e-6, 1e-15);
}

TEST(Summary, AllUnreliableLeavesStatsUndefined) {
  ScenarioConfig c;
  const std::vector<AssociationPath> paths{failed(0, 1, 1), failed(1, 3, 2)};
  const MetricsSummary s = summarize(paths, c);
  EXPECT_TRUE(std::isnan(s.latency_s.mean));
  EXPECT_TRUE(std::isnan(s.pct_single_hop));
  EXPECT_TRUE(std::isnan(s.throughput_bps.mean));
}

TEST(Summary, EmptyInputThrows) {
  ScenarioConfig c;
  EXPECT_THROW(summarize({}, c), EmptySummary);
  EXPECT_THROW(merge({}), EmptySummary);
}

TEST(Summary, MergeIsOrderIndependent) {
  ScenarioConfig c;
  std::vector<MetricsSummary> parts;
  for (int t = 0; t < 5; ++t) {
    std::vector<AssociationPath> paths;
    for (int i = 0; i < 4 + t; ++i) paths.push_back(path_of({hop(i, 99, 10.0 + 7 * i + t, 1e7 * (1 + i))}));
    paths.push_back(failed(50, 1 + t, 1));
    parts.push_back(summarize(paths, c));
  }
  const MetricsSummary a = merge(parts);
  std::reverse(parts.begin(), parts.end());
  const MetricsSummary b = merge(parts);
  EXPECT_EQ(a.reliability_pct, b.reliability_pct);
  EXPECT_EQ(a.reliability_trial_mean_pct, b.reliability_trial_mean_pct);
  EXPECT_EQ(a.latency_s.mean, b.latency_s.mean);
  EXPECT_EQ(a.latency_s.p95, b.latency_s.p95);
  EXPECT_EQ(a.throughput_bps.mean, b.throughput_bps.mean);
  EXPECT_EQ(a.trial_count, 5);
  EXPECT_EQ(a.n_vehicles, 4 + 5 + 6 + 7 + 8 + 5);
}

TEST(SnrPdf, IntegratesToOne) {
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(std::sin(i * 0.37) * 20.0 + 25.0);
  const Histogram h = snr_pdf(xs, 1.0);
  EXPECT_NEAR(h.integral(), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(std::fmod(h.origin_db, 1.0), 0.0);
  EXPECT_LE(h.origin_db, 5.0);
}

TEST(SnrPdf, SingleSample) {
  const std::vector<double> xs{12.3};
  const Histogram h = snr_pdf(xs, 0.5);
  ASSERT_EQ(h.density.size(), 1u);
  EXPECT_DOUBLE_EQ(h.origin_db, 12.0);
  EXPECT_DOUBLE_EQ(h.density[0], 2.0);
  EXPECT_DOUBLE_EQ(h.bin_center(0), 12.25);
}

TEST(SnrPdf, UniformSamplesGiveFlatDensity) {
  std::vector<double> xs;
  for (int i = 0; i < 10000; ++i) xs.push_back(10.0 + 10.0 * (i + 0.5) / 10000.0);
  const Histogram h = snr_pdf(xs, 1.0);
  ASSERT_EQ(h.density.size(), 10u);
  for (double d : h.density) EXPECT_NEAR(d, 0.1, 1e-12);
}

TEST(SnrPdf, BadInputs) {
  EXPECT_THROW(snr_pdf({}, 1.0), EmptySummary);
  const std::vector<double> xs{1.0};
  EXPECT_THROW(snr_pdf(xs, 0.0), DomainError);
}

TEST(Stats, QuantileAndSignTest) {
  EXPECT_DOUBLE_EQ(stats::quantile({4, 1, 3, 2}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(stats::quantile({1, 2, 3, 4, 5}, 0.95), 4.8);
  EXPECT_TRUE(std::isnan(stats::mean(std::vector<double>{})));
  EXPECT_NEAR(stats::stddev(std::vector<double>{2, 4, 4, 4, 5, 5, 7, 9}), 2.138089935, 1e-9);
  EXPECT_DOUBLE_EQ(stats::binomial_half_upper_tail(10, 10), std::pow(0.5, 10));
  EXPECT_NEAR(stats::binomial_half_upper_tail(10, 8), 56.0 / 1024.0, 1e-15);
  const std::vector<double> before{1, 2, 3, 4, 5, 6}, after{2, 3, 4, 5, 6, 6};
  const auto t = stats::sign_test(before, after);
  EXPECT_EQ(t.n_greater, 5);
  EXPECT_EQ(t.n_ties, 1);
  EXPECT_DOUBLE_EQ(t.p_greater, std::pow(0.5, 5));
  EXPECT_DOUBLE_EQ(t.p_less, 1.0);
}
