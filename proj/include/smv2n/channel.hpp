#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "smv2n/config.hpp"
#include "smv2n/errors.hpp"
#include "smv2n/rng.hpp"
#include "smv2n/topology.hpp"

namespace smv2n {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kMinModelDistance2d = 10.0;     // m
inline constexpr double kMaxModelDistance2d = 5000.0;   // m

/// UMi street-canyon parameters for one link. The NLOS height correction is
/// applied to the lower of the two terminals (the user terminal).
struct PathLossParams {
  double fc_ghz = 5.9;
  double h_tx_m = 1.5;
  double h_rx_m = 1.5;
  double h_e_m = 1.0;
  double sigma_sf_los_db = 4.0;
  double sigma_sf_nlos_db = 7.82;

  double h_ut_m() const { return std::min(h_tx_m, h_rx_m); }
};

enum class FadingBranch { LOS, NLOS };

inline double breakpoint_distance(const PathLossParams& p) {
  const double eff_tx = p.h_tx_m - p.h_e_m;
  const double eff_rx = p.h_rx_m - p.h_e_m;
  if (!(eff_tx > 0.0) || !(eff_rx > 0.0)) {
    throw DomainError("breakpoint distance undefined: antenna height must exceed the effective environment height");
  }
  if (!(p.fc_ghz > 0.0)) throw DomainError("carrier frequency must be > 0");
  return 4.0 * eff_tx * eff_rx * (p.fc_ghz * 1e9) / kSpeedOfLight;
}

// LOS before the breakpoint.
inline double pl_los_near(double d3d_m, double fc_ghz) {
  return 32.4 + 21.0 * std::log10(d3d_m) + 20.0 * std::log10(fc_ghz);
}

// LOS beyond the breakpoint.
inline double pl_los_far(double d3d_m, double fc_ghz, double breakpoint_m, double h_tx_m, double h_rx_m) {
  const double dh = h_tx_m - h_rx_m;
  return 32.4 + 40.0 * std::log10(d3d_m) + 20.0 * std::log10(fc_ghz) -
         9.5 * std::log10(breakpoint_m * breakpoint_m + dh * dh);
}

inline double pl_nlos_prime(double d3d_m, double fc_ghz, double h_ut_m) {
  return 35.3 * std::log10(d3d_m) + 22.4 + 21.3 * std::log10(fc_ghz) - 0.3 * (h_ut_m - 1.5);
}

/// Every intermediate of one path-loss evaluation, all in dB.
struct PathLossTerms {
  double d2d_eval_m = 0.0;  // after clamping to the model minimum
  double d3d_eval_m = 0.0;
  double breakpoint_m = 0.0;
  double los_db = 0.0;
  double nlos_prime_db = 0.0;
  double nlos_db = 0.0;   // max(LOS, NLOS')
  double total_db = 0.0;  // max(LOS, NLOS), fading excluded
  FadingBranch branch = FadingBranch::NLOS;
};

/// Pre-fading UMi street-canyon path loss. 2D distances under 10 m are
/// evaluated at 10 m (with the same height difference).
inline PathLossTerms pathloss_umi(double d2d_m, double d3d_m, const PathLossParams& p) {
  if (!(d2d_m >= 0.0)) throw DomainError("2D distance must be >= 0");
  if (d2d_m > kMaxModelDistance2d) {
    throw OutOfModelRange("2D distance " + std::to_string(d2d_m) + " m exceeds the 5 km model range");
  }
  PathLossTerms t;
  const double dh2 = std::max(0.0, d3d_m * d3d_m - d2d_m * d2d_m);
  t.d2d_eval_m = std::max(d2d_m, kMinModelDistance2d);
  t.d3d_eval_m = t.d2d_eval_m == d2d_m ? d3d_m : std::sqrt(t.d2d_eval_m * t.d2d_eval_m + dh2);
  t.breakpoint_m = breakpoint_distance(p);
  t.los_db = t.d2d_eval_m <= t.breakpoint_m
                 ? pl_los_near(t.d3d_eval_m, p.fc_ghz)
                 : pl_los_far(t.d3d_eval_m, p.fc_ghz, t.breakpoint_m, p.h_tx_m, p.h_rx_m);
  t.nlos_prime_db = pl_nlos_prime(t.d3d_eval_m, p.fc_ghz, p.h_ut_m());
  t.nlos_db = std::max(t.los_db, t.nlos_prime_db);
  t.total_db = std::max(t.los_db, t.nlos_db);
  t.branch = t.nlos_prime_db > t.los_db ? FadingBranch::NLOS : FadingBranch::LOS;
  return t;
}

inline double shadow_sigma_db(const PathLossParams& p, FadingBranch branch) {
  return branch == FadingBranch::LOS ? p.sigma_sf_los_db : p.sigma_sf_nlos_db;
}

template <class Engine>
double draw_shadow_fading(const PathLossParams& p, FadingBranch branch, Engine& rng) {
  std::normal_distribution<double> sf(0.0, shadow_sigma_db(p, branch));
  return sf(rng);
}

/// Shannon capacity in bit/s.
inline double capacity(double snr_linear, double bandwidth_hz) {
  if (!(snr_linear >= 0.0)) throw DomainError("SNR must be >= 0 for capacity");
  return bandwidth_hz * std::log2(1.0 + snr_linear);
}

inline double noise_power_dbm(double noise_density_dbm_hz, double bandwidth_hz) {
  return noise_density_dbm_hz + 10.0 * std::log10(bandwidth_hz);
}

struct LinkBudget {
  NodeId tx_id;
  NodeId rx_id;
  double d2d_m = 0.0;
  double d3d_m = 0.0;
  double pl_db = 0.0;
  double sf_db = 0.0;
  double pr_dbm = 0.0;
  double snr_linear = 0.0;
  double snr_db = 0.0;
  double capacity_bps = 0.0;
  bool reliable = false;
  double sensitivity_used_dbm = 0.0;
};

inline double distance_2d(const Node& a, const Node& b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double distance_3d(const Node& a, const Node& b) {
  const double dh = a.height_m - b.height_m;
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + dh * dh);
}

/// V2V threshold between two vehicles, BS threshold when either end is a
/// base station, V2I threshold otherwise.
inline double sensitivity_for(const Node& tx, const Node& rx, const ScenarioConfig& c) {
  if (tx.role == Role::BaseStation || rx.role == Role::BaseStation) return c.sensitivity_bs_dbm;
  if (tx.is_infrastructure() || rx.is_infrastructure()) return c.sensitivity_v2i_dbm;
  return c.sensitivity_v2v_dbm;
}

inline PathLossParams params_for(const Node& tx, const Node& rx, const ScenarioConfig& c) {
  PathLossParams p;
  p.fc_ghz = c.carrier_freq_ghz;
  p.h_tx_m = tx.height_m;
  p.h_rx_m = rx.height_m;
  return p;
}

namespace detail {

template <class Engine>
double received_power_dbm(const Node& tx, const Node& rx, const ScenarioConfig& config, Engine& rng,
                          LinkBudget* out) {
  const double d2d = distance_2d(tx, rx);
  const double d3d = distance_3d(tx, rx);
  const PathLossParams params = params_for(tx, rx, config);
  const PathLossTerms terms = pathloss_umi(d2d, d3d, params);
  const double sf = draw_shadow_fading(params, terms.branch, rng);
  const double pr = config.tx_power_dbm - (terms.total_db + sf);
  if (out) {
    out->d2d_m = d2d;
    out->d3d_m = d3d;
    out->pl_db = terms.total_db;
    out->sf_db = sf;
  }
  return pr;
}

}  // namespace detail

template <class Engine>
LinkBudget link_budget(const Node& tx, const Node& rx, const ScenarioConfig& config, Engine& rng) {
  LinkBudget lb;
  lb.tx_id = tx.id;
  lb.rx_id = rx.id;
  lb.pr_dbm = detail::received_power_dbm(tx, rx, config, rng, &lb);
  lb.snr_db = lb.pr_dbm - config.noise_power_dbm();
  lb.snr_linear = std::pow(10.0, lb.snr_db / 10.0);
  lb.capacity_bps = capacity(lb.snr_linear, config.bandwidth_hz);
  lb.sensitivity_used_dbm = sensitivity_for(tx, rx, config);
  lb.reliable = lb.pr_dbm > lb.sensitivity_used_dbm;
  return lb;
}

/// Per-trial channel. The fading draw for a directed pair is a pure function
/// of (fading_seed, tx, rx), so every query of the same link returns the same
/// LinkBudget regardless of evaluation order or thread.
class ChannelModel {
 public:
  ChannelModel(const ScenarioConfig& config, std::uint64_t fading_seed)
      : config_(&config), fading_seed_(fading_seed) {}

  LinkBudget link(const Node& tx, const Node& rx) const {
    SplitMix64Engine rng = engine_for(tx, rx);
    return link_budget(tx, rx, *config_, rng);
  }

  /// Same value as link(tx, rx).snr_db without the capacity bookkeeping.
  double snr_db(const Node& tx, const Node& rx) const {
    SplitMix64Engine rng = engine_for(tx, rx);
    return detail::received_power_dbm(tx, rx, *config_, rng, nullptr) - config_->noise_power_dbm();
  }

  const ScenarioConfig& config() const { return *config_; }
  std::uint64_t fading_seed() const { return fading_seed_; }

 private:
  SplitMix64Engine engine_for(const Node& tx, const Node& rx) const {
    return SplitMix64Engine(derive_seed({fading_seed_, stream::kFading, tx.id.value, rx.id.value}));
  }

  const ScenarioConfig* config_;
  std::uint64_t fading_seed_;
};

}  // namespace smv2n
