#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "uavsem/geometry.hpp"
#include "uavsem/rng.hpp"

namespace uavsem {

inline constexpr double kSpeedOfLightMps = 299792458.0;

enum class ChannelState { kLos, kNlos };

inline const char* to_string(ChannelState s) {
  return s == ChannelState::kLos ? "LOS" : "NLOS";
}

enum class CorrelationMode { kFixed, kSpeedDerived };

// Air-to-ground propagation environment plus the link-budget terms.
// Angles are radians; the logistic slope is per radian.
struct EnvironmentParams {
  double carrier_freq_hz = 2.4e9;
  double excess_loss_los_db = 1.0;
  double excess_loss_nlos_db = 20.0;
  double shadow_std_los_db = 2.0;
  double shadow_std_nlos_db = 4.0;
  double elevation_threshold_rad = 0.5235987755982988;  // 30 deg
  double logistic_alpha = 9.61;
  double logistic_beta = 9.167324722093171;        // 0.16 per degree
  double logistic_theta0_rad = 0.16772614111665507;  // 9.61 deg
  double decorrelation_distance_m = 50.0;
  CorrelationMode correlation_mode = CorrelationMode::kFixed;
  double fixed_rho = 0.9;
  double tx_power_w = 0.1;
  double noise_density_w_per_hz = 3.9810717055349565e-21;  // -174 dBm/Hz
  double bandwidth_hz = 1.0e6;
  double snr_threshold_db = 5.0;

  // P_t / (N_0 B) in dB; path loss is subtracted from this to get SNR.
  double link_budget_db() const {
    return 10.0 * std::log10(tx_power_w / (noise_density_w_per_hz * bandwidth_hz));
  }

  double shadow_std_db(ChannelState s) const {
    return s == ChannelState::kLos ? shadow_std_los_db : shadow_std_nlos_db;
  }
  double excess_loss_db(ChannelState s) const {
    return s == ChannelState::kLos ? excess_loss_los_db : excess_loss_nlos_db;
  }

  void validate() const {
    if (!(carrier_freq_hz > 0.0)) throw std::invalid_argument("env: carrier_freq_hz <= 0");
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("env: bandwidth_hz <= 0");
    if (!(tx_power_w > 0.0)) throw std::invalid_argument("env: tx_power_w <= 0");
    if (!(noise_density_w_per_hz > 0.0))
      throw std::invalid_argument("env: noise_density_w_per_hz <= 0");
    if (!(decorrelation_distance_m > 0.0))
      throw std::invalid_argument("env: decorrelation_distance_m <= 0");
    if (shadow_std_los_db < 0.0 || shadow_std_nlos_db < 0.0)
      throw std::invalid_argument("env: negative shadowing std");
    if (excess_loss_nlos_db < excess_loss_los_db)
      throw std::invalid_argument("env: NLOS excess loss below LOS excess loss");
    if (elevation_threshold_rad < 0.0 ||
        elevation_threshold_rad > 1.5707963267948966)
      throw std::invalid_argument("env: elevation threshold outside [0, pi/2]");
    if (correlation_mode == CorrelationMode::kFixed &&
        (fixed_rho < 0.0 || fixed_rho >= 1.0))
      throw std::invalid_argument("env: fixed rho outside [0, 1)");
  }
};

// Logistic LOS probability as a function of elevation. Exposed as a
// utility; the realized state process below uses the hard threshold.
inline double los_probability(double elevation_rad, const EnvironmentParams& env) {
  return 1.0 / (1.0 + env.logistic_alpha *
                          std::exp(-env.logistic_beta *
                                   (elevation_rad - env.logistic_theta0_rad)));
}

// Threshold state model: LOS iff elevation >= threshold (inclusive).
inline ChannelState los_state(double elevation_rad, const EnvironmentParams& env) {
  return elevation_rad >= env.elevation_threshold_rad ? ChannelState::kLos
                                                      : ChannelState::kNlos;
}

// Free-space loss plus the state-dependent excess term, in dB.
inline double path_loss_db(double distance_m, ChannelState state,
                           const EnvironmentParams& env) {
  if (!(distance_m > 0.0)) throw std::domain_error("path loss: distance must be > 0");
  const double fspl =
      20.0 * std::log10(4.0 * std::numbers::pi * env.carrier_freq_hz * distance_m /
                        kSpeedOfLightMps);
  return fspl + env.excess_loss_db(state);
}

// AR(1) correlation coefficient. Fixed mode ignores the speed.
inline double correlation_coefficient(double speed_mps, double slot_duration_s,
                                      const EnvironmentParams& env) {
  if (env.correlation_mode == CorrelationMode::kFixed) return env.fixed_rho;
  if (!(speed_mps >= 0.0)) throw std::invalid_argument("correlation: negative speed");
  if (!(slot_duration_s > 0.0))
    throw std::invalid_argument("correlation: non-positive slot duration");
  return std::exp(-speed_mps * slot_duration_s / env.decorrelation_distance_m);
}

// One AR(1) step: chi_k = rho * chi_{k-1} + sqrt(1 - rho^2) * xi, with the
// innovation drawn at the current slot's state variance. Stationary
// marginal variance equals sigma_state^2 when the state is constant.
inline double step_shadowing(double chi_prev_db, double rho, ChannelState state,
                             const EnvironmentParams& env, Rng& rng) {
  const double sigma = env.shadow_std_db(state);
  const double innovation = rng.normal(0.0, sigma);
  return rho * chi_prev_db + std::sqrt(1.0 - rho * rho) * innovation;
}

// Geometry and large-scale attenuation for one slot; everything that does
// not depend on the link budget.
struct SlotLoss {
  double distance_m = 0.0;
  double elevation_rad = 0.0;
  ChannelState state = ChannelState::kLos;
  double path_loss_db = 0.0;
  double shadowing_db = 0.0;
  double total_loss_db = 0.0;
};

struct SlotChannel {
  double distance_m = 0.0;
  double elevation_rad = 0.0;
  ChannelState state = ChannelState::kLos;
  double path_loss_db = 0.0;
  double shadowing_db = 0.0;
  double total_loss_db = 0.0;
  double gain_sq = 0.0;  // 10^(-L/10)
  double snr_db = 0.0;
  double snr_linear = 0.0;
  bool usable = false;
};

struct ChannelTrace {
  std::vector<SlotChannel> slots;
  double link_budget_db = 0.0;
  double gamma_min_db = 0.0;

  std::size_t horizon() const { return slots.size(); }
};

// Realizes geometry -> state -> path loss -> shadowing for every slot.
// chi_0 is drawn from the stationary distribution N(0, sigma_{o_1}^2), so
// the process starts without a burn-in transient. Draw order: chi_0 first,
// then one innovation per slot.
inline std::vector<SlotLoss> realize_loss_trace(const TrajectoryPlan& traj,
                                                const EnvironmentParams& env,
                                                std::uint64_t seed) {
  traj.validate();
  env.validate();
  const std::size_t horizon = traj.horizon();
  const std::vector<double> speeds = traj.effective_speeds();

  std::vector<SlotLoss> slots(horizon);
  for (std::size_t k = 0; k < horizon; ++k) {
    auto& s = slots[k];
    const GeometrySample g = distance_and_elevation(traj, k);
    s.distance_m = g.distance_m;
    s.elevation_rad = g.elevation_rad;
    s.state = los_state(g.elevation_rad, env);
    s.path_loss_db = path_loss_db(g.distance_m, s.state, env);
  }

  Rng rng(seed);
  double chi = rng.normal(0.0, env.shadow_std_db(slots[0].state));
  for (std::size_t k = 0; k < horizon; ++k) {
    const double rho = correlation_coefficient(speeds[k], traj.slot_duration_s, env);
    chi = step_shadowing(chi, rho, slots[k].state, env, rng);
    slots[k].shadowing_db = chi;
    slots[k].total_loss_db = slots[k].path_loss_db + chi;
  }
  return slots;
}

inline double mean_total_loss_db(const std::vector<SlotLoss>& slots) {
  double sum = 0.0;
  for (const auto& s : slots) sum += s.total_loss_db;
  return sum / static_cast<double>(slots.size());
}

// Applies P_t/(N_0 B) to a loss trace: gain, SNR (dB is canonical,
// linear kept alongside) and the usability flag (>= is inclusive).
inline ChannelTrace apply_link_budget(const std::vector<SlotLoss>& losses,
                                      double link_budget_db, double gamma_min_db) {
  ChannelTrace trace;
  trace.link_budget_db = link_budget_db;
  trace.gamma_min_db = gamma_min_db;
  trace.slots.reserve(losses.size());
  for (const auto& l : losses) {
    SlotChannel s;
    s.distance_m = l.distance_m;
    s.elevation_rad = l.elevation_rad;
    s.state = l.state;
    s.path_loss_db = l.path_loss_db;
    s.shadowing_db = l.shadowing_db;
    s.total_loss_db = l.total_loss_db;
    s.gain_sq = std::pow(10.0, -l.total_loss_db / 10.0);
    s.snr_db = link_budget_db - l.total_loss_db;
    s.snr_linear = std::pow(10.0, s.snr_db / 10.0);
    s.usable = s.snr_db >= gamma_min_db;
    trace.slots.push_back(s);
  }
  return trace;
}

// Full per-slot channel realization. Pure function of (traj, env, seed).
inline ChannelTrace realize_trace(const TrajectoryPlan& traj,
                                  const EnvironmentParams& env,
                                  std::uint64_t seed) {
  return apply_link_budget(realize_loss_trace(traj, env, seed),
                           env.link_budget_db(), env.snr_threshold_db);
}

inline double mean_realized_snr_db(const ChannelTrace& trace) {
  double sum = 0.0;
  for (const auto& s : trace.slots) sum += s.snr_db;
  return sum / static_cast<double>(trace.slots.size());
}

}  // namespace uavsem
