#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "uavsem/channel.hpp"
#include "uavsem/geometry.hpp"
#include "uavsem/rng.hpp"

namespace uavsem {

// Everything a predictor may look at. Individual predictors ignore what
// they do not need, so implementations stay interchangeable in the
// harness.
struct PredictorInput {
  std::vector<double> history_snr_db;   // M >= 1 observations
  std::vector<Vec3> history_traj;       // matching UAV positions
  std::vector<Vec3> planned_traj;       // K future waypoints
  std::optional<double> shadowing_estimate_db;

  void validate() const {
    if (history_snr_db.empty())
      throw std::invalid_argument("predictor input: empty SNR history");
    if (planned_traj.empty())
      throw std::invalid_argument("predictor input: empty planned trajectory");
  }
};

// Predicted SNR sequence over the horizon plus the derived usable flags.
// usable[k] is always snr_db[k] >= gamma_min_db; construct through
// make_predicted_trace to keep that invariant.
struct PredictedTrace {
  std::vector<double> snr_db;
  std::vector<bool> usable;
  double gamma_min_db = 0.0;

  std::size_t horizon() const { return snr_db.size(); }
};

inline PredictedTrace make_predicted_trace(std::vector<double> snr_db,
                                           double gamma_min_db) {
  PredictedTrace pred;
  pred.gamma_min_db = gamma_min_db;
  pred.usable.reserve(snr_db.size());
  for (double s : snr_db) pred.usable.push_back(s >= gamma_min_db);
  pred.snr_db = std::move(snr_db);
  return pred;
}

// Mismatch model of the experiments: predicted SNR is the realized SNR
// plus i.i.d. zero-mean Gaussian error of std sigma_err (dB domain).
// sigma_err = 0 is perfect CSI.
inline PredictedTrace predict_noisy_oracle(const ChannelTrace& trace,
                                           double sigma_err_db,
                                           double gamma_min_db,
                                           std::uint64_t seed) {
  if (!(sigma_err_db >= 0.0))
    throw std::invalid_argument("noisy oracle: sigma_err must be >= 0");
  Rng rng(seed);
  std::vector<double> snr;
  snr.reserve(trace.slots.size());
  for (const auto& slot : trace.slots)
    snr.push_back(slot.snr_db + rng.normal(0.0, sigma_err_db));
  return make_predicted_trace(std::move(snr), gamma_min_db);
}

// Model-based predictor: deterministic geometry, state and path loss from
// the planned trajectory; shadowing forecast decays geometrically from the
// supplied estimate (zero when absent) by the per-slot AR coefficient.
inline PredictedTrace predict_geometric(const PredictorInput& input,
                                        const EnvironmentParams& env,
                                        double slot_duration_s,
                                        std::optional<double> link_budget_db =
                                            std::nullopt) {
  input.validate();
  env.validate();
  const double budget_db = link_budget_db.value_or(env.link_budget_db());

  TrajectoryPlan plan;
  plan.waypoints = input.planned_traj;
  plan.slot_duration_s = slot_duration_s;
  plan.validate();
  const std::vector<double> speeds = plan.effective_speeds();

  const double chi_est = input.shadowing_estimate_db.value_or(0.0);
  double decay = 1.0;
  std::vector<double> snr;
  snr.reserve(plan.horizon());
  for (std::size_t j = 0; j < plan.horizon(); ++j) {
    const GeometrySample g = distance_and_elevation(plan, j);
    const ChannelState state = los_state(g.elevation_rad, env);
    const double pl = path_loss_db(g.distance_m, state, env);
    decay *= correlation_coefficient(speeds[j], slot_duration_s, env);
    const double chi_hat = decay * chi_est;
    snr.push_back(budget_db - (pl + chi_hat));
  }
  return make_predicted_trace(std::move(snr), env.snr_threshold_db);
}

}  // namespace uavsem
