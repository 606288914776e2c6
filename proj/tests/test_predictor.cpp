#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "uavsem/predictor.hpp"

using namespace uavsem;
using Catch::Approx;

namespace {

ChannelTrace synthetic_trace(std::size_t slots, double snr_db) {
  ChannelTrace trace;
  trace.link_budget_db = 100.0;
  trace.gamma_min_db = 5.0;
  trace.slots.resize(slots);
  for (auto& s : trace.slots) s.snr_db = snr_db;
  return trace;
}

}  // namespace

TEST_CASE("noisy oracle with zero error is perfect CSI") {
  const ChannelTrace trace = synthetic_trace(10, 12.5);
  const PredictedTrace pred = predict_noisy_oracle(trace, 0.0, 5.0, 3);
  REQUIRE(pred.snr_db.size() == 10);
  for (double s : pred.snr_db) CHECK(s == 12.5);
  for (bool u : pred.usable) CHECK(u);
}

TEST_CASE("noisy oracle is deterministic in the seed") {
  const ChannelTrace trace = synthetic_trace(50, 10.0);
  const PredictedTrace a = predict_noisy_oracle(trace, 4.0, 5.0, 77);
  const PredictedTrace b = predict_noisy_oracle(trace, 4.0, 5.0, 77);
  CHECK(a.snr_db == b.snr_db);
}

TEST_CASE("noisy oracle error statistics") {
  const std::size_t n = 100000;
  const ChannelTrace trace = synthetic_trace(n, 15.0);
  const PredictedTrace pred = predict_noisy_oracle(trace, 10.0, 5.0, 123);
  std::vector<double> errors(n);
  for (std::size_t k = 0; k < n; ++k) errors[k] = pred.snr_db[k] - 15.0;
  const auto stats = oracles::series_stats(errors);
  CHECK(stats.mean == Approx(0.0).margin(0.1));                      // unbiased
  CHECK(std::sqrt(stats.variance) == Approx(10.0).epsilon(0.02));    // +/- 2%
}

TEST_CASE("predicted usability derives from the threshold") {
  PredictedTrace pred = make_predicted_trace({4.9, 5.0, 5.1, -20.0}, 5.0);
  CHECK(pred.usable == std::vector<bool>{false, true, true, false});
}

TEST_CASE("geometric predictor matches the channel when shadowing is off") {
  EnvironmentParams env;
  env.shadow_std_los_db = 0.0;
  env.shadow_std_nlos_db = 0.0;
  TrajectoryPlan traj;
  for (int k = 0; k < 10; ++k)
    traj.waypoints.push_back({-300.0 + 50.0 * k, 0.0, 100.0});

  const ChannelTrace trace = realize_trace(traj, env, 9);
  PredictorInput input;
  input.history_snr_db = {trace.slots.front().snr_db};
  input.history_traj = {traj.waypoints.front()};
  input.planned_traj = traj.waypoints;
  const PredictedTrace pred =
      predict_geometric(input, env, traj.slot_duration_s, trace.link_budget_db);

  REQUIRE(pred.snr_db.size() == trace.slots.size());
  for (std::size_t k = 0; k < trace.slots.size(); ++k)
    CHECK(pred.snr_db[k] == Approx(trace.slots[k].snr_db).margin(1e-12));
}

TEST_CASE("geometric predictor decays the shadowing estimate") {
  EnvironmentParams env;  // fixed rho = 0.9
  TrajectoryPlan traj;
  for (int k = 0; k < 4; ++k) traj.waypoints.push_back({0, 0, 150});

  PredictorInput with, without;
  with.history_snr_db = without.history_snr_db = {0.0};
  with.history_traj = without.history_traj = {traj.waypoints.front()};
  with.planned_traj = without.planned_traj = traj.waypoints;
  with.shadowing_estimate_db = 8.0;

  const PredictedTrace a = predict_geometric(with, env, 1.0, 100.0);
  const PredictedTrace b = predict_geometric(without, env, 1.0, 100.0);
  // Single slot j ahead: chi_hat = rho^j * 8 -> 7.2, 6.48, 5.832, ...
  CHECK(b.snr_db[0] - a.snr_db[0] == Approx(7.2));
  CHECK(b.snr_db[1] - a.snr_db[1] == Approx(6.48));
  CHECK(b.snr_db[2] - a.snr_db[2] == Approx(5.832));
}

TEST_CASE("planned slots below the elevation threshold predict NLOS loss") {
  EnvironmentParams env;
  env.shadow_std_los_db = 0.0;
  env.shadow_std_nlos_db = 0.0;
  TrajectoryPlan traj;
  traj.waypoints = {{0, 0, 100}, {500, 0, 100}};  // second slot far out: NLOS

  PredictorInput input;
  input.history_snr_db = {0.0};
  input.history_traj = {traj.waypoints.front()};
  input.planned_traj = traj.waypoints;
  const PredictedTrace pred = predict_geometric(input, env, 1.0, 100.0);

  const GeometrySample g = distance_and_elevation(traj, 1);
  REQUIRE(los_state(g.elevation_rad, env) == ChannelState::kNlos);
  const double expected = 100.0 - path_loss_db(g.distance_m, ChannelState::kNlos, env);
  CHECK(pred.snr_db[1] == Approx(expected));
}

TEST_CASE("predictor input validation") {
  PredictorInput input;
  input.planned_traj = {{0, 0, 100}};
  CHECK_THROWS_AS(input.validate(), std::invalid_argument);  // empty history
  input.history_snr_db = {1.0};
  CHECK_NOTHROW(input.validate());
}
