#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "uavsem/channel.hpp"
#include "uavsem/codec.hpp"
#include "uavsem/config.hpp"
#include "uavsem/metrics.hpp"
#include "uavsem/phy.hpp"
#include "uavsem/predictor.hpp"
#include "uavsem/report.hpp"
#include "uavsem/scheduler.hpp"

namespace uavsem {

inline constexpr const char* kVersion = "0.1.0";

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Method { kProposed, kUniformSched, kNoGeneration, kSingleStream };
enum class PredictorKind { kNoisyOracle, kGeometric };
enum class SweepVariable { kSnrDb, kSigmaErrDb };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::kProposed: return "proposed";
    case Method::kUniformSched: return "uniform_sched";
    case Method::kNoGeneration: return "no_generation";
    case Method::kSingleStream: return "single_stream";
  }
  return "?";
}

inline Method parse_method(const std::string& name) {
  if (name == "proposed") return Method::kProposed;
  if (name == "uniform_sched") return Method::kUniformSched;
  if (name == "no_generation") return Method::kNoGeneration;
  if (name == "single_stream") return Method::kSingleStream;
  throw ConfigError("unknown method: " + name);
}

// Default scenario: a 10-slot flyby at 100 m altitude past the ground
// user. The first three slots sit below the elevation threshold (NLOS),
// so default traces contain outage slots at moderate link budgets.
inline TrajectoryPlan default_trajectory() {
  TrajectoryPlan traj;
  traj.ground_user = {0.0, 0.0, 0.0};
  traj.slot_duration_s = 1.0;
  for (int k = 0; k < 10; ++k)
    traj.waypoints.push_back({-300.0 + 50.0 * k, 0.0, 100.0});
  return traj;
}

struct ExperimentConfig {
  EnvironmentParams env;
  TrajectoryPlan traj = default_trajectory();
  CodecProfile profile;
  int n_tot = 512;
  SlotOrder slot_order = SlotOrder::kSnrDescending;
  PredictorKind predictor = PredictorKind::kNoisyOracle;
  double sigma_err_db = 0.0;
  Method method = Method::kProposed;
  int trials = 200;
  std::uint64_t seed = 1;
  std::string corpus_dir = "assets/corpus";
  std::optional<double> target_mean_snr_db;  // per-trace link-budget calibration
  SweepVariable sweep_variable = SweepVariable::kSnrDb;
  std::vector<double> sweep_grid;  // empty => default grid for the variable
  double mismatch_mean_snr_db = 15.0;
  std::vector<Method> sweep_methods{Method::kProposed, Method::kUniformSched,
                                    Method::kNoGeneration, Method::kSingleStream};
  int threads = 0;  // 0 => hardware concurrency

  void validate() const {
    env.validate();
    traj.validate();
    if (n_tot < 1) throw ConfigError("n_tot must be >= 1");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (profile.width % kTextureGridSize != 0 ||
        profile.height % kTextureGridSize != 0)
      throw ConfigError("image dimensions must be divisible by the texture grid");
  }

  std::vector<double> effective_grid() const {
    if (!sweep_grid.empty()) return sweep_grid;
    if (sweep_variable == SweepVariable::kSnrDb) return {5, 10, 15, 20, 25};
    return {0, 2, 4, 6, 8, 10};
  }
};

// Per-trial report row.
struct TrialResult {
  int trial_index = 0;
  double psnr_db = 0.0;
  bool psnr_infinite = false;
  double ssim = 0.0;
  int blocks_delivered = 0;
  int blocks_erased = 0;
  int blocks_unscheduled = 0;
  bool structure_lost = false;
  int samples_transmitted = 0;
  int outage_slots = 0;  // slots whose realized SNR fell below gamma_min
  double mean_realized_snr_db = 0.0;
  std::vector<int> per_slot_budget;
  std::vector<int> per_slot_used;
};

// Deterministic per-image work shared by every trial: the block encode
// and the single-stream encode of the same image.
struct PreparedImage {
  ImageBuffer image;
  BlockSet blocks;
  std::vector<float> global_stream;
};

inline PreparedImage prepare_image(ImageBuffer image, const CodecProfile& profile,
                                   int n_tot) {
  PreparedImage prep;
  prep.blocks = encode(image, profile);
  prep.global_stream = encode_global_stream(image, n_tot);
  prep.image = std::move(image);
  return prep;
}

// Loads every .png/.ppm in a directory, sorted by filename.
inline std::vector<PreparedImage> load_corpus(const std::filesystem::path& dir,
                                              const CodecProfile& profile,
                                              int n_tot) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::is_directory(dir))
    throw ConfigError("corpus directory not found: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".png" || ext == ".ppm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("corpus directory is empty: " + dir.string());
  std::vector<PreparedImage> corpus;
  corpus.reserve(files.size());
  for (const auto& f : files)
    corpus.push_back(prepare_image(load_image(f), profile, n_tot));
  return corpus;
}

namespace detail {

// Master-seed stream tags for the independent per-trial randomness
// consumers (channel shadowing, predictor noise, PHY noise).
inline constexpr std::uint64_t kChannelStream = 0x6368616eULL;
inline constexpr std::uint64_t kPredictorStream = 0x70726564ULL;
inline constexpr std::uint64_t kPhyStream = 0x706879ULL;

struct TrialContext {
  ChannelTrace trace;
  std::uint64_t phy_seed = 0;
};

inline TrialContext realize_trial_channel(const ExperimentConfig& cfg,
                                          std::uint64_t trial_seed) {
  const auto losses =
      realize_loss_trace(cfg.traj, cfg.env, derive_seed(trial_seed, kChannelStream));
  double budget_db = cfg.env.link_budget_db();
  if (cfg.target_mean_snr_db.has_value()) {
    // Per-trace calibration: the slot-mean realized SNR in dB equals the
    // target exactly, since snr_db = budget_db - loss_db slot by slot.
    budget_db = *cfg.target_mean_snr_db + mean_total_loss_db(losses);
  }
  if (!std::isfinite(budget_db))
    throw CalibrationError("link budget calibration produced a non-finite value");
  TrialContext ctx;
  ctx.trace = apply_link_budget(losses, budget_db, cfg.env.snr_threshold_db);
  ctx.phy_seed = derive_seed(trial_seed, kPhyStream);
  return ctx;
}

inline PredictedTrace predict(const ExperimentConfig& cfg, const ChannelTrace& trace,
                              std::uint64_t trial_seed) {
  if (cfg.predictor == PredictorKind::kNoisyOracle) {
    return predict_noisy_oracle(trace, cfg.sigma_err_db, cfg.env.snr_threshold_db,
                                derive_seed(trial_seed, kPredictorStream));
  }
  PredictorInput input;
  input.history_snr_db = {trace.slots.front().snr_db};
  input.history_traj = {cfg.traj.waypoints.front()};
  input.planned_traj = cfg.traj.waypoints;
  return predict_geometric(input, cfg.env, cfg.traj.slot_duration_s,
                           trace.link_budget_db);
}

inline const std::vector<float>& block_symbols(const BlockSet& blocks, int id) {
  return id == 0 ? blocks.structure : blocks.textures[id - 1];
}

}  // namespace detail

// One end-to-end trial: channel -> prediction -> allocation/scheduling ->
// per-slot transmission -> assembly -> completion -> decode -> metrics.
// A horizon with no predicted-usable slot is reported as an outage trial,
// not an error.
inline TrialResult run_trial(const ExperimentConfig& cfg, const PreparedImage& prep,
                             std::uint64_t trial_seed, int trial_index = 0) {
  const std::size_t horizon = cfg.traj.horizon();
  const double gamma_min = cfg.env.snr_threshold_db;
  const auto ctx = detail::realize_trial_channel(cfg, trial_seed);

  TrialResult result;
  result.trial_index = trial_index;
  result.mean_realized_snr_db = mean_realized_snr_db(ctx.trace);
  for (const auto& slot : ctx.trace.slots)
    if (!slot.usable) result.outage_slots += 1;

  if (cfg.method == Method::kSingleStream) {
    // Channel-agnostic baseline: one coefficient stream striped evenly
    // across all K slots with a single power normalization; whatever
    // lands in a realized-outage slot is lost.
    const std::vector<float>& stream = prep.global_stream;
    const int base = static_cast<int>(stream.size()) / static_cast<int>(horizon);
    int remainder = static_cast<int>(stream.size()) - base * static_cast<int>(horizon);
    const double scale = block_rms(stream);

    std::vector<float> received(stream.size(), 0.0f);
    std::size_t offset = 0;
    result.per_slot_budget.assign(horizon, 0);
    result.per_slot_used.assign(horizon, 0);
    for (std::size_t k = 0; k < horizon; ++k) {
      const int chunk = base + (static_cast<int>(k) < remainder ? 1 : 0);
      result.per_slot_budget[k] = chunk;
      result.per_slot_used[k] = chunk;
      if (chunk == 0) continue;
      SlotPayload payload;
      payload.slot = static_cast<int>(k);
      SlotPayload::Segment seg;
      seg.block_id = static_cast<int>(k);
      seg.symbols.assign(stream.begin() + offset, stream.begin() + offset + chunk);
      seg.scale = scale;
      payload.segments.push_back(std::move(seg));
      const auto outcomes =
          transmit_slot(payload, ctx.trace.slots[k].snr_db, gamma_min,
                        slot_noise_seed(ctx.phy_seed, k));
      if (outcomes.front().status == BlockStatus::kDelivered) {
        std::copy(outcomes.front().received.begin(), outcomes.front().received.end(),
                  received.begin() + offset);
        result.blocks_delivered += 1;
      } else {
        result.blocks_erased += 1;
      }
      result.samples_transmitted += chunk;
      offset += chunk;
    }
    const ImageBuffer decoded =
        decode_global_stream(received, prep.image.width, prep.image.height);
    const PsnrResult p = psnr(prep.image, decoded);
    result.psnr_db = p.db;
    result.psnr_infinite = p.infinite;
    result.ssim = ssim(prep.image, decoded);
    return result;
  }

  const auto descriptors = make_block_descriptors(cfg.profile.r_s, cfg.profile.r_t);
  const PredictedTrace pred = detail::predict(cfg, ctx.trace, trial_seed);

  BudgetAllocation alloc;
  BlockSchedule schedule;
  bool predicted_total_outage = false;
  if (cfg.method == Method::kUniformSched) {
    // Prediction-blind ablation: equal budgets on every slot, temporal
    // fill order, no usability gating.
    alloc = uniform_allocation(cfg.n_tot, horizon);
    const PredictedTrace blind = make_predicted_trace(
        std::vector<double>(horizon, 0.0), -std::numeric_limits<double>::infinity());
    schedule = schedule_blocks(descriptors, alloc, blind, SlotOrder::kTemporal);
  } else {
    try {
      const std::vector<double> weights = slot_weights(pred, gamma_min);
      alloc = allocate_budgets(weights, cfg.n_tot);
      schedule = schedule_blocks(descriptors, alloc, pred, cfg.slot_order);
    } catch (const NoUsableSlotsError&) {
      predicted_total_outage = true;
      alloc.total = cfg.n_tot;
      alloc.samples_per_slot.assign(horizon, 0);
      schedule.slot_of_block.assign(descriptors.size(), kUnscheduled);
      schedule.per_slot_used.assign(horizon, 0);
    }
  }

  std::vector<BlockOutcome> outcomes;
  if (!predicted_total_outage) {
    for (std::size_t k = 0; k < horizon; ++k) {
      SlotPayload payload;
      payload.slot = static_cast<int>(k);
      for (const auto& desc : descriptors)
        if (schedule.slot_of_block[desc.id] == static_cast<int>(k))
          payload.segments.push_back(make_segment(
              desc.id, detail::block_symbols(prep.blocks, desc.id)));
      if (payload.segments.empty()) continue;
      auto slot_outcomes = transmit_slot(payload, ctx.trace.slots[k].snr_db,
                                         gamma_min, slot_noise_seed(ctx.phy_seed, k));
      for (auto& o : slot_outcomes) outcomes.push_back(std::move(o));
    }
  }

  const ReceptionState rx = assemble_reception(descriptors, schedule, outcomes);
  result.structure_lost = !rx.structure.has_value();
  for (const auto& o : outcomes) {
    if (o.status == BlockStatus::kDelivered)
      result.blocks_delivered += 1;
    else
      result.blocks_erased += 1;
  }
  for (int slot : schedule.slot_of_block)
    if (slot == kUnscheduled) result.blocks_unscheduled += 1;
  for (int used : schedule.per_slot_used) result.samples_transmitted += used;
  result.per_slot_budget = alloc.samples_per_slot;
  result.per_slot_used = schedule.per_slot_used;

  const CompletionMode completion = cfg.method == Method::kNoGeneration
                                        ? CompletionMode::kZeroFill
                                        : CompletionMode::kConditional;
  const ReceptionState completed = complete_missing(rx, completion, cfg.profile);
  const ImageBuffer decoded = decode(completed, cfg.profile);
  const PsnrResult p = psnr(prep.image, decoded);
  result.psnr_db = p.db;
  result.psnr_infinite = p.infinite;
  result.ssim = ssim(prep.image, decoded);
  return result;
}

// Runs cfg.trials trials across a worker pool. Trial i uses corpus image
// i % corpus.size() and the sub-seed derive_seed(cfg.seed, i); results are
// collected by index, so the output is identical for any thread count.
inline std::vector<TrialResult> run_trials(const ExperimentConfig& cfg,
                                           const std::vector<PreparedImage>& corpus) {
  if (corpus.empty()) throw ConfigError("empty corpus");
  std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                      : std::min<unsigned>(hw, static_cast<unsigned>(cfg.trials));

  auto work = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= cfg.trials) return;
      try {
        results[i] = run_trial(cfg, corpus[i % corpus.size()],
                               derive_seed(cfg.seed, static_cast<std::uint64_t>(i)), i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

inline Aggregate aggregate(const std::vector<TrialResult>& trials) {
  std::vector<double> psnrs, ssims;
  psnrs.reserve(trials.size());
  ssims.reserve(trials.size());
  for (const auto& t : trials) {
    psnrs.push_back(t.psnr_db);
    ssims.push_back(t.ssim);
  }
  Aggregate agg;
  agg.psnr_mean = mean_of(psnrs);
  agg.psnr_se = standard_error(psnrs);
  agg.ssim_mean = mean_of(ssims);
  agg.ssim_se = standard_error(ssims);
  agg.trials = static_cast<int>(trials.size());
  return agg;
}

// Sweep driver. The SNR sweep calibrates the link budget per trace so the
// mean realized SNR hits each grid point; the mismatch sweep fixes the
// mean realized SNR and varies the predictor error std. Methods at one
// grid point share trial seeds, so they see identical channel traces and
// per-slot noise streams.
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& base,
                                       SweepVariable variable,
                                       const std::vector<double>& grid,
                                       const std::vector<PreparedImage>& corpus) {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  std::vector<SweepRow> rows;
  const char* var_name =
      variable == SweepVariable::kSnrDb ? "snr_db" : "sigma_err_db";
  for (double value : grid) {
    for (Method method : base.sweep_methods) {
      ExperimentConfig cfg = base;
      cfg.method = method;
      if (variable == SweepVariable::kSnrDb) {
        cfg.target_mean_snr_db = value;
      } else {
        cfg.target_mean_snr_db = base.mismatch_mean_snr_db;
        cfg.sigma_err_db = value;
      }
      SweepRow row;
      row.method = method_name(method);
      row.sweep_var = var_name;
      row.value = value;
      row.agg = aggregate(run_trials(cfg, corpus));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// Loads an ExperimentConfig from a parsed config table; unknown channel
// values fall back to the defaults above.
inline ExperimentConfig load_experiment_config(const ConfigTable& t) {
  ExperimentConfig cfg;

  auto& env = cfg.env;
  env.carrier_freq_hz = t.get_double("channel.carrier_freq_hz", env.carrier_freq_hz);
  env.excess_loss_los_db =
      t.get_double("channel.excess_loss_los_db", env.excess_loss_los_db);
  env.excess_loss_nlos_db =
      t.get_double("channel.excess_loss_nlos_db", env.excess_loss_nlos_db);
  env.shadow_std_los_db = t.get_double("channel.shadow_std_los_db", env.shadow_std_los_db);
  env.shadow_std_nlos_db =
      t.get_double("channel.shadow_std_nlos_db", env.shadow_std_nlos_db);
  env.elevation_threshold_rad =
      t.get_double("channel.elevation_threshold_rad", env.elevation_threshold_rad);
  env.logistic_alpha = t.get_double("channel.logistic_alpha", env.logistic_alpha);
  env.logistic_beta = t.get_double("channel.logistic_beta", env.logistic_beta);
  env.logistic_theta0_rad =
      t.get_double("channel.logistic_theta0_rad", env.logistic_theta0_rad);
  env.decorrelation_distance_m =
      t.get_double("channel.decorrelation_distance_m", env.decorrelation_distance_m);
  const std::string corr =
      t.get_string("channel.correlation_mode",
                   env.correlation_mode == CorrelationMode::kFixed ? "fixed"
                                                                   : "speed_derived");
  if (corr == "fixed")
    env.correlation_mode = CorrelationMode::kFixed;
  else if (corr == "speed_derived")
    env.correlation_mode = CorrelationMode::kSpeedDerived;
  else
    throw ConfigError("channel.correlation_mode must be fixed|speed_derived");
  env.fixed_rho = t.get_double("channel.rho", env.fixed_rho);
  env.tx_power_w = t.get_double("channel.tx_power_w", env.tx_power_w);
  env.noise_density_w_per_hz =
      t.get_double("channel.noise_density_w_per_hz", env.noise_density_w_per_hz);
  env.bandwidth_hz = t.get_double("channel.bandwidth_hz", env.bandwidth_hz);
  env.snr_threshold_db = t.get_double("scheduler.gamma_min_db",
                                      t.get_double("channel.gamma_min_db",
                                                   env.snr_threshold_db));

  if (t.has("trajectory.waypoints")) {
    cfg.traj.waypoints.clear();
    for (const auto& wp : t.require("trajectory.waypoints").as_array("trajectory.waypoints")) {
      const auto& triple = wp.as_array("trajectory.waypoints[]");
      if (triple.size() != 3)
        throw ConfigError("trajectory.waypoints entries must be [x, y, z]");
      cfg.traj.waypoints.push_back({triple[0].as_double("x"), triple[1].as_double("y"),
                                    triple[2].as_double("z")});
    }
  }
  if (t.has("trajectory.ground_user")) {
    const auto& gu = t.require("trajectory.ground_user").as_array("trajectory.ground_user");
    if (gu.size() != 3) throw ConfigError("trajectory.ground_user must be [x, y, z]");
    cfg.traj.ground_user = {gu[0].as_double("x"), gu[1].as_double("y"),
                            gu[2].as_double("z")};
  }
  cfg.traj.slot_duration_s =
      t.get_double("trajectory.slot_duration_s", cfg.traj.slot_duration_s);
  if (t.has("trajectory.speeds_mps")) {
    cfg.traj.speeds_mps.clear();
    for (const auto& v : t.require("trajectory.speeds_mps").as_array("trajectory.speeds_mps"))
      cfg.traj.speeds_mps.push_back(v.as_double("trajectory.speeds_mps[]"));
  }

  cfg.profile.r_s = static_cast<int>(t.get_int("codec.r_s", cfg.profile.r_s));
  cfg.profile.r_t = static_cast<int>(t.get_int("codec.r_t", cfg.profile.r_t));
  cfg.profile.width = static_cast<int>(t.get_int("codec.width", cfg.profile.width));
  cfg.profile.height = static_cast<int>(t.get_int("codec.height", cfg.profile.height));

  cfg.n_tot = static_cast<int>(t.get_int("scheduler.n_tot", cfg.n_tot));
  const std::string order = t.get_string("scheduler.slot_order", "snr_desc");
  if (order == "snr_desc")
    cfg.slot_order = SlotOrder::kSnrDescending;
  else if (order == "temporal")
    cfg.slot_order = SlotOrder::kTemporal;
  else
    throw ConfigError("scheduler.slot_order must be snr_desc|temporal");

  const std::string pred = t.get_string("predictor.kind", "noisy_oracle");
  if (pred == "noisy_oracle")
    cfg.predictor = PredictorKind::kNoisyOracle;
  else if (pred == "geometric")
    cfg.predictor = PredictorKind::kGeometric;
  else
    throw ConfigError("predictor.kind must be noisy_oracle|geometric");
  cfg.sigma_err_db = t.get_double("predictor.sigma_err_db", cfg.sigma_err_db);

  cfg.method = parse_method(t.get_string("run.method", "proposed"));
  cfg.trials = static_cast<int>(t.get_int("run.trials", cfg.trials));
  cfg.seed = static_cast<std::uint64_t>(t.get_int("run.seed", static_cast<std::int64_t>(cfg.seed)));
  cfg.corpus_dir = t.get_string("run.corpus", cfg.corpus_dir);
  cfg.threads = static_cast<int>(t.get_int("run.threads", cfg.threads));
  if (t.has("run.target_mean_snr_db"))
    cfg.target_mean_snr_db = t.require("run.target_mean_snr_db").as_double("run.target_mean_snr_db");

  const std::string var = t.get_string("sweep.variable", "snr_db");
  if (var == "snr_db")
    cfg.sweep_variable = SweepVariable::kSnrDb;
  else if (var == "sigma_err_db")
    cfg.sweep_variable = SweepVariable::kSigmaErrDb;
  else
    throw ConfigError("sweep.variable must be snr_db|sigma_err_db");
  if (t.has("sweep.grid")) {
    cfg.sweep_grid.clear();
    for (const auto& v : t.require("sweep.grid").as_array("sweep.grid"))
      cfg.sweep_grid.push_back(v.as_double("sweep.grid[]"));
  }
  cfg.mismatch_mean_snr_db =
      t.get_double("sweep.mismatch_mean_snr_db", cfg.mismatch_mean_snr_db);
  if (t.has("sweep.methods")) {
    cfg.sweep_methods.clear();
    for (const auto& m : t.require("sweep.methods").as_array("sweep.methods"))
      cfg.sweep_methods.push_back(parse_method(m.as_string("sweep.methods[]")));
  }

  cfg.validate();
  return cfg;
}

// Deterministic config echo for run_meta.json.
inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["channel"] = {
      {"carrier_freq_hz", cfg.env.carrier_freq_hz},
      {"excess_loss_los_db", cfg.env.excess_loss_los_db},
      {"excess_loss_nlos_db", cfg.env.excess_loss_nlos_db},
      {"shadow_std_los_db", cfg.env.shadow_std_los_db},
      {"shadow_std_nlos_db", cfg.env.shadow_std_nlos_db},
      {"elevation_threshold_rad", cfg.env.elevation_threshold_rad},
      {"decorrelation_distance_m", cfg.env.decorrelation_distance_m},
      {"correlation_mode",
       cfg.env.correlation_mode == CorrelationMode::kFixed ? "fixed" : "speed_derived"},
      {"rho", cfg.env.fixed_rho},
      {"tx_power_w", cfg.env.tx_power_w},
      {"noise_density_w_per_hz", cfg.env.noise_density_w_per_hz},
      {"bandwidth_hz", cfg.env.bandwidth_hz},
      {"gamma_min_db", cfg.env.snr_threshold_db},
  };
  nlohmann::json waypoints = nlohmann::json::array();
  for (const auto& w : cfg.traj.waypoints) waypoints.push_back({w.x, w.y, w.z});
  j["trajectory"] = {
      {"ground_user", {cfg.traj.ground_user.x, cfg.traj.ground_user.y, cfg.traj.ground_user.z}},
      {"waypoints", waypoints},
      {"slot_duration_s", cfg.traj.slot_duration_s},
  };
  j["codec"] = {{"r_s", cfg.profile.r_s},
                {"r_t", cfg.profile.r_t},
                {"width", cfg.profile.width},
                {"height", cfg.profile.height}};
  j["scheduler"] = {{"n_tot", cfg.n_tot},
                    {"slot_order", cfg.slot_order == SlotOrder::kSnrDescending
                                       ? "snr_desc"
                                       : "temporal"}};
  j["predictor"] = {{"kind", cfg.predictor == PredictorKind::kNoisyOracle
                                 ? "noisy_oracle"
                                 : "geometric"},
                    {"sigma_err_db", cfg.sigma_err_db}};
  j["run"] = {{"method", method_name(cfg.method)},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"corpus", cfg.corpus_dir}};
  nlohmann::json methods = nlohmann::json::array();
  for (Method m : cfg.sweep_methods) methods.push_back(method_name(m));
  j["sweep"] = {{"variable",
                 cfg.sweep_variable == SweepVariable::kSnrDb ? "snr_db" : "sigma_err_db"},
                {"grid", cfg.effective_grid()},
                {"mismatch_mean_snr_db", cfg.mismatch_mean_snr_db},
                {"methods", methods}};
  return j;
}

}  // namespace uavsem
