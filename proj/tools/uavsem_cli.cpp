// uavsem command-line front end: single trials, the two experiment
// sweeps, channel trace dumps and schedule dumps.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "uavsem/uavsem.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitCalibrationError = 3;

struct CommonOptions {
  std::string config_path;
  std::optional<std::int64_t> seed;
  std::optional<int> trials;
  std::optional<int> threads;
  std::string out_dir = "out";
  bool plot = false;
};

uavsem::ExperimentConfig load_config(const CommonOptions& opts) {
  uavsem::ExperimentConfig cfg;
  if (!opts.config_path.empty())
    cfg = uavsem::load_experiment_config(
        uavsem::ConfigTable::parse_file(opts.config_path));
  if (opts.seed) cfg.seed = static_cast<std::uint64_t>(*opts.seed);
  if (opts.trials) cfg.trials = *opts.trials;
  if (opts.threads) cfg.threads = *opts.threads;
  cfg.validate();
  return cfg;
}

// Same sub-seed path as trial 0 of the harness, so `channel-trace` and
// `simulate` agree on what the channel looked like.
uavsem::ChannelTrace trial_trace(const uavsem::ExperimentConfig& cfg) {
  const std::uint64_t trial_seed = uavsem::derive_seed(cfg.seed, 0);
  const auto losses = uavsem::realize_loss_trace(
      cfg.traj, cfg.env, uavsem::derive_seed(trial_seed, 0x6368616eULL));
  double budget = cfg.env.link_budget_db();
  if (cfg.target_mean_snr_db)
    budget = *cfg.target_mean_snr_db + uavsem::mean_total_loss_db(losses);
  return uavsem::apply_link_budget(losses, budget, cfg.env.snr_threshold_db);
}

int cmd_channel_trace(const CommonOptions& opts, const std::string& out_file) {
  const auto cfg = load_config(opts);
  const auto trace = trial_trace(cfg);
  std::string csv = "slot,d_m,theta_rad,state,pl_db,shadow_db,loss_db,snr_db,usable\n";
  for (std::size_t k = 0; k < trace.slots.size(); ++k) {
    const auto& s = trace.slots[k];
    csv += std::to_string(k + 1) + ',' + uavsem::fmt_double(s.distance_m) + ',' +
           uavsem::fmt_double(s.elevation_rad) + ',' + uavsem::to_string(s.state) +
           ',' + uavsem::fmt_double(s.path_loss_db) + ',' +
           uavsem::fmt_double(s.shadowing_db) + ',' +
           uavsem::fmt_double(s.total_loss_db) + ',' +
           uavsem::fmt_double(s.snr_db) + ',' + (s.usable ? "1" : "0") + '\n';
  }
  if (out_file.empty())
    std::cout << csv;
  else
    uavsem::write_text_file(out_file, csv);
  return 0;
}

int cmd_schedule(const CommonOptions& opts) {
  const auto cfg = load_config(opts);
  const auto trace = trial_trace(cfg);
  const std::uint64_t trial_seed = uavsem::derive_seed(cfg.seed, 0);
  uavsem::PredictedTrace pred;
  if (cfg.predictor == uavsem::PredictorKind::kNoisyOracle) {
    pred = uavsem::predict_noisy_oracle(trace, cfg.sigma_err_db,
                                        cfg.env.snr_threshold_db,
                                        uavsem::derive_seed(trial_seed, 0x70726564ULL));
  } else {
    uavsem::PredictorInput input;
    input.history_snr_db = {trace.slots.front().snr_db};
    input.history_traj = {cfg.traj.waypoints.front()};
    input.planned_traj = cfg.traj.waypoints;
    pred = uavsem::predict_geometric(input, cfg.env, cfg.traj.slot_duration_s,
                                     trace.link_budget_db);
  }

  const auto blocks = uavsem::make_block_descriptors(cfg.profile.r_s, cfg.profile.r_t);
  uavsem::BlockSchedule schedule;
  schedule.slot_of_block.assign(blocks.size(), uavsem::kUnscheduled);
  try {
    const auto weights = uavsem::slot_weights(pred, cfg.env.snr_threshold_db);
    const auto alloc = uavsem::allocate_budgets(weights, cfg.n_tot);
    schedule = uavsem::schedule_blocks(blocks, alloc, pred, cfg.slot_order);
  } catch (const uavsem::NoUsableSlotsError&) {
    // every block stays unscheduled
  }
  std::cout << "block_id,kind,r,slot\n";
  for (const auto& b : blocks) {
    const int slot = schedule.slot_of_block[b.id];
    std::cout << b.id << ','
              << (b.kind == uavsem::BlockKind::kStructure ? "structure" : "texture")
              << ',' << b.length << ','
              << (slot == uavsem::kUnscheduled ? std::string("-")
                                               : std::to_string(slot + 1))
              << '\n';
  }
  return 0;
}

int cmd_simulate(const CommonOptions& opts, const std::string& image_path,
                 const std::string& method, std::optional<double> target_snr) {
  auto cfg = load_config(opts);
  if (!method.empty()) cfg.method = uavsem::parse_method(method);
  if (target_snr) cfg.target_mean_snr_db = *target_snr;

  uavsem::PreparedImage prep;
  if (!image_path.empty()) {
    prep = uavsem::prepare_image(uavsem::load_image(image_path), cfg.profile,
                                 cfg.n_tot);
  } else {
    auto corpus = uavsem::load_corpus(cfg.corpus_dir, cfg.profile, cfg.n_tot);
    prep = std::move(corpus.front());
  }

  const auto r = uavsem::run_trial(cfg, prep, uavsem::derive_seed(cfg.seed, 0), 0);
  std::cout << "method: " << uavsem::method_name(cfg.method) << "\n"
            << "psnr_db: " << (r.psnr_infinite ? "inf" : uavsem::fmt_double(r.psnr_db))
            << "\n"
            << "ssim: " << uavsem::fmt_double(r.ssim) << "\n"
            << "blocks_delivered: " << r.blocks_delivered << "\n"
            << "blocks_erased: " << r.blocks_erased << "\n"
            << "blocks_unscheduled: " << r.blocks_unscheduled << "\n"
            << "structure_lost: " << (r.structure_lost ? "true" : "false") << "\n"
            << "samples_transmitted: " << r.samples_transmitted << "\n"
            << "mean_realized_snr_db: " << uavsem::fmt_double(r.mean_realized_snr_db)
            << "\n";
  std::cout << "per_slot_used:";
  for (int u : r.per_slot_used) std::cout << ' ' << u;
  std::cout << "\nper_slot_budget:";
  for (int b : r.per_slot_budget) std::cout << ' ' << b;
  std::cout << "\n";
  return 0;
}

int run_sweep_command(const CommonOptions& opts, uavsem::SweepVariable variable) {
  auto cfg = load_config(opts);
  cfg.sweep_variable = variable;
  const auto grid = cfg.effective_grid();
  const auto corpus = uavsem::load_corpus(cfg.corpus_dir, cfg.profile, cfg.n_tot);
  const auto rows = uavsem::run_sweep(cfg, variable, grid, corpus);

  std::filesystem::create_directories(opts.out_dir);
  const std::string csv = uavsem::results_csv(rows);
  uavsem::write_text_file(std::filesystem::path(opts.out_dir) / "results.csv", csv);

  nlohmann::json meta = uavsem::config_to_json(cfg);
  meta["command"] =
      variable == uavsem::SweepVariable::kSnrDb ? "sweep-snr" : "sweep-mismatch";
  uavsem::write_text_file(std::filesystem::path(opts.out_dir) / "run_meta.json",
                          meta.dump(2) + "\n");

  if (opts.plot) {
    const std::string x_label = variable == uavsem::SweepVariable::kSnrDb
                                    ? "mean realized SNR (dB)"
                                    : "prediction mismatch std (dB)";
    uavsem::write_text_file(std::filesystem::path(opts.out_dir) / "plot.svg",
                            uavsem::svg_line_chart(rows, x_label, "PSNR (dB)"));
    uavsem::write_text_file(std::filesystem::path(opts.out_dir) / "plot_ssim.svg",
                            uavsem::svg_line_chart(rows, x_label, "SSIM", true));
  }
  std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uavsem: predictive semantic transmission simulator for UAV downlinks"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string image_path, method, out_file;
  std::optional<double> target_snr;

  auto add_common = [&](CLI::App* cmd, bool with_out_dir) {
    cmd->add_option("--config", opts.config_path, "configuration file");
    cmd->add_option("--seed", opts.seed, "master seed override");
    cmd->add_option("--trials", opts.trials, "trial count override");
    cmd->add_option("--threads", opts.threads, "worker thread count (0 = auto)");
    if (with_out_dir)
      cmd->add_option("--out", opts.out_dir, "output directory (default: out)");
  };

  auto* simulate = app.add_subcommand("simulate", "run one trial and print the report");
  add_common(simulate, false);
  simulate->add_option("--image", image_path, "image file (default: first corpus entry)");
  simulate->add_option("--method", method,
                       "proposed|uniform_sched|no_generation|single_stream");
  simulate->add_option("--target-snr", target_snr,
                       "calibrate mean realized SNR to this value (dB)");

  auto* sweep_snr = app.add_subcommand("sweep-snr", "PSNR/SSIM vs mean realized SNR");
  add_common(sweep_snr, true);
  sweep_snr->add_flag("--plot", opts.plot, "also write plot.svg / plot_ssim.svg");

  auto* sweep_mismatch =
      app.add_subcommand("sweep-mismatch", "PSNR/SSIM vs prediction mismatch std");
  add_common(sweep_mismatch, true);
  sweep_mismatch->add_flag("--plot", opts.plot, "also write plot.svg / plot_ssim.svg");

  auto* channel_trace =
      app.add_subcommand("channel-trace", "dump one realized channel trace as CSV");
  add_common(channel_trace, false);
  channel_trace->add_option("--out", out_file, "CSV file (default: stdout)");

  auto* schedule =
      app.add_subcommand("schedule", "print the block assignment table as CSV");
  add_common(schedule, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(opts, image_path, method, target_snr);
    if (sweep_snr->parsed())
      return run_sweep_command(opts, uavsem::SweepVariable::kSnrDb);
    if (sweep_mismatch->parsed())
      return run_sweep_command(opts, uavsem::SweepVariable::kSigmaErrDb);
    if (channel_trace->parsed()) return cmd_channel_trace(opts, out_file);
    if (schedule->parsed()) return cmd_schedule(opts);
  } catch (const uavsem::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const uavsem::CalibrationError& e) {
    std::cerr << "calibration error: " << e.what() << "\n";
    return kExitCalibrationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
