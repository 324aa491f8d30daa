#include "pushrl/run.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace pushrl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

RunConfig load_or_default(const std::string& config_path) {
  return config_path.empty() ? default_config() : load_config(config_path);
}

void write_config_snapshot(const RunConfig& cfg, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write config snapshot: " + path);
  f << "# pushrl " << kVersionString << "\n";
  f << "# seed " << cfg.seed << "\n";
  f << "# config_hash " << hash_hex(config_hash(cfg)) << "\n";
  f << serialize_config(cfg);
}

json provenance_json(const RunConfig& cfg, std::uint64_t seed) {
  return json{{"version", kVersionString},
              {"seed", seed},
              {"config_hash", hash_hex(config_hash(cfg))}};
}

std::vector<ConstraintId> reported_constraints(const RunConfig& cfg) {
  std::vector<ConstraintId> ids;
  for (const ConstraintSpec& s : cfg.constraints.build_table()) {
    if (s.id == ConstraintId::kLegTorque) continue;  // not simulated
    ids.push_back(s.id);
  }
  return ids;
}

void write_episode_csv(const std::string& path, const RunConfig& cfg, const EvalOptions& opts,
                       const std::vector<EpisodeMetrics>& episodes) {
  std::vector<std::string> cols = {"episode",      "shape",   "dim_x",        "dim_y",
                                   "dim_z",        "mass",    "mu_ground",    "success",
                                   "toppled",      "steps",   "steps_to_success", "final_dist",
                                   "final_yaw_err_deg", "face_switches", "contact_steps",
                                   "mean_contact_height"};
  const auto ids = reported_constraints(cfg);
  for (ConstraintId id : ids) cols.push_back(std::string("violated_pct_") + constraint_name(id));

  CsvWriter csv(path, Provenance{opts.seed, config_hash(cfg)}, cols);
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    const EpisodeMetrics& m = episodes[i];
    std::vector<std::string> row = {
        std::to_string(i),
        m.shape == Shape::kCuboid ? "cuboid" : "cylinder",
        format_double(m.dims.x()),
        format_double(m.dims.y()),
        format_double(m.dims.z()),
        format_double(m.mass),
        format_double(m.mu_ground),
        std::to_string(m.success ? 1 : 0),
        std::to_string(m.toppled ? 1 : 0),
        std::to_string(m.steps),
        std::to_string(m.steps_to_success),
        format_double(m.final_dist),
        format_double(m.final_yaw_err * 180.0 / kPi),
        std::to_string(m.face_switches),
        std::to_string(m.contact_steps),
        format_double(m.mean_contact_height)};
    for (ConstraintId id : ids) row.push_back(format_double(m.violated_pct[static_cast<int>(id)]));
    csv.row(row);
  }
}

json aggregate_json(const RunConfig& cfg, const AggregateReport& agg) {
  json vio = json::object();
  for (ConstraintId id : reported_constraints(cfg))
    vio[constraint_name(id)] = agg.violation_pct[static_cast<int>(id)];
  json j{{"episodes", agg.episodes},
         {"success_rate_pct", agg.success_rate_pct},
         {"topple_rate_pct", agg.topple_rate_pct},
         {"cuboid_episodes", agg.cuboid_episodes},
         {"mean_face_switches", agg.mean_face_switches},
         {"mean_steps_to_success", agg.mean_steps_to_success},
         {"violation_time_pct", vio}};
  if (!agg.footprint.empty()) {
    json buckets = json::array();
    for (const FootprintBucketStats& b : agg.footprint) {
      buckets.push_back(json{{"size", b.size},
                             {"episodes", b.episodes},
                             {"attempts", b.attempts},
                             {"samples", b.samples},
                             {"min", b.lo},
                             {"q1", b.q1},
                             {"median", b.median},
                             {"q3", b.q3},
                             {"max", b.hi}});
    }
    j["footprint_buckets"] = buckets;
  }
  return j;
}

int guarded(const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int cmd_train(const TrainArgs& args) {
  return guarded([&] {
    RunConfig cfg = load_or_default(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    if (args.iterations) cfg.ppo.iterations = *args.iterations;

    fs::create_directories(args.out_dir);
    write_config_snapshot(cfg, args.out_dir + "/config.yaml");

    Trainer trainer(cfg);
    bool resumed = false;
    if (!args.resume_checkpoint.empty()) {
      trainer.resume(load_checkpoint(args.resume_checkpoint));
      resumed = true;
    }

    const std::string metrics_path = args.out_dir + "/metrics.csv";
    std::unique_ptr<CsvWriter> csv;
    std::ofstream append_out;
    const bool append = resumed && fs::exists(metrics_path);
    if (!append) {
      csv = std::make_unique<CsvWriter>(metrics_path, Provenance{cfg.seed, config_hash(cfg)},
                                        metrics_csv_columns());
    } else {
      append_out.open(metrics_path, std::ios::app);
      if (!append_out) throw std::runtime_error("cannot append to " + metrics_path);
    }

    trainer.run(
        [&](const IterationMetrics& m) {
          if (csv) {
            csv->row_values(metrics_csv_row(m));
            csv->flush();
          } else {
            const auto row = metrics_csv_row(m);
            for (std::size_t i = 0; i < row.size(); ++i)
              append_out << (i ? "," : "") << format_double(row[i]);
            append_out << "\n";
            append_out.flush();
          }
          if (m.iteration % 10 == 0 || m.iteration + 1 >= cfg.ppo.iterations) {
            std::cout << "iter " << m.iteration << " reward " << m.mean_reward << " success "
                      << m.success_rate << " topple " << m.topple_rate << " delta "
                      << m.delta_mean << " kl " << m.update.approx_kl << "\n";
            std::cout.flush();
          }
        },
        [&](const Checkpoint& ckpt, bool final) {
          save_checkpoint(args.out_dir + "/checkpoint_" + std::to_string(ckpt.iteration) + ".bin",
                          ckpt);
          if (final) save_checkpoint(args.out_dir + "/checkpoint_final.bin", ckpt);
        });
  });
}

const std::vector<std::string>& ablation_row_labels() {
  static const std::vector<std::string> rows = {
      "centroid_target_with_balance_constraint",
      "centroid_target_without_balance_constraint",
      "surface_target_without_balance_constraint",
      "full_method",
  };
  return rows;
}

const std::vector<std::string>& ablation_checkpoint_names() {
  static const std::vector<std::string> names = {
      "centroid.ckpt",
      "centroid_no_balance.ckpt",
      "no_balance.ckpt",
      "full.ckpt",
  };
  return names;
}

int cmd_eval(const EvalArgs& args) {
  return guarded([&] {
    RunConfig cfg = load_or_default(args.config_path);
    EvalOptions opts;
    opts.episodes = args.episodes.value_or(cfg.eval.episodes);
    opts.seed = args.seed.value_or(cfg.seed);
    opts.deterministic_policy = cfg.eval.deterministic_policy;
    opts.noise = cfg.eval.noise;
    opts.trajectory_dump_count =
        args.trajectory_dump_count >= 0 ? args.trajectory_dump_count : cfg.eval.trajectory_dump_count;

    fs::create_directories(args.report_dir);
    const Provenance prov{opts.seed, config_hash(cfg)};

    if (args.experiment == "ablation") {
      if (args.ablation_dir.empty())
        throw ConfigError("ablation experiment requires --ablation-dir");
      CsvWriter csv(args.report_dir + "/ablation.csv", prov,
                    {"variant", "success_rate_pct", "topple_rate_pct"});
      json rows = json::array();
      for (std::size_t i = 0; i < ablation_row_labels().size(); ++i) {
        const std::string path = args.ablation_dir + "/" + ablation_checkpoint_names()[i];
        if (!fs::exists(path)) {
          csv.row({ablation_row_labels()[i], "untrained", "untrained"});
          rows.push_back(json{{"variant", ablation_row_labels()[i]}, {"status", "untrained"}});
          continue;
        }
        const EvalPolicy policy(cfg.ppo, load_checkpoint(path));
        const AggregateReport agg = run_eval(cfg, policy, opts);
        csv.row({ablation_row_labels()[i], format_double(agg.success_rate_pct),
                 format_double(agg.topple_rate_pct)});
        rows.push_back(json{{"variant", ablation_row_labels()[i]},
                            {"success_rate_pct", agg.success_rate_pct},
                            {"topple_rate_pct", agg.topple_rate_pct}});
      }
      json out{{"provenance", provenance_json(cfg, opts.seed)}, {"ablation", rows}};
      std::ofstream f(args.report_dir + "/summary.json");
      f << out.dump(2) << "\n";
      return;
    }

    if (args.checkpoint.empty()) throw ConfigError("--checkpoint is required");
    const EvalPolicy policy(cfg.ppo, load_checkpoint(args.checkpoint));

    if (args.experiment == "footprint-sweep") {
      AggregateReport agg;
      agg.footprint = footprint_sweep(cfg, policy, opts.seed);
      CsvWriter csv(args.report_dir + "/footprint.csv", prov,
                    {"size", "episodes", "attempts", "samples", "min", "q1", "median", "q3",
                     "max"});
      for (const FootprintBucketStats& b : agg.footprint) {
        csv.row_values({b.size, static_cast<double>(b.episodes), static_cast<double>(b.attempts),
                        static_cast<double>(b.samples), b.lo, b.q1, b.median, b.q3, b.hi});
      }
      json out{{"provenance", provenance_json(cfg, opts.seed)},
               {"report", aggregate_json(cfg, agg)}};
      std::ofstream f(args.report_dir + "/summary.json");
      f << out.dump(2) << "\n";
      return;
    }

    if (args.experiment != "standard" && args.experiment != "violation-table")
      throw ConfigError("unknown experiment '" + args.experiment + "'");

    if (opts.trajectory_dump_count > 0) {
      fs::create_directories(args.report_dir + "/trajectories");
      opts.trajectory_dir = args.report_dir + "/trajectories";
    }
    std::vector<EpisodeMetrics> episodes;
    const AggregateReport agg = run_eval(cfg, policy, opts, &episodes);
    write_episode_csv(args.report_dir + "/episodes.csv", cfg, opts, episodes);

    if (args.experiment == "violation-table") {
      const auto ids = reported_constraints(cfg);
      std::vector<std::string> cols;
      for (ConstraintId id : ids) cols.push_back(constraint_name(id));
      CsvWriter csv(args.report_dir + "/violation_table.csv", prov, cols);
      std::vector<double> row;
      for (ConstraintId id : ids) row.push_back(agg.violation_pct[static_cast<int>(id)]);
      csv.row_values(row);
    }

    json out{{"provenance", provenance_json(cfg, opts.seed)},
             {"report", aggregate_json(cfg, agg)}};
    std::ofstream f(args.report_dir + "/summary.json");
    f << out.dump(2) << "\n";
  });
}

int cmd_replay(const ReplayArgs& args) {
  return guarded([&] {
    if (args.format != "csv") throw ConfigError("unsupported replay format '" + args.format + "'");
    const Trajectory traj = load_trajectory(args.trajectory_path);
    std::string out = args.out_path;
    if (out.empty()) {
      out = args.trajectory_path;
      const auto pos = out.rfind(".bin");
      if (pos != std::string::npos) out = out.substr(0, pos);
      out += ".csv";
    }
    trajectory_to_csv(traj, out);
  });
}

}  // namespace pushrl
