#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pushrl/run.hpp"

using namespace pushrl;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

int count_data_rows(const std::string& csv_text) {
  int rows = 0;
  bool past_header = false;
  std::istringstream ss(csv_text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') continue;
    if (!past_header) {
      past_header = true;  // column header
      continue;
    }
    ++rows;
  }
  return rows;
}

RunConfig tiny_config() {
  RunConfig cfg = default_config();
  cfg.seed = 9;
  cfg.ppo.num_envs = 4;
  cfg.ppo.horizon = 8;
  cfg.ppo.iterations = 5;
  cfg.ppo.actor_hidden = {16, 16};
  cfg.ppo.critic_hidden = {16, 16};
  cfg.ppo.checkpoint_every = 0;
  cfg.eval.episodes = 6;
  cfg.eval.footprint_success_target = 1;
  cfg.eval.footprint_attempt_cap = 4;
  return cfg;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("config: serialize/parse round-trip is the identity") {
  const RunConfig cfg = default_config();
  const std::string text = serialize_config(cfg);
  const RunConfig reparsed = parse_config_text(text);
  CHECK(serialize_config(reparsed) == text);
  CHECK(config_hash(reparsed) == config_hash(cfg));
}

TEST_CASE("config: shipped default file matches the built-in defaults") {
  const RunConfig shipped = load_config(std::string(PUSHRL_SOURCE_DIR) + "/configs/default.yaml");
  CHECK(serialize_config(shipped) == serialize_config(default_config()));
}

TEST_CASE("config: unknown keys are rejected with the offending path") {
  CHECK_THROWS_WITH_AS(parse_config_text("ppo:\n  gamma: 0.99\n  turbo: 1\n"),
                       doctest::Contains("ppo.turbo"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("nonsense: 1\n"), doctest::Contains("nonsense"),
                       ConfigError);
}

TEST_CASE("config: ill-typed and invalid values are rejected") {
  CHECK_THROWS_AS(parse_config_text("world:\n  dt: banana\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("world:\n  dt: -0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("env:\n  action_scale_base: [1, 2]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("ppo:\n  gamma: 1.5\n"), ConfigError);
}

TEST_CASE("format_double round-trips arbitrary doubles") {
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12, 12));
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("csv writer emits the provenance header") {
  TempDir dir("pushrl_csv_test");
  const std::string path = dir.str() + "/x.csv";
  {
    CsvWriter csv(path, Provenance{42, 0xABCDULL}, {"a", "b"});
    csv.row_values({1.5, 2.5});
  }
  const std::string text = slurp(path);
  CHECK(text.find("# pushrl ") == 0);
  CHECK(text.find("# seed 42") != std::string::npos);
  CHECK(text.find("# config_hash 000000000000abcd") != std::string::npos);
  CHECK(text.find("a,b\n1.5,2.5\n") != std::string::npos);
}

TEST_CASE("trajectory: binary round-trip is bit exact, empty gives header-only CSV") {
  TempDir dir("pushrl_traj_test");
  Trajectory traj;
  traj.episode_index = 3;
  traj.provenance = {7, 9};
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    TrajectoryStep s;
    s.time = i * 0.02;
    s.obj_x = rng.uniform(-2, 2);
    s.obj_y = rng.uniform(-2, 2);
    s.obj_yaw = rng.uniform(-kPi, kPi);
    s.ee_z = rng.uniform(0, 1);
    s.face_index = static_cast<int>(rng.uniform_index(4));
    s.violated_mask = static_cast<std::uint32_t>(rng.uniform_index(512));
    traj.steps.push_back(s);
  }
  const std::string bin = dir.str() + "/t.bin";
  save_trajectory(bin, traj);
  const Trajectory loaded = load_trajectory(bin);
  REQUIRE(loaded.steps.size() == traj.steps.size());
  for (std::size_t i = 0; i < traj.steps.size(); ++i) {
    REQUIRE(loaded.steps[i].obj_x == traj.steps[i].obj_x);
    REQUIRE(loaded.steps[i].obj_yaw == traj.steps[i].obj_yaw);
    REQUIRE(loaded.steps[i].violated_mask == traj.steps[i].violated_mask);
  }

  // CSV re-emission preserves the exact values.
  const std::string csv_path = dir.str() + "/t.csv";
  trajectory_to_csv(loaded, csv_path);
  CHECK(count_data_rows(slurp(csv_path)) == 50);

  Trajectory empty;
  const std::string empty_bin = dir.str() + "/e.bin";
  save_trajectory(empty_bin, empty);
  trajectory_to_csv(load_trajectory(empty_bin), dir.str() + "/e.csv");
  CHECK(count_data_rows(slurp(dir.str() + "/e.csv")) == 0);

  std::string corrupt = slurp(bin);
  corrupt[2] = 'z';
  std::ofstream(dir.str() + "/c.bin", std::ios::binary) << corrupt;
  CHECK_THROWS(load_trajectory(dir.str() + "/c.bin"));
}

TEST_CASE("cmd_train: smoke contract and resume continuation") {
  TempDir dir("pushrl_cmd_train_test");
  const std::string cfg_path = dir.str() + "/cfg.yaml";
  std::ofstream(cfg_path) << serialize_config(tiny_config());

  TrainArgs args;
  args.config_path = cfg_path;
  args.out_dir = dir.str() + "/out";
  REQUIRE(cmd_train(args) == kExitOk);
  CHECK(fs::exists(args.out_dir + "/config.yaml"));
  CHECK(fs::exists(args.out_dir + "/checkpoint_final.bin"));
  CHECK(count_data_rows(slurp(args.out_dir + "/metrics.csv")) == 5);

  // Resume at iteration 5 and extend to 7: rows continue at 5 and 6.
  TrainArgs resume = args;
  resume.resume_checkpoint = args.out_dir + "/checkpoint_final.bin";
  resume.iterations = 7;
  REQUIRE(cmd_train(resume) == kExitOk);
  const std::string metrics = slurp(args.out_dir + "/metrics.csv");
  CHECK(count_data_rows(metrics) == 7);
  CHECK(metrics.find("\n5,") != std::string::npos);
  CHECK(metrics.find("\n6,") != std::string::npos);
}

TEST_CASE("cmd_train: invalid config exits with code 2 naming the key") {
  TempDir dir("pushrl_cmd_badcfg_test");
  const std::string cfg_path = dir.str() + "/bad.yaml";
  std::ofstream(cfg_path) << "ppo:\n  wombat: 3\n";
  TrainArgs args;
  args.config_path = cfg_path;
  args.out_dir = dir.str() + "/out";
  CHECK(cmd_train(args) == kExitConfig);
}

TEST_CASE("cmd_eval and cmd_replay: report surface") {
  TempDir dir("pushrl_cmd_eval_test");
  const std::string cfg_path = dir.str() + "/cfg.yaml";
  std::ofstream(cfg_path) << serialize_config(tiny_config());

  TrainArgs train;
  train.config_path = cfg_path;
  train.out_dir = dir.str() + "/out";
  REQUIRE(cmd_train(train) == kExitOk);

  EvalArgs eval;
  eval.config_path = cfg_path;
  eval.checkpoint = train.out_dir + "/checkpoint_final.bin";
  eval.report_dir = dir.str() + "/report";
  eval.episodes = 4;
  eval.experiment = "violation-table";
  eval.trajectory_dump_count = 2;
  REQUIRE(cmd_eval(eval) == kExitOk);
  CHECK(fs::exists(eval.report_dir + "/episodes.csv"));
  CHECK(fs::exists(eval.report_dir + "/summary.json"));
  CHECK(fs::exists(eval.report_dir + "/trajectories/trajectory_0.bin"));

  // One column per implemented constraint family (leg torque excluded).
  const std::string vio = slurp(eval.report_dir + "/violation_table.csv");
  CHECK(vio.find("base_cmd,arm_cmd,arm_action_rate,arm_joint_pos,arm_joint_vel,arm_torque,"
                 "collision,object_balance") != std::string::npos);
  CHECK(vio.find("leg_torque") == std::string::npos);

  // Replay reproduces the stored poses exactly.
  const std::string traj_bin = eval.report_dir + "/trajectories/trajectory_0.bin";
  ReplayArgs replay;
  replay.trajectory_path = traj_bin;
  replay.out_path = dir.str() + "/replayed.csv";
  REQUIRE(cmd_replay(replay) == kExitOk);
  const Trajectory traj = load_trajectory(traj_bin);
  CHECK(count_data_rows(slurp(replay.out_path)) == static_cast<int>(traj.steps.size()));
  const std::string csv = slurp(replay.out_path);
  CHECK(csv.find(format_double(traj.steps.at(5).obj_x)) != std::string::npos);

  // Unknown checkpoint is a runtime error, not a crash.
  EvalArgs missing = eval;
  missing.checkpoint = dir.str() + "/absent.bin";
  missing.report_dir = dir.str() + "/report2";
  CHECK(cmd_eval(missing) == kExitRuntime);
}

TEST_CASE("cmd_eval: ablation grid marks missing checkpoints untrained") {
  TempDir dir("pushrl_cmd_ablation_test");
  const std::string cfg_path = dir.str() + "/cfg.yaml";
  std::ofstream(cfg_path) << serialize_config(tiny_config());

  TrainArgs train;
  train.config_path = cfg_path;
  train.out_dir = dir.str() + "/out";
  REQUIRE(cmd_train(train) == kExitOk);

  // Provide only the full-method checkpoint.
  fs::create_directories(dir.str() + "/grid");
  fs::copy_file(train.out_dir + "/checkpoint_final.bin", dir.str() + "/grid/full.ckpt");

  EvalArgs eval;
  eval.config_path = cfg_path;
  eval.report_dir = dir.str() + "/report";
  eval.experiment = "ablation";
  eval.ablation_dir = dir.str() + "/grid";
  eval.episodes = 2;
  REQUIRE(cmd_eval(eval) == kExitOk);
  const std::string table = slurp(eval.report_dir + "/ablation.csv");
  CHECK(table.find("untrained") != std::string::npos);
  CHECK(table.find("full_method") != std::string::npos);
  CHECK(count_data_rows(table) == 4);
}
