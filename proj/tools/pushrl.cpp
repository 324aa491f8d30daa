#include <CLI11.hpp>

#include "pushrl/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Constrained-RL non-prehensile pushing toolkit"};
  app.require_subcommand(1);

  pushrl::TrainArgs train_args;
  std::uint64_t train_seed = 0;
  int train_iterations = 0;
  CLI::App* train = app.add_subcommand("train", "Train a pushing policy");
  train->add_option("--config", train_args.config_path, "YAML run configuration");
  auto* seed_opt = train->add_option("--seed", train_seed, "Override the config seed");
  auto* iter_opt = train->add_option("--iterations", train_iterations, "Override iteration count");
  train->add_option("--out", train_args.out_dir, "Output directory")->required();
  train->add_option("--resume", train_args.resume_checkpoint, "Checkpoint to resume from");

  pushrl::EvalArgs eval_args;
  std::uint64_t eval_seed = 0;
  int eval_episodes = 0;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a trained policy");
  eval->add_option("--config", eval_args.config_path, "YAML run configuration");
  eval->add_option("--checkpoint", eval_args.checkpoint, "Policy checkpoint");
  auto* ep_opt = eval->add_option("--episodes", eval_episodes, "Episode count");
  auto* eseed_opt = eval->add_option("--seed", eval_seed, "Evaluation seed");
  eval->add_option("--report", eval_args.report_dir, "Report directory")->required();
  eval->add_option("--experiment", eval_args.experiment,
                   "standard|ablation|footprint-sweep|violation-table");
  eval->add_option("--ablation-dir", eval_args.ablation_dir,
                   "Directory with the four ablation checkpoints");
  eval->add_option("--dump-trajectories", eval_args.trajectory_dump_count,
                   "Number of episodes to dump for replay");

  pushrl::ReplayArgs replay_args;
  CLI::App* replay = app.add_subcommand("replay", "Re-emit a trajectory dump as CSV");
  replay->add_option("--trajectory", replay_args.trajectory_path, "Trajectory .bin file")
      ->required();
  replay->add_option("--format", replay_args.format, "Output format (csv)");
  replay->add_option("--out", replay_args.out_path, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pushrl::kExitConfig;
  }

  if (train->parsed()) {
    if (!seed_opt->empty()) train_args.seed = train_seed;
    if (!iter_opt->empty()) train_args.iterations = train_iterations;
    return pushrl::cmd_train(train_args);
  }
  if (eval->parsed()) {
    if (!eseed_opt->empty()) eval_args.seed = eval_seed;
    if (!ep_opt->empty()) eval_args.episodes = eval_episodes;
    return pushrl::cmd_eval(eval_args);
  }
  return pushrl::cmd_replay(replay_args);
}
