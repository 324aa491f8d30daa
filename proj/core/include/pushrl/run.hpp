#pragma once

#include <optional>
#include <string>

#include "pushrl/eval.hpp"
#include "pushrl/trainer.hpp"

namespace pushrl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

struct TrainArgs {
  std::string config_path;  // empty: built-in defaults
  std::optional<std::uint64_t> seed;
  std::optional<int> iterations;
  std::string out_dir{"out"};
  std::string resume_checkpoint;
};

struct EvalArgs {
  std::string config_path;
  std::string checkpoint;
  std::optional<int> episodes;
  std::optional<std::uint64_t> seed;
  std::string report_dir{"report"};
  std::string experiment{"standard"};  // standard|ablation|footprint-sweep|violation-table
  std::string ablation_dir;            // full/no_balance/centroid/centroid_no_balance .ckpt
  int trajectory_dump_count{-1};       // -1: from config
};

struct ReplayArgs {
  std::string trajectory_path;
  std::string format{"csv"};
  std::string out_path;  // empty: trajectory path with .csv suffix
};

/// Command implementations shared by the CLI binary and the test suites.
/// Return process exit codes; diagnostics go to stderr.
int cmd_train(const TrainArgs& args);
int cmd_eval(const EvalArgs& args);
int cmd_replay(const ReplayArgs& args);

/// Paper-analogue ablation grid row labels, in table order.
const std::vector<std::string>& ablation_row_labels();
const std::vector<std::string>& ablation_checkpoint_names();

}  // namespace pushrl
