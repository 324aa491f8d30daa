#pragma once

#include <optional>

#include "pushrl/checkpoint.hpp"
#include "pushrl/config.hpp"
#include "pushrl/io.hpp"

namespace pushrl {

struct EvalOptions {
  int episodes{512};
  std::uint64_t seed{0};
  bool deterministic_policy{true};  // mean action
  bool noise{true};
  int trajectory_dump_count{0};
  std::string trajectory_dir;
};

struct EpisodeMetrics {
  bool success{false};
  bool toppled{false};
  int steps{0};
  int steps_to_success{-1};
  double final_dist{0.0};
  double final_yaw_err{0.0};             // rad
  int face_switches{-1};                 // -1 when undefined (cylinder)
  long contact_steps{0};
  double mean_contact_height{0.0};
  std::array<double, kConstraintCount> violated_pct{};
  Shape shape{Shape::kCuboid};
  Vec3 dims{0, 0, 0};
  double mass{0.0};
  double mu_ground{0.0};
};

struct FootprintBucketStats {
  double size{0.0};
  long episodes{0};  // successful episodes contributing samples
  long attempts{0};
  long samples{0};
  double lo{0.0}, q1{0.0}, median{0.0}, q3{0.0}, hi{0.0};
};

struct AggregateReport {
  int episodes{0};
  double success_rate_pct{0.0};
  double topple_rate_pct{0.0};
  long cuboid_episodes{0};
  double mean_face_switches{0.0};  // over cuboid episodes
  double mean_steps_to_success{0.0};
  std::array<double, kConstraintCount> violation_pct{};
  std::vector<FootprintBucketStats> footprint;
};

/// Frozen policy restored from a checkpoint; rejects spec mismatches.
class EvalPolicy {
 public:
  EvalPolicy(const PpoConfig& ppo, const Checkpoint& ckpt);

  Action act(const ActorObs& obs, Rng& rng, bool deterministic) const;
  const GaussianActor& actor() const { return actor_; }

 private:
  GaussianActor actor_;
};

/// One full episode under the frozen policy. Episodes run to timeout or
/// topple; success means the tolerance was latched and the object never
/// toppled. Optionally collects in-contact EE heights and a trajectory dump.
EpisodeMetrics run_episode(const RunConfig& cfg, const DomainRandomization& dr,
                           const EvalPolicy& policy, Rng episode_rng, bool noise,
                           bool deterministic, std::vector<double>* contact_heights,
                           Trajectory* trajectory);

/// Batch evaluation; per-episode metrics in episode order (deterministic for
/// a fixed seed).
AggregateReport run_eval(const RunConfig& cfg, const EvalPolicy& policy, const EvalOptions& opts,
                         std::vector<EpisodeMetrics>* episodes_out = nullptr);

/// EE-height distributions per object footprint. Buckets span the training
/// range; object height/mass/CoM/friction pinned, observation noise off,
/// only successful episodes contribute samples.
std::vector<FootprintBucketStats> footprint_sweep(const RunConfig& cfg, const EvalPolicy& policy,
                                                  std::uint64_t seed);

/// Face-switch count over a (in_contact, face_index) step trace: transitions
/// to a different face across contact phases; re-contacting the same face
/// does not count.
int count_face_switches(const std::vector<std::pair<bool, int>>& trace);

/// {min, q1, median, q3, max} with linear interpolation between order
/// statistics. Empty input yields all-NaN.
std::array<double, 5> quartiles(std::vector<double> samples);

}  // namespace pushrl
