#include "pushrl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pushrl {

EvalPolicy::EvalPolicy(const PpoConfig& ppo, const Checkpoint& ckpt)
    : actor_(ppo.actor_hidden, ppo.init_log_std) {
  const MlpSpec critic_spec{kCriticObsDim, 1, ppo.critic_hidden, "elu"};
  verify_spec_hashes(ckpt, actor_.net().spec(), critic_spec);
  if (ckpt.actor_params.size() != actor_.net().param_count())
    throw CheckpointError("checkpoint actor parameter count mismatch");
  actor_.net().params() = ckpt.actor_params;
}

Action EvalPolicy::act(const ActorObs& obs, Rng& rng, bool deterministic) const {
  MatX means;
  VecX log_std;
  actor_.forward(obs.transpose(), &means, &log_std);
  if (deterministic) return means.row(0).transpose();
  return gaussian_sample(means.row(0).transpose(), log_std, rng).action;
}

int count_face_switches(const std::vector<std::pair<bool, int>>& trace) {
  int switches = 0;
  int last_face = std::numeric_limits<int>::min();
  for (const auto& [in_contact, face] : trace) {
    if (!in_contact) continue;
    if (last_face != std::numeric_limits<int>::min() && face != last_face) ++switches;
    last_face = face;
  }
  return switches;
}

std::array<double, 5> quartiles(std::vector<double> s) {
  std::array<double, 5> out;
  out.fill(std::numeric_limits<double>::quiet_NaN());
  if (s.empty()) return out;
  std::sort(s.begin(), s.end());
  const auto at = [&s](double p) {
    const double pos = p * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, s.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return s[lo] + frac * (s[hi] - s[lo]);
  };
  out = {s.front(), at(0.25), at(0.5), at(0.75), s.back()};
  return out;
}

EpisodeMetrics run_episode(const RunConfig& cfg, const DomainRandomization& dr,
                           const EvalPolicy& policy, Rng episode_rng, bool noise,
                           bool deterministic, std::vector<double>* contact_heights,
                           Trajectory* trajectory) {
  PushEnv env(cfg.env, cfg.world, ArmModel{}, dr);
  env.reset(episode_rng);
  Rng sample_rng = Rng::derive(episode_rng.next_u64(), 0x5A5A5AULL);

  const ConstraintLimits limits = cfg.constraints.build_limits(cfg.env);
  const auto table = cfg.constraints.build_table();
  ViolationAccumulator acc;

  EpisodeMetrics m;
  m.shape = env.spec().object_params.shape;
  m.dims = env.spec().object_params.dims;
  m.mass = env.spec().object_params.mass;
  m.mu_ground = env.spec().object_params.mu_ground;

  int switches = 0;
  int last_face = std::numeric_limits<int>::min();
  double height_sum = 0.0;

  while (!env.terminated()) {
    const ActorObs obs = env.actor_obs(noise);
    const Action action = policy.act(obs, sample_rng, deterministic);
    const TransitionRecord rec = env.step(action);
    const ConstraintReport report =
        constraint_values(rec, env.spec(), limits, env.arm_model(), cfg.world.dt);
    acc.add(report);

    if (rec.contact.in_contact) {
      ++m.contact_steps;
      height_sum += rec.contact.contact_height;
      if (contact_heights) contact_heights->push_back(rec.contact.contact_height);
      if (m.shape == Shape::kCuboid) {
        if (last_face != std::numeric_limits<int>::min() && rec.contact.face_index != last_face)
          ++switches;
        last_face = rec.contact.face_index;
      }
    }

    if (trajectory) {
      const RewardTerms terms = reward_terms(rec, env.spec(), cfg.rewards, rec.success_latched);
      TrajectoryStep ts;
      ts.time = rec.step_index * cfg.world.dt;
      ts.obj_x = rec.obj_after.planar_pose.x;
      ts.obj_y = rec.obj_after.planar_pose.y;
      ts.obj_yaw = rec.obj_after.planar_pose.yaw;
      ts.tilt_angle = rec.obj_after.tilt.angle;
      ts.tilt_axis_yaw = rec.obj_after.tilt.axis_yaw;
      ts.toppled = rec.obj_after.toppled ? 1 : 0;
      ts.base_x = rec.robot_after.base_pose.x;
      ts.base_y = rec.robot_after.base_pose.y;
      ts.base_yaw = rec.robot_after.base_pose.yaw;
      ts.base_height = rec.robot_after.base_height;
      ts.base_roll = rec.robot_after.base_roll;
      ts.base_pitch = rec.robot_after.base_pitch;
      ts.ee_x = rec.robot_after.ee_pos_world.x();
      ts.ee_y = rec.robot_after.ee_pos_world.y();
      ts.ee_z = rec.robot_after.ee_pos_world.z();
      ts.face_index = rec.contact.in_contact ? rec.contact.face_index : -1;
      ts.in_contact = rec.contact.in_contact ? 1 : 0;
      ts.r1 = terms.r1;
      ts.r2 = terms.r2;
      ts.r3 = terms.r3;
      ts.r4 = terms.r4;
      ts.total_reward = total_reward(terms, cfg.rewards, cfg.ppo.iterations);
      for (int i = 0; i < kConstraintCount; ++i) {
        if (report.violated(static_cast<ConstraintId>(i))) ts.violated_mask |= (1u << i);
      }
      ts.success = rec.success_latched ? 1 : 0;
      ts.delta = cat_termination(report, table, cfg.ppo.iterations);
      trajectory->steps.push_back(ts);
    }
  }

  const EnvState& st = env.state();
  m.toppled = st.object.toppled;
  m.success = st.success_latched && !m.toppled;
  m.steps = st.step_count;
  m.steps_to_success = st.steps_to_success;
  m.face_switches = (m.shape == Shape::kCuboid) ? switches : -1;
  m.mean_contact_height = m.contact_steps > 0 ? height_sum / m.contact_steps : 0.0;
  m.violated_pct = acc.percentages();
  const Pose2& goal = env.spec().goal_pose;
  m.final_dist = std::hypot(st.object.planar_pose.x - goal.x, st.object.planar_pose.y - goal.y);
  m.final_yaw_err = std::abs(wrap_angle(st.object.planar_pose.yaw - goal.yaw));
  return m;
}

AggregateReport run_eval(const RunConfig& cfg, const EvalPolicy& policy, const EvalOptions& opts,
                         std::vector<EpisodeMetrics>* episodes_out) {
  std::vector<EpisodeMetrics> episodes(opts.episodes);
  std::vector<Trajectory> trajectories(
      std::min(opts.trajectory_dump_count, opts.episodes));

#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < opts.episodes; ++i) {
    Trajectory* traj = nullptr;
    if (i < static_cast<int>(trajectories.size())) {
      trajectories[i].episode_index = static_cast<std::uint64_t>(i);
      trajectories[i].provenance.seed = opts.seed;
      traj = &trajectories[i];
    }
    episodes[i] = run_episode(cfg, cfg.dr, policy,
                              Rng::derive(opts.seed, 0xE9A1ULL + static_cast<std::uint64_t>(i)),
                              opts.noise, opts.deterministic_policy, nullptr, traj);
  }

  if (!opts.trajectory_dir.empty()) {
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
      save_trajectory(opts.trajectory_dir + "/trajectory_" + std::to_string(i) + ".bin",
                      trajectories[i]);
    }
  }

  AggregateReport agg;
  agg.episodes = opts.episodes;
  long successes = 0, topples = 0, switch_sum = 0, steps_sum = 0, success_count = 0;
  std::array<double, kConstraintCount> pct_sum{};
  for (const EpisodeMetrics& m : episodes) {
    successes += m.success ? 1 : 0;
    topples += m.toppled ? 1 : 0;
    if (m.shape == Shape::kCuboid) {
      ++agg.cuboid_episodes;
      switch_sum += m.face_switches;
    }
    if (m.success) {
      steps_sum += m.steps_to_success;
      ++success_count;
    }
    for (int i = 0; i < kConstraintCount; ++i) pct_sum[i] += m.violated_pct[i];
  }
  agg.success_rate_pct = 100.0 * static_cast<double>(successes) / opts.episodes;
  agg.topple_rate_pct = 100.0 * static_cast<double>(topples) / opts.episodes;
  agg.mean_face_switches =
      agg.cuboid_episodes > 0 ? static_cast<double>(switch_sum) / agg.cuboid_episodes : 0.0;
  agg.mean_steps_to_success =
      success_count > 0 ? static_cast<double>(steps_sum) / success_count : 0.0;
  for (int i = 0; i < kConstraintCount; ++i)
    agg.violation_pct[i] = pct_sum[i] / static_cast<double>(opts.episodes);

  if (episodes_out) *episodes_out = std::move(episodes);
  return agg;
}

std::vector<FootprintBucketStats> footprint_sweep(const RunConfig& cfg, const EvalPolicy& policy,
                                                  std::uint64_t seed) {
  const EvalSettings& es = cfg.eval;
  std::vector<FootprintBucketStats> buckets;
  const int n = std::max(2, es.footprint_buckets);
  const double lo = cfg.dr.dims_xy_min, hi = cfg.dr.dims_xy_max;

  for (int b = 0; b < n; ++b) {
    const double size = lo + (hi - lo) * static_cast<double>(b) / (n - 1);
    DomainRandomization dr = cfg.dr;
    dr.fixed_shape = Shape::kCuboid;
    dr.fixed_dims = Vec3(size, size, es.footprint_height);
    dr.fixed_mass = es.footprint_mass;
    dr.fixed_mu_ground = es.footprint_friction;
    dr.fixed_com_centered = true;

    FootprintBucketStats stats;
    stats.size = size;
    std::vector<double> heights;

    constexpr int kWave = 64;
    long attempts = 0;
    while (stats.episodes < es.footprint_success_target && attempts < es.footprint_attempt_cap) {
      const int wave = static_cast<int>(
          std::min<long>(kWave, es.footprint_attempt_cap - attempts));
      std::vector<std::vector<double>> wave_heights(wave);
      std::vector<EpisodeMetrics> wave_metrics(wave);

#pragma omp parallel for schedule(dynamic, 1)
      for (int i = 0; i < wave; ++i) {
        const std::uint64_t ep = static_cast<std::uint64_t>(attempts + i);
        wave_metrics[i] =
            run_episode(cfg, dr, policy,
                        Rng::derive(seed, 0xF007ULL + 131071ULL * static_cast<std::uint64_t>(b) + ep),
                        /*noise=*/false, /*deterministic=*/true, &wave_heights[i], nullptr);
      }
      for (int i = 0; i < wave && stats.episodes < es.footprint_success_target; ++i) {
        if (!wave_metrics[i].success) continue;
        ++stats.episodes;
        heights.insert(heights.end(), wave_heights[i].begin(), wave_heights[i].end());
      }
      attempts += wave;
    }
    stats.attempts = attempts;
    stats.samples = static_cast<long>(heights.size());
    const auto q = quartiles(std::move(heights));
    stats.lo = q[0];
    stats.q1 = q[1];
    stats.median = q[2];
    stats.q3 = q[3];
    stats.hi = q[4];
    buckets.push_back(stats);
  }
  return buckets;
}

}  // namespace pushrl
