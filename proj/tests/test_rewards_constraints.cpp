#include <doctest.h>

#include <cmath>

#include "pushrl/constraints.hpp"
#include "pushrl/rewards.hpp"

using namespace pushrl;

namespace {

EpisodeSpec basic_spec() {
  EpisodeSpec spec;
  spec.object_params.dims = Vec3(0.5, 0.4, 0.6);
  spec.object_params.mass = 5.0;
  spec.goal_pose = Pose2{0, 0, 0};
  return spec;
}

TransitionRecord at_pose(const Pose2& pose) {
  TransitionRecord rec;
  rec.obj_after.planar_pose = pose;
  rec.object_to_goal = Vec2(-pose.x, -pose.y);
  return rec;
}

/// Independent re-evaluation of the algebraic constraint formulas, written
/// directly from their definitions.
struct SymbolicOracle {
  static VecX base_cmd(const BaseCmd& u, const BaseCmd& lo, const BaseCmd& hi) {
    VecX v(6);
    for (int i = 0; i < 6; ++i) v[i] = std::max(u[i] - hi[i], lo[i] - u[i]);
    return v;
  }
  static VecX box(const ArmVec& q, const ArmVec& lo, const ArmVec& hi) {
    VecX v(5);
    for (int i = 0; i < 5; ++i) v[i] = std::max(q[i] - hi[i], lo[i] - q[i]);
    return v;
  }
  static VecX rate(const ArmVec& d_now, const ArmVec& d_prev, double dt, double lim) {
    VecX v(5);
    for (int i = 0; i < 5; ++i) v[i] = std::abs(d_now[i] - d_prev[i]) / dt - lim;
    return v;
  }
  static VecX abs_minus(const ArmVec& x, double lim) {
    VecX v(5);
    for (int i = 0; i < 5; ++i) v[i] = std::abs(x[i]) - lim;
    return v;
  }
  static double balance(double tilt, double theta_lim, double base_speed, double vel_thresh) {
    return base_speed > vel_thresh ? std::abs(tilt) - theta_lim : 0.0;
  }
};

}  // namespace

TEST_CASE("r1: keypoint distance endpoints") {
  const RewardConfig cfg;
  const EpisodeSpec spec = basic_spec();

  const RewardTerms at_goal = reward_terms(at_pose({0, 0, 0}), spec, cfg, false);
  CHECK(at_goal.r1 == doctest::Approx(1.0).epsilon(1e-12));

  // Pure translation by t: stacked keypoint distance is sqrt(8) |t|.
  const double t = cfg.sigma3_sq / std::sqrt(8.0);
  const RewardTerms at_e = reward_terms(at_pose({t, 0, 0}), spec, cfg, false);
  CHECK(at_e.r1 == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("r1: invariant under a rigid transform of object and goal") {
  const RewardConfig cfg;
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    EpisodeSpec spec = basic_spec();
    spec.goal_pose = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-kPi, kPi)};
    const Pose2 obj{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-kPi, kPi)};
    const double r1_before = reward_terms(at_pose(obj), spec, cfg, false).r1;

    const double phi = rng.uniform(-kPi, kPi);
    const Vec2 shift(rng.uniform(-3, 3), rng.uniform(-3, 3));
    auto xf = [&](const Pose2& p) {
      const Vec2 v = rotate2(phi, Vec2(p.x, p.y)) + shift;
      return Pose2{v.x(), v.y(), wrap_angle(p.yaw + phi)};
    };
    EpisodeSpec spec2 = spec;
    spec2.goal_pose = xf(spec.goal_pose);
    const double r1_after = reward_terms(at_pose(xf(obj)), spec2, cfg, false).r1;
    CHECK(r1_after == doctest::Approx(r1_before).epsilon(1e-10));
  }
}

TEST_CASE("r1 monotonicity in the keypoint distance") {
  const RewardConfig cfg;
  const EpisodeSpec spec = basic_spec();
  double prev = 2.0;
  for (double d = 0.0; d < 3.0; d += 0.1) {
    const double r1 = reward_terms(at_pose({d, 0, 0}), spec, cfg, false).r1;
    CHECK(r1 < prev);
    prev = r1;
  }
}

TEST_CASE("r2: reach distance and the success-mode freeze") {
  const RewardConfig cfg;
  const EpisodeSpec spec = basic_spec();
  TransitionRecord rec = at_pose({1, 1, 0});
  rec.reach_dist = 0.25;
  CHECK(reward_terms(rec, spec, cfg, false).r2 ==
        doctest::Approx(std::exp(-0.25 / cfg.sigma1_sq)).epsilon(1e-12));

  rec.success_latched = true;
  rec.frozen_reach_dist = 0.4;
  const RewardTerms t = reward_terms(rec, spec, cfg, true);
  CHECK(t.r1 == 2.0);
  CHECK(t.r3 == 0.0);
  CHECK(t.r2 == doctest::Approx(std::exp(-0.4 / cfg.sigma1_sq)).epsilon(1e-12));
}

TEST_CASE("r3: velocity-alignment endpoints and rest behavior") {
  const RewardConfig cfg;
  const EpisodeSpec spec = basic_spec();

  TransitionRecord rec = at_pose({1.0, 0, 0});  // goal direction is -x
  rec.object_vel = Vec2(-0.5, 0.0);             // straight to goal
  CHECK(reward_terms(rec, spec, cfg, false).r3 == doctest::Approx(1.0).epsilon(1e-12));

  rec.object_vel = Vec2(0.5, 0.0);  // straight away
  CHECK(reward_terms(rec, spec, cfg, false).r3 ==
        doctest::Approx(std::exp(-2.0 / cfg.sigma2_sq)).epsilon(1e-12));

  rec.object_vel = Vec2(1e-9, 0.0);  // below the motion threshold: minimum value
  CHECK(reward_terms(rec, spec, cfg, false).r3 ==
        doctest::Approx(std::exp(-2.0 / cfg.sigma2_sq)).epsilon(1e-12));

  // Strictly increasing in the alignment.
  double prev = -1.0;
  for (double a = -1.0; a <= 1.0; a += 0.05) {
    rec.object_vel = 0.3 * Vec2(-a, std::sqrt(std::max(0.0, 1 - a * a)));
    const double r3 = reward_terms(rec, spec, cfg, false).r3;
    CHECK(r3 > prev);
    prev = r3;
  }
}

TEST_CASE("r4: action-rate regularization") {
  const RewardConfig cfg;
  const EpisodeSpec spec = basic_spec();
  TransitionRecord rec = at_pose({1, 0, 0});
  CHECK(reward_terms(rec, spec, cfg, false).r4 == doctest::Approx(2.0).epsilon(1e-12));

  rec.base_cmd_delta << 0.1, -0.1, 0.2, 0.0, 0.0, 0.05;
  rec.arm_cmd_delta << 0.1, 0.1, 0.0, 0.0, -0.3;
  const double base_l1 = rec.base_cmd_delta.lpNorm<1>();
  const double arm_l1 = rec.arm_cmd_delta.lpNorm<1>();
  CHECK(reward_terms(rec, spec, cfg, false).r4 ==
        doctest::Approx(std::exp(-base_l1 / cfg.sigma4b_sq) + std::exp(-arm_l1 / cfg.sigma4a_sq))
            .epsilon(1e-12));
}

TEST_CASE("total_reward weighting and the reach-weight schedule") {
  RewardConfig cfg;  // trigger at the full-scale default of 1500
  cfg.r2_downscale_iteration = 1500;
  RewardTerms t{1, 1, 1, 2};
  CHECK(total_reward(t, cfg, 0) == doctest::Approx(4.506).epsilon(1e-12));
  CHECK(total_reward(t, cfg, 2000) == doctest::Approx(3.5685).epsilon(1e-12));
  CHECK(effective_w2(cfg, 1500) == doctest::Approx(1.25));
  CHECK(effective_w2(cfg, 1501) == doctest::Approx(0.3125));
  RewardTerms zero{0, 0, 0, 0};
  CHECK(total_reward(zero, cfg, 0) == 0.0);
}

TEST_CASE("reward ranges") {
  const RewardConfig cfg;
  const EpisodeSpec spec = basic_spec();
  Rng rng(9);
  for (int i = 0; i < 2000; ++i) {
    TransitionRecord rec = at_pose(
        {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-kPi, kPi)});
    rec.reach_dist = rng.uniform(0.0, 4.0);
    rec.object_vel = Vec2(rng.uniform(-1, 1), rng.uniform(-1, 1));
    for (int k = 0; k < 6; ++k) rec.base_cmd_delta[k] = rng.uniform(-1, 1);
    for (int k = 0; k < 5; ++k) rec.arm_cmd_delta[k] = rng.uniform(-1, 1);
    const RewardTerms t = reward_terms(rec, spec, cfg, false);
    CHECK(t.r1 > 0.0);
    CHECK(t.r1 <= 1.0);
    CHECK(t.r2 > 0.0);
    CHECK(t.r2 <= 1.0);
    CHECK(t.r3 > 0.0);
    CHECK(t.r3 <= 1.0);
    CHECK(t.r4 > 0.0);
    CHECK(t.r4 <= 2.0);
    const RewardTerms s = reward_terms(rec, spec, cfg, true);
    CHECK(s.r1 == 2.0);
  }
}

TEST_CASE("constraint formulas: published examples") {
  const ArmModel arm;
  const ConstraintLimits lim;
  const EpisodeSpec spec = basic_spec();
  const double dt = 0.02;

  TransitionRecord rec = at_pose({2, 2, 0});
  rec.robot_after.base_pose = {5, 5, 0};  // far from the object: no collisions
  rec.robot_after.q_arm = arm.q_default;
  rec.robot_after.ee_pos_world = forward_kinematics(arm, rec.robot_after);
  rec.base_cmd_abs << 0, 0, 0, 0, 0, 0.5;  // midpoint of the limits
  rec.q_cmd_abs = arm.q_default;

  const ConstraintReport mid = constraint_values(rec, spec, lim, arm, dt);
  CHECK(mid.base_cmd.maxCoeff() < 0.0);
  CHECK(mid.arm_cmd.maxCoeff() < 0.0);
  CHECK_FALSE(mid.violated(ConstraintId::kBaseCmd));
  CHECK_FALSE(mid.violated(ConstraintId::kCollision));

  TransitionRecord over = rec;
  over.robot_after.q_arm[1] = arm.q_upper[1] + 0.1;
  over.robot_after.ee_pos_world = forward_kinematics(arm, over.robot_after);
  const ConstraintReport rep = constraint_values(over, spec, lim, arm, dt);
  CHECK(rep.joint_pos[1] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(rep.violated(ConstraintId::kArmJointPos));

  TransitionRecord tilted = rec;
  tilted.obj_after.tilt.angle = 12.0 * kPi / 180.0;
  tilted.base_speed = 0.3;
  const ConstraintReport moving = constraint_values(tilted, spec, lim, arm, dt);
  CHECK(moving.balance == doctest::Approx(2.0 * kPi / 180.0).epsilon(1e-9));
  tilted.base_speed = 0.0;
  const ConstraintReport stopped = constraint_values(tilted, spec, lim, arm, dt);
  CHECK(stopped.balance == 0.0);
}

TEST_CASE("constraint formulas match the symbolic oracle on random records") {
  const ArmModel arm;
  const ConstraintLimits lim;
  const EpisodeSpec spec = basic_spec();
  const double dt = 0.02;
  Rng rng(1234);

  for (int i = 0; i < 10000; ++i) {
    TransitionRecord rec;
    rec.obj_after.planar_pose = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-kPi, kPi)};
    rec.obj_after.tilt.angle = rng.uniform(0.0, 0.5);
    rec.robot_after.base_pose = {rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-kPi, kPi)};
    for (int k = 0; k < 6; ++k) rec.base_cmd_abs[k] = rng.uniform(-1.5, 1.5);
    for (int k = 0; k < 5; ++k) {
      rec.q_cmd_abs[k] = rng.uniform(-3.5, 3.5);
      rec.arm_cmd_delta[k] = rng.uniform(-1, 1);
      rec.prev_arm_cmd_delta[k] = rng.uniform(-1, 1);
      rec.robot_after.q_arm[k] = rng.uniform(-3.5, 3.5);
      rec.robot_after.qd_arm[k] = rng.uniform(-4, 4);
      rec.robot_after.tau_arm[k] = rng.uniform(-60, 60);
    }
    rec.robot_after.ee_pos_world = forward_kinematics(arm, rec.robot_after);
    rec.base_speed = rng.uniform(0.0, 0.8);

    const ConstraintReport rep = constraint_values(rec, spec, lim, arm, dt);

    const VecX base_oracle = SymbolicOracle::base_cmd(rec.base_cmd_abs, lim.base_lower, lim.base_upper);
    const VecX arm_cmd_oracle = SymbolicOracle::box(rec.q_cmd_abs, arm.q_lower, arm.q_upper);
    const VecX rate_oracle =
        SymbolicOracle::rate(rec.arm_cmd_delta, rec.prev_arm_cmd_delta, dt, lim.qd_limit);
    const VecX qpos_oracle = SymbolicOracle::box(rec.robot_after.q_arm, arm.q_lower, arm.q_upper);
    const VecX qvel_oracle = SymbolicOracle::abs_minus(rec.robot_after.qd_arm, lim.qd_limit);
    const VecX tau_oracle = SymbolicOracle::abs_minus(rec.robot_after.tau_arm, arm.torque_limit);
    const double bal_oracle = SymbolicOracle::balance(rec.obj_after.tilt.angle, lim.theta_lim,
                                                      rec.base_speed, lim.balance_vel_threshold);

    for (int k = 0; k < 6; ++k) REQUIRE(std::abs(rep.base_cmd[k] - base_oracle[k]) < 1e-12);
    for (int k = 0; k < 5; ++k) {
      REQUIRE(std::abs(rep.arm_cmd[k] - arm_cmd_oracle[k]) < 1e-12);
      REQUIRE(std::abs(rep.arm_action_rate[k] - rate_oracle[k]) < 1e-12);
      REQUIRE(std::abs(rep.joint_pos[k] - qpos_oracle[k]) < 1e-12);
      REQUIRE(std::abs(rep.joint_vel[k] - qvel_oracle[k]) < 1e-12);
      REQUIRE(std::abs(rep.joint_torque[k] - tau_oracle[k]) < 1e-12);
    }
    REQUIRE(std::abs(rep.balance - bal_oracle) < 1e-12);
  }
}

TEST_CASE("collision flags for hand-placed geometry") {
  const ArmModel arm;
  const ConstraintLimits lim;
  EpisodeSpec spec = basic_spec();
  const double dt = 0.02;

  TransitionRecord rec = at_pose({0, 0, 0});
  rec.robot_after.q_arm = arm.q_default;

  // Base box straddling the object footprint.
  rec.robot_after.base_pose = {0.5, 0.0, 0.0};
  rec.robot_after.ee_pos_world = forward_kinematics(arm, rec.robot_after);
  CHECK(constraint_values(rec, spec, lim, arm, dt).collision[0] == 1.0);
  CHECK(cat_termination(constraint_values(rec, spec, lim, arm, dt),
                        default_constraint_table(), 0) == 1.0);

  // Base far away: clean.
  rec.robot_after.base_pose = {3.0, 0.0, 0.0};
  rec.robot_after.ee_pos_world = forward_kinematics(arm, rec.robot_after);
  CHECK(constraint_values(rec, spec, lim, arm, dt).collision.maxCoeff() == 0.0);

  // Leg circle grazing the object: base sits so a front leg overlaps.
  rec.robot_after.base_pose = {0.55 + lim.leg_offset_x, 0.0, kPi};  // front legs at x ~ 0.2
  rec.robot_after.ee_pos_world = forward_kinematics(arm, rec.robot_after);
  const ConstraintReport legs = constraint_values(rec, spec, lim, arm, dt);
  CHECK(legs.collision[1] == 1.0);

  // Folded arm: wrist tucked into the base box.
  TransitionRecord folded = at_pose({3, 3, 0});  // object far away
  folded.robot_after.base_pose = {0, 0, 0};
  folded.robot_after.q_arm << 0.0, -0.3, 2.5, 2.2, 0.0;
  folded.robot_after.ee_pos_world = forward_kinematics(arm, folded.robot_after);
  const ConstraintReport fold_rep = constraint_values(folded, spec, lim, arm, dt);
  CHECK(fold_rep.collision[2] == 1.0);
}

TEST_CASE("curriculum: published endpoints for all nine rows") {
  const auto table = default_constraint_table(12000);
  REQUIRE(table.size() == 9);
  const double expected[9][2] = {{0.01, 0.2}, {0.05, 0.9}, {0.0, 0.05}, {0.05, 0.9}, {0.05, 0.9},
                                 {0.0, 0.015}, {0.0, 0.01}, {1.0, 1.0},  {0.25, 0.25}};
  for (int i = 0; i < 9; ++i) {
    CHECK(table[i].p_max_initial == expected[i][0]);
    CHECK(table[i].p_max_final == expected[i][1]);
  }
  // Dimensions follow the table (collision reduced to the implemented pairs).
  CHECK(table[0].dimension == 6);
  CHECK(table[6].dimension == 12);
  CHECK(table[6].active == false);
  CHECK(table[7].dimension == 3);
  CHECK(table[8].dimension == 1);
}

TEST_CASE("curriculum: linear interpolation of p_max") {
  const auto table = default_constraint_table(12000);
  const ConstraintSpec& base_cmd = table[0];
  CHECK(p_max_at(base_cmd, 0) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(p_max_at(base_cmd, 6000) == doctest::Approx(0.105).epsilon(1e-12));
  CHECK(p_max_at(base_cmd, 12000) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(p_max_at(base_cmd, 20000) == doctest::Approx(0.2).epsilon(1e-12));
  // No-curriculum rows are constant.
  CHECK(p_max_at(table[7], 0) == 1.0);
  CHECK(p_max_at(table[8], 500000) == 0.25);
}

TEST_CASE("cat_termination: saturation, collision override, monotonicity") {
  const auto table = default_constraint_table(12000);
  ConstraintReport rep;

  CHECK(cat_termination(rep, table, 0) == 0.0);

  rep.base_cmd[0] = 10.0;  // far beyond the saturation scale
  CHECK(cat_termination(rep, table, 0) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(cat_termination(rep, table, 6000) == doctest::Approx(0.105).epsilon(1e-12));
  CHECK(cat_termination(rep, table, 12000) == doctest::Approx(0.2).epsilon(1e-12));

  rep.collision[0] = 1.0;
  CHECK(cat_termination(rep, table, 0) == 1.0);
  CHECK(cat_termination(rep, table, 999999) == 1.0);

  // Non-decreasing in raw values and iteration.
  Rng rng(55);
  for (int i = 0; i < 500; ++i) {
    ConstraintReport a;
    a.base_cmd[2] = rng.uniform(-0.5, 0.5);
    a.joint_vel[1] = rng.uniform(-1.0, 1.0);
    a.balance = rng.uniform(-0.2, 0.2);
    ConstraintReport b = a;
    b.base_cmd[2] += rng.uniform(0.0, 0.5);
    b.joint_vel[1] += rng.uniform(0.0, 0.5);
    const int it = static_cast<int>(rng.uniform_index(12000));
    CHECK(cat_termination(b, table, it) >= cat_termination(a, table, it));
    CHECK(cat_termination(a, table, it + 500) >= cat_termination(a, table, it));
  }
}

TEST_CASE("violation-time accounting") {
  ViolationAccumulator never;
  for (int i = 0; i < 1000; ++i) never.add(ConstraintReport{});
  CHECK(never.percentages()[0] == 0.0);

  // 5 violated steps out of 1000, in every episode.
  std::vector<ViolationAccumulator> episodes(4);
  for (auto& ep : episodes) {
    for (int i = 0; i < 1000; ++i) {
      ConstraintReport rep;
      if (i < 5) rep.base_cmd[0] = 0.3;
      ep.add(rep);
    }
  }
  const auto avg = violation_time_average(episodes);
  CHECK(avg[static_cast<int>(ConstraintId::kBaseCmd)] == doctest::Approx(0.5).epsilon(1e-12));

  // Mixed episodes: 0% and 1% average to 0.5%.
  std::vector<ViolationAccumulator> mixed(2);
  for (int i = 0; i < 1000; ++i) {
    ConstraintReport clean;
    mixed[0].add(clean);
    ConstraintReport hot;
    if (i < 10) hot.balance = 0.2;
    mixed[1].add(hot);
  }
  CHECK(violation_time_average(mixed)[static_cast<int>(ConstraintId::kBalance)] ==
        doctest::Approx(0.5).epsilon(1e-12));
}
