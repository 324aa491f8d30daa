#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pushrl/env.hpp"

using namespace pushrl;

namespace {

PushEnv make_env() { return PushEnv(EnvConfig{}, WorldConfig{}, ArmModel{}, DomainRandomization{}); }

}  // namespace

TEST_CASE("randomize_domain stays within the published ranges") {
  Rng rng(3);
  const DomainRandomization dr;
  const ArmModel arm;
  int cylinders = 0;
  for (int i = 0; i < 100000; ++i) {
    const DomainDraw d = randomize_domain(rng, dr, arm);
    const ObjectParams& o = d.object;
    REQUIRE(o.mass >= 1.0);
    REQUIRE(o.mass <= 10.0);
    REQUIRE(o.mu_ground >= 0.4);
    REQUIRE(o.mu_ground <= 1.25);
    REQUIRE(o.dims.x() >= 0.25);
    REQUIRE(o.dims.x() <= 0.75);
    REQUIRE(o.dims.z() >= 0.4);
    REQUIRE(o.dims.z() <= 1.0);
    if (o.shape == Shape::kCylinder) {
      ++cylinders;
      REQUIRE(o.dims.x() == o.dims.y());
    }
    // CoM stays strictly inside the body: |c_i| <= 0.6 * dims_i / 2.
    for (int a = 0; a < 3; ++a) REQUIRE(std::abs(o.com_offset[a]) <= 0.6 * 0.5 * o.dims[a] + 1e-12);
    REQUIRE(o.com_offset.z() >= -0.6 * 0.5 * o.dims.z() - 1e-12);
    REQUIRE(o.com_offset.z() <= 0.25 * 0.5 * o.dims.z() + 1e-12);
    REQUIRE(d.base_time_constant_scale >= 25.0 / 30.0 - 1e-12);
    REQUIRE(d.base_time_constant_scale <= 35.0 / 30.0 + 1e-12);
  }
  CHECK(cylinders > 48000);
  CHECK(cylinders < 52000);
}

TEST_CASE("reset sampling: annulus and disc geometry over many resets") {
  const EnvConfig cfg;
  const DomainRandomization dr;
  const WorldConfig world;
  const ArmModel arm;
  const int n = 100000;
  std::vector<double> radii;
  radii.reserve(n);
  for (int i = 0; i < n; ++i) {
    const ResetResult r =
        reset_sample(Rng::derive(99, static_cast<std::uint64_t>(i)), dr, cfg, world, arm);
    const double rad = std::hypot(r.spec.robot_spawn.x, r.spec.robot_spawn.y);
    REQUIRE(rad >= cfg.spawn_radius_min);
    REQUIRE(rad <= cfg.spawn_radius_max);
    const double goal_rad = std::hypot(r.spec.goal_pose.x, r.spec.goal_pose.y);
    REQUIRE(goal_rad <= cfg.goal_radius);
    REQUIRE(std::abs(r.spec.robot_spawn.yaw) <= kPi);
    REQUIRE(std::abs(r.spec.goal_pose.yaw) <= kPi);
    REQUIRE(r.spec.episode_step_limit == 1000);
    radii.push_back(rad);
  }

  // Kolmogorov-Smirnov distance against the area-uniform law r^2 ~ U.
  std::sort(radii.begin(), radii.end());
  const double r0sq = cfg.spawn_radius_min * cfg.spawn_radius_min;
  const double r1sq = cfg.spawn_radius_max * cfg.spawn_radius_max;
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double model = (radii[i] * radii[i] - r0sq) / (r1sq - r0sq);
    ks = std::max(ks, std::abs(model - (i + 1.0) / n));
    ks = std::max(ks, std::abs(model - static_cast<double>(i) / n));
  }
  CHECK(ks < 0.01);
}

TEST_CASE("reset sampling: identical seed gives identical episodes") {
  const EnvConfig cfg;
  const DomainRandomization dr;
  const WorldConfig world;
  const ArmModel arm;
  const ResetResult a = reset_sample(Rng(12345), dr, cfg, world, arm);
  const ResetResult b = reset_sample(Rng(12345), dr, cfg, world, arm);
  CHECK(a.spec.object_params.dims == b.spec.object_params.dims);
  CHECK(a.spec.object_params.mass == b.spec.object_params.mass);
  CHECK(a.spec.object_params.com_offset == b.spec.object_params.com_offset);
  CHECK(a.spec.goal_pose.x == b.spec.goal_pose.x);
  CHECK(a.spec.goal_pose.yaw == b.spec.goal_pose.yaw);
  CHECK(a.spec.robot_spawn.x == b.spec.robot_spawn.x);
  CHECK(a.spec.reach_target_obj == b.spec.reach_target_obj);
  CHECK(a.state.next_push_time == b.state.next_push_time);
}

TEST_CASE("reset sampling: reach target lies on the object's lateral surface") {
  const EnvConfig cfg;
  const DomainRandomization dr;
  const WorldConfig world;
  const ArmModel arm;
  for (int i = 0; i < 200; ++i) {
    const ResetResult r =
        reset_sample(Rng::derive(7, static_cast<std::uint64_t>(i)), dr, cfg, world, arm);
    const ObjectParams& o = r.spec.object_params;
    const Vec3& t = r.spec.reach_target_obj;
    REQUIRE(t.z() >= 0.0);
    REQUIRE(t.z() <= o.dims.z());
    if (o.shape == Shape::kCuboid) {
      const bool on_x = std::abs(std::abs(t.x()) - 0.5 * o.dims.x()) < 1e-9 &&
                        std::abs(t.y()) <= 0.5 * o.dims.y() + 1e-9;
      const bool on_y = std::abs(std::abs(t.y()) - 0.5 * o.dims.y()) < 1e-9 &&
                        std::abs(t.x()) <= 0.5 * o.dims.x() + 1e-9;
      REQUIRE((on_x || on_y));
    } else {
      REQUIRE(std::hypot(t.x(), t.y()) == doctest::Approx(o.radius()).epsilon(1e-9));
    }
  }
}

TEST_CASE("apply_action: defaults, scaling and the dual clip path") {
  const EnvConfig cfg;
  const ArmModel arm;

  const AppliedCommands zero = apply_action(Action::Zero(), cfg, arm);
  CHECK(zero.base_abs.head<5>().norm() == 0.0);
  CHECK(zero.base_abs[5] == doctest::Approx(0.5));
  CHECK((zero.arm_abs - arm.q_default).norm() == 0.0);
  CHECK(zero.base_sim == zero.base_abs);

  Action unit = Action::Zero();
  unit[0] = 1.0;
  CHECK(apply_action(unit, cfg, arm).base_abs[0] == doctest::Approx(0.7));

  Action big = Action::Zero();
  big[0] = 2.0;  // 1.4 m/s requested
  const AppliedCommands cmd = apply_action(big, cfg, arm);
  CHECK(cmd.base_abs[0] == doctest::Approx(1.4));
  CHECK(cmd.base_sim[0] == doctest::Approx(0.7));  // clipped for the simulator
  CHECK(cmd.base_abs[0] > cfg.base_cmd_upper[0]);  // visible to the constraint path
}

TEST_CASE("check_success thresholds are inclusive") {
  const EnvConfig cfg;
  ObjectState obj;
  Pose2 goal{0, 0, 0};

  obj.planar_pose = {0.09, 0.0, 9.0 * kPi / 180.0};
  CHECK(check_success(obj, goal, cfg));

  obj.planar_pose = {0.10, 0.0, 10.0 * kPi / 180.0};
  CHECK(check_success(obj, goal, cfg));

  obj.planar_pose = {0.05, 0.0, 11.0 * kPi / 180.0};
  CHECK_FALSE(check_success(obj, goal, cfg));
}

TEST_CASE("check_success is invariant under rigid transforms") {
  const EnvConfig cfg;
  Rng rng(77);
  for (int i = 0; i < 500; ++i) {
    ObjectState obj;
    obj.planar_pose = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-kPi, kPi)};
    const Pose2 goal{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-kPi, kPi)};
    const bool before = check_success(obj, goal, cfg);

    const double phi = rng.uniform(-kPi, kPi);
    const Vec2 t(rng.uniform(-3, 3), rng.uniform(-3, 3));
    auto transform = [&](const Pose2& p) {
      const Vec2 xy = rotate2(phi, Vec2(p.x, p.y)) + t;
      return Pose2{xy.x(), xy.y(), wrap_angle(p.yaw + phi)};
    };
    ObjectState obj2;
    obj2.planar_pose = transform(obj.planar_pose);
    CHECK(check_success(obj2, transform(goal), cfg) == before);
  }
}

TEST_CASE("check_termination: timeout, topple, running") {
  EnvState st;
  st.step_count = 1000;
  CHECK(check_termination(st, 1000) == TerminationKind::kTimeout);
  st.step_count = 400;
  st.object.toppled = true;
  CHECK(check_termination(st, 1000) == TerminationKind::kToppled);
  st.object.toppled = false;
  st.step_count = 999;
  CHECK(check_termination(st, 1000) == TerminationKind::kRunning);
}

TEST_CASE("env_step: zero-action episode times out without success") {
  PushEnv env = make_env();
  // Pick a seed whose goal is comfortably away from the origin spawn.
  std::uint64_t seed = 0;
  for (std::uint64_t s = 1; s < 200; ++s) {
    env.reset(Rng(s));
    if (std::hypot(env.spec().goal_pose.x, env.spec().goal_pose.y) > 1.0) {
      seed = s;
      break;
    }
  }
  REQUIRE(seed != 0);
  env.reset(Rng(seed));
  int steps = 0;
  while (!env.terminated()) {
    env.step(Action::Zero());
    ++steps;
    REQUIRE(steps <= 1000);
  }
  CHECK(steps == 1000);
  CHECK(env.state().termination == TerminationKind::kTimeout);
  CHECK_FALSE(env.state().success_latched);
  CHECK_THROWS_AS(env.step(Action::Zero()), std::logic_error);
}

TEST_CASE("env_step: success latches and freezes the reach distance") {
  PushEnv env = make_env();
  env.reset(Rng(5));
  env.mutable_spec().goal_pose = env.state().object.planar_pose;  // immediate success
  const TransitionRecord rec = env.step(Action::Zero());
  CHECK(rec.success_latched);
  CHECK(env.state().steps_to_success == 1);
  CHECK(rec.frozen_reach_dist >= 0.0);
  const double frozen = rec.frozen_reach_dist;
  Action a = Action::Zero();
  a[6] = 0.4;  // wiggle the arm; the latch and frozen distance must persist
  for (int i = 0; i < 50; ++i) {
    const TransitionRecord r2 = env.step(a);
    CHECK(r2.success_latched);
    CHECK(r2.frozen_reach_dist == frozen);
  }
}

TEST_CASE("env_step: base disturbance intervals stay within [7, 10] s") {
  PushEnv env = make_env();
  env.reset(Rng(21));
  double last_scheduled = env.state().next_push_time;
  CHECK(last_scheduled >= 7.0);
  CHECK(last_scheduled <= 10.0);
  int pushes = 0;
  for (long step = 0; step < 500000; ++step) {
    if (env.terminated()) {
      env.reset(env.state().rng);
      last_scheduled = env.state().next_push_time;
      CHECK(last_scheduled >= 7.0);
      CHECK(last_scheduled <= 10.0);
      continue;
    }
    env.step(Action::Zero());
    const double next = env.state().next_push_time;
    if (next != last_scheduled) {
      const double interval = next - last_scheduled;
      REQUIRE(interval >= 7.0);
      REQUIRE(interval <= 10.0);
      last_scheduled = next;
      ++pushes;
    }
  }
  CHECK(pushes > 400);  // 10^4 seconds of simulated time
}

TEST_CASE("env_step: (seed, action sequence) determinism") {
  PushEnv a = make_env(), b = make_env();
  a.reset(Rng(31337));
  b.reset(Rng(31337));
  Rng action_rng(9);
  for (int i = 0; i < 300 && !a.terminated(); ++i) {
    Action act;
    for (int k = 0; k < kActionDim; ++k) act[k] = action_rng.uniform(-1.0, 1.0);
    const TransitionRecord ra = a.step(act);
    const TransitionRecord rb = b.step(act);
    REQUIRE(ra.obj_after.planar_pose.x == rb.obj_after.planar_pose.x);
    REQUIRE(ra.obj_after.planar_pose.yaw == rb.obj_after.planar_pose.yaw);
    REQUIRE(ra.robot_after.ee_pos_world == rb.robot_after.ee_pos_world);
    REQUIRE(ra.reach_dist == rb.reach_dist);
    REQUIRE(ra.base_cmd_abs == rb.base_cmd_abs);
  }
}
