#include <benchmark/benchmark.h>

#include "pushrl/config.hpp"
#include "pushrl/trainer.hpp"

namespace {

using namespace pushrl;

void BM_StepWorld(benchmark::State& state) {
  const WorldConfig cfg;
  const ArmModel arm;
  ObjectParams params;
  params.dims = Vec3(0.5, 0.4, 0.6);
  ObjectState obj;
  RobotState robot;
  robot.base_pose = {1.0, 0.0, kPi};
  robot.ee_pos_world = forward_kinematics(arm, robot);
  BaseCmd cmd = BaseCmd::Zero();
  cmd[0] = 0.4;
  cmd[5] = 0.5;
  const ArmVec q_cmd = arm.q_default;
  for (auto _ : state) {
    const StepResult r = step_world(robot, obj, params, cfg, arm, cmd, q_cmd);
    benchmark::DoNotOptimize(r.object.planar_pose.x);
    robot = r.robot;
  }
}
BENCHMARK(BM_StepWorld);

void BM_EnvStep(benchmark::State& state) {
  PushEnv env(EnvConfig{}, WorldConfig{}, ArmModel{}, DomainRandomization{});
  env.reset(Rng(7));
  Action a = Action::Zero();
  a[0] = 0.3;
  for (auto _ : state) {
    if (env.terminated()) env.reset(env.state().rng);
    const TransitionRecord rec = env.step(a);
    benchmark::DoNotOptimize(rec.reach_dist);
  }
}
BENCHMARK(BM_EnvStep);

void BM_ObbKeypoints(benchmark::State& state) {
  ObjectParams params;
  params.dims = Vec3(0.6, 0.34, 0.4);
  ObjectState obj;
  obj.planar_pose = {0.3, -0.2, 0.7};
  obj.tilt.angle = 0.1;
  for (auto _ : state) {
    const auto k = obb_keypoints(params, obj);
    benchmark::DoNotOptimize(k[0].x());
  }
}
BENCHMARK(BM_ObbKeypoints);

void BM_ActorForward(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  GaussianActor actor({256, 128, 64});
  Rng rng(3);
  actor.init_params(rng);
  MatX obs(batch, kActorObsDim);
  for (Eigen::Index i = 0; i < obs.size(); ++i) obs.data()[i] = rng.normal();
  MatX means;
  VecX log_std;
  for (auto _ : state) {
    actor.forward(obs, &means, &log_std);
    benchmark::DoNotOptimize(means(0, 0));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_ActorForward)->Arg(1)->Arg(256)->Arg(3072);

void BM_TrainIteration(benchmark::State& state) {
  RunConfig cfg;
  cfg.ppo.num_envs = 32;
  cfg.ppo.horizon = 16;
  cfg.ppo.iterations = 1 << 20;
  Trainer trainer(cfg);
  for (auto _ : state) {
    const IterationMetrics m = trainer.run_iteration();
    benchmark::DoNotOptimize(m.mean_reward);
  }
}
BENCHMARK(BM_TrainIteration)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
