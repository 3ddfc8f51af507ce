#include <benchmark/benchmark.h>

#include <string>

#include "skillforge/harness.hpp"
#include "skillforge/planner.hpp"
#include "skillforge/skilldef.hpp"
#include "skillforge/world.hpp"

using namespace skillforge;

namespace {

std::string data_path(const char* name) {
  return std::string(SKILLFORGE_DATA_DIR) + name;
}

const SkillGraph& curated_graph() {
  static SkillGraph g =
      SkillGraph::build(load_skill_file(data_path("/minecraft55.skills")));
  return g;
}

const SkillGraph& gridworld_graph() {
  static SkillGraph g =
      SkillGraph::build(load_skill_file(data_path("/gridworld.skills")));
  return g;
}

void BM_GraphBuild(benchmark::State& state) {
  auto defs = load_skill_file(data_path("/minecraft55.skills"));
  for (auto _ : state)
    benchmark::DoNotOptimize(SkillGraph::build(defs));
}
BENCHMARK(BM_GraphBuild);

void BM_PlanShort(benchmark::State& state) {
  const auto& g = curated_graph();
  Task task{"stick", Condition{}};
  for (auto _ : state)
    benchmark::DoNotOptimize(search_plan(g, task));
}
BENCHMARK(BM_PlanShort);

void BM_PlanLongHorizon(benchmark::State& state) {
  const auto& g = curated_graph();
  Task task{"iron_pickaxe", Condition{}};
  for (auto _ : state)
    benchmark::DoNotOptimize(search_plan(g, task));
}
BENCHMARK(BM_PlanLongHorizon);

void BM_SymbolicExecute(benchmark::State& state) {
  const auto& g = curated_graph();
  Plan plan = search_plan(g, Task{"iron_pickaxe", Condition{}});
  for (auto _ : state)
    benchmark::DoNotOptimize(symbolic_execute(g, plan, Condition{}));
}
BENCHMARK(BM_SymbolicExecute);

void BM_WorldGenerate(benchmark::State& state) {
  WorldConfig cfg = load_world_config(data_path("/world_default.toml"));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = ++seed;
    benchmark::DoNotOptimize(generate_world(cfg));
  }
}
BENCHMARK(BM_WorldGenerate);

void BM_WorldStep(benchmark::State& state) {
  WorldConfig cfg = load_world_config(data_path("/world_default.toml"));
  World world(cfg, gridworld_graph());
  int dir = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(world.step(Action::move(dir++ % 8)));
}
BENCHMARK(BM_WorldStep);

void BM_SkillAttempt(benchmark::State& state) {
  WorldConfig cfg = load_world_config(data_path("/world_default.toml"));
  const auto& g = gridworld_graph();
  const auto& skill = g.at("tree_nearby");
  std::uint64_t seed = 0;
  for (auto _ : state) {
    World world(cfg, g);
    world.reset(++seed);
    auto policies = scripted_policies(seed);
    benchmark::DoNotOptimize(world.execute_skill(skill, policies, 150));
  }
}
BENCHMARK(BM_SkillAttempt);

}  // namespace

BENCHMARK_MAIN();
