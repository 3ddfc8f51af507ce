#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "random_graphs.hpp"
#include "skillforge/errors.hpp"

using namespace skillforge;
using namespace testing_support;

TEST_CASE("planner is sound on 1000 randomized skill sets") {
  std::mt19937_64 rng(20240901);
  int planned = 0, infeasible = 0;
  for (int i = 0; i < 1000; ++i) {
    auto sample = make_random_skill_set(rng, 12);
    auto graph = SkillGraph::build(sample.defs, sample.primitives);
    auto plan = planner_answer(graph, Task{sample.goal, sample.initial});
    if (!plan) {
      ++infeasible;
      continue;
    }
    ++planned;
    auto trace = symbolic_execute(graph, *plan, sample.initial);
    CHECK(trace.final.count(sample.goal) >= 1);
  }
  // both outcomes must actually occur or the sample is vacuous
  CHECK(planned > 100);
  CHECK(infeasible > 100);
}

TEST_CASE("planner is sound on both bundled skill sets") {
  for (const char* file : {"/minecraft55.skills", "/gridworld.skills"}) {
    auto graph =
        SkillGraph::build(load_skill_file(std::string(SKILLFORGE_DATA_DIR) + file));
    for (const auto& [name, def] : graph.skills()) {
      auto plan = search_plan(graph, Task{name, Condition{}});
      auto trace = symbolic_execute(graph, plan, Condition{});
      CHECK(trace.final.count(name) >= 1);
    }
  }
}

TEST_CASE("planner feasibility agrees with exhaustive search on small graphs") {
  std::mt19937_64 rng(77);
  int checked = 0, feasible = 0;
  while (checked < 1000) {
    auto sample = make_random_skill_set(rng, 8);
    auto graph = SkillGraph::build(sample.defs, sample.primitives);
    auto plan = planner_answer(graph, Task{sample.goal, sample.initial});
    // the oracle only enumerates sequences up to 20 steps, so skip the rare
    // sample whose witness plan is longer than that
    if (plan && plan->size() > 20) continue;
    ++checked;
    bool oracle = oracle_feasible(graph, sample.initial, sample.goal, 20);
    CHECK(plan.has_value() == oracle);
    if (oracle) ++feasible;
  }
  CHECK(feasible > 100);
  CHECK(checked - feasible > 100);
}
