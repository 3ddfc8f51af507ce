#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "skillforge/graph.hpp"
#include "skillforge/items.hpp"

namespace skillforge {

struct Plan {
  std::vector<ItemId> steps;

  size_t size() const { return steps.size(); }
  size_t distinct_count() const;
  bool operator==(const Plan&) const = default;
};

struct Task {
  ItemId goal;
  Condition initial;
  int max_env_steps = 0;        // 0 = no explicit cap (budget estimated)
  std::string world_preset;     // key into the world preset table; may be empty
  std::string display_name;     // task-suite label; defaults to goal
};

struct PlannerOptions {
  // The search's possession test: with strict_gt the planner only treats a
  // parent as satisfied when it holds strictly more than needed, which
  // over-produces one unit; default is >=.
  bool strict_gt = false;
  int depth_limit = 10000;
};

// Depth-first expansion planning exactly one execution of `goal`'s skill.
// Walks the parent edges in graph order; shortfalls recurse, consumed stock is
// deducted, surplus yield is credited back, and after planning any
// non-Crafting skill every nearby entry is dropped from `state` (the agent
// will have moved). Appends `goal` to `out` and credits its obtain map.
void dfs_expand(const SkillGraph& graph, const ItemId& goal, int needed,
                Condition& state, Plan& out, const PlannerOptions& opts = {});

// Plans from task.initial until one unit of task.goal is produced.
Plan search_plan(const SkillGraph& graph, const Task& task,
                 const PlannerOptions& opts = {});

struct StepRecord {
  ItemId skill;
  Condition after;
};

struct ExecTrace {
  Condition final;
  std::vector<StepRecord> records;
};

// Steps a plan through require/consume/obtain bookkeeping assuming every
// skill succeeds; the planner's correctness oracle. Throws ExecutionError
// when a step's requirements or inputs are missing.
ExecTrace symbolic_execute(const SkillGraph& graph, const Plan& plan,
                           const Condition& initial);

// ---------------------------------------------------------------------------
// interactive execution

struct SkillOutcome {
  ItemId skill;
  bool success = false;
  int env_steps = 0;
  ItemCount obtained;
};

// What the replanning controller needs from an environment: run one skill
// attempt and report the agent's current condition.
class SkillExecutor {
 public:
  virtual ~SkillExecutor() = default;
  // cap_scale stretches the per-attempt step cap (used by ablations).
  virtual SkillOutcome execute_skill(const ItemId& skill,
                                     double cap_scale = 1.0) = 0;
  virtual Condition read_condition() = 0;
};

struct EpisodeResult {
  bool success = false;
  int env_steps_used = 0;
  std::vector<SkillOutcome> outcomes;
};

struct ReplanOptions {
  PlannerOptions planner;
  double cap_scale = 1.0;
  bool skip_finding = false;  // ablation: drop Finding steps from every plan
};

// Plan -> execute first skill -> observe -> replan, until the goal item is
// held or the step budget runs out. Infeasible planning states end the
// episode as a failure, not an error.
EpisodeResult replan_and_execute(const SkillGraph& graph, const Task& task,
                                 SkillExecutor& executor, int budget,
                                 const ReplanOptions& opts = {});

// Execute the initial plan once, in order, aborting on the first failed
// skill; no replanning ("zero-shot").
EpisodeResult execute_zero_shot(const SkillGraph& graph, const Task& task,
                                SkillExecutor& executor, int budget,
                                const ReplanOptions& opts = {});

// 2 x the summed per-skill step allowance over the initial plan.
int estimate_budget(const SkillGraph& graph, const Task& task,
                    const std::map<ItemId, int>& per_skill_steps,
                    const PlannerOptions& opts = {});

}  // namespace skillforge
