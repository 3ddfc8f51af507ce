#include "skillforge/planner.hpp"

#include <algorithm>
#include <set>

#include "skillforge/errors.hpp"

namespace skillforge {

size_t Plan::distinct_count() const {
  return std::set<ItemId>(steps.begin(), steps.end()).size();
}

namespace {

struct Dfs {
  const SkillGraph& graph;
  const PlannerOptions& opts;
  int expansions = 0;

  void expand(const ItemId& goal, int /*needed*/, Condition& state, Plan& out) {
    if (++expansions > opts.depth_limit)
      throw PlanDepthExceeded("plan expansion limit " +
                              std::to_string(opts.depth_limit) + " exceeded");
    const SkillDefinition* sk = graph.find(goal);
    if (!sk) throw UnproducibleItem(goal);

    for (const DependencyEdge& e : graph.parents(goal)) {
      int have = state.count(e.parent);
      bool satisfied = opts.strict_gt ? have > e.parent_qty : have >= e.parent_qty;
      if (satisfied) {
        if (e.mode == EdgeMode::Consume) state.remove(e.parent, e.parent_qty);
        continue;
      }
      // the strict test demands one unit beyond the stated quantity
      int todo = e.parent_qty - have + (opts.strict_gt ? 1 : 0);
      // Partial stock that will be consumed is earmarked now, so the
      // recursion plans only the shortfall.
      if (e.mode == EdgeMode::Consume) state.remove(e.parent, have);
      while (todo > 0) {
        expand(e.parent, todo, state, out);
        int yielded = graph.at(e.parent).obtain.at(e.parent);
        if (e.mode == EdgeMode::Consume) {
          int take = std::min({todo, yielded, state.count(e.parent)});
          state.remove(e.parent, take);
        }
        todo -= yielded;  // surplus stays in state
      }
    }

    // Planning a non-Crafting skill means the agent travels: every nearby
    // site is stale afterwards, except what this very skill yields.
    if (sk->kind != SkillKind::Crafting) state.clear_nearby();
    for (const auto& [item, n] : sk->obtain) state.add(item, n);
    out.steps.push_back(goal);
  }
};

}  // namespace

void dfs_expand(const SkillGraph& graph, const ItemId& goal, int needed,
                Condition& state, Plan& out, const PlannerOptions& opts) {
  Dfs dfs{graph, opts};
  dfs.expand(goal, needed, state, out);
}

Plan search_plan(const SkillGraph& graph, const Task& task,
                 const PlannerOptions& opts) {
  Condition state = task.initial;
  Plan out;
  dfs_expand(graph, task.goal, 1, state, out, opts);
  return out;
}

ExecTrace symbolic_execute(const SkillGraph& graph, const Plan& plan,
                           const Condition& initial) {
  ExecTrace trace;
  trace.final = initial;
  Condition& st = trace.final;
  for (size_t i = 0; i < plan.steps.size(); ++i) {
    const SkillDefinition& sk = graph.at(plan.steps[i]);
    for (const auto& [item, n] : sk.require)
      if (st.count(item) < n)
        throw ExecutionError("unsatisfied requirement " + item + ": have " +
                                 std::to_string(st.count(item)) + ", need " +
                                 std::to_string(n),
                             (int)i);
    for (const auto& [item, n] : sk.consume)
      if (st.count(item) < n)
        throw ExecutionError("unsatisfied consume " + item + ": have " +
                                 std::to_string(st.count(item)) + ", need " +
                                 std::to_string(n),
                             (int)i);
    for (const auto& [item, n] : sk.consume) st.remove(item, n);
    if (sk.kind != SkillKind::Crafting) st.clear_nearby();
    for (const auto& [item, n] : sk.obtain) st.add(item, n);
    trace.records.push_back({plan.steps[i], st});
  }
  return trace;
}

namespace {

std::optional<Plan> try_plan(const SkillGraph& graph, const Task& task,
                             const PlannerOptions& opts) {
  try {
    return search_plan(graph, task, opts);
  } catch (const UnproducibleItem&) {
    return std::nullopt;
  }
}

}  // namespace

EpisodeResult replan_and_execute(const SkillGraph& graph, const Task& task,
                                 SkillExecutor& executor, int budget,
                                 const ReplanOptions& opts) {
  EpisodeResult result;
  while (true) {
    Condition cond = executor.read_condition();
    if (cond.count(task.goal) >= 1) {
      result.success = true;
      return result;
    }
    if (result.env_steps_used >= budget) return result;

    Task now{task.goal, cond};
    auto plan = try_plan(graph, now, opts.planner);
    if (!plan || plan->steps.empty()) return result;

    ItemId next;
    for (const ItemId& s : plan->steps) {
      if (opts.skip_finding && graph.at(s).kind == SkillKind::Finding) continue;
      next = s;
      break;
    }
    if (next.empty()) return result;

    SkillOutcome outcome = executor.execute_skill(next, opts.cap_scale);
    result.env_steps_used += outcome.env_steps;
    result.outcomes.push_back(std::move(outcome));
  }
}

EpisodeResult execute_zero_shot(const SkillGraph& graph, const Task& task,
                                SkillExecutor& executor, int budget,
                                const ReplanOptions& opts) {
  EpisodeResult result;
  Condition cond = executor.read_condition();
  if (cond.count(task.goal) >= 1) {
    result.success = true;
    return result;
  }
  auto plan = try_plan(graph, {task.goal, cond}, opts.planner);
  if (!plan) return result;

  for (const ItemId& s : plan->steps) {
    if (opts.skip_finding && graph.at(s).kind == SkillKind::Finding) continue;
    if (result.env_steps_used >= budget) return result;
    SkillOutcome outcome = executor.execute_skill(s, opts.cap_scale);
    result.env_steps_used += outcome.env_steps;
    bool ok = outcome.success;
    result.outcomes.push_back(std::move(outcome));
    if (!ok) return result;  // no fault tolerance
  }
  result.success = executor.read_condition().count(task.goal) >= 1;
  return result;
}

int estimate_budget(const SkillGraph& graph, const Task& task,
                    const std::map<ItemId, int>& per_skill_steps,
                    const PlannerOptions& opts) {
  Plan plan = search_plan(graph, task, opts);
  long total = 0;
  for (const ItemId& s : plan.steps) {
    auto it = per_skill_steps.find(s);
    if (it == per_skill_steps.end())
      throw ConfigError("no step allowance configured for skill " + s);
    total += it->second;
  }
  return (int)(2 * total);
}

}  // namespace skillforge
