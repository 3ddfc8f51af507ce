#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "skillforge/learner.hpp"
#include "skillforge/planner.hpp"
#include "skillforge/world.hpp"

namespace skillforge {

enum class Method { Plan4MC, ZeroShot, HalfSteps, NoFind, InteractiveLlm };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct SuiteTask {
  Task task;
  std::string set_name;
  int expected_planning_steps = 0;
};

struct TaskSuite {
  std::vector<SuiteTask> tasks;
};

// Suite rows: target | initial k=v,... | preset | max_steps | plan_steps | set
TaskSuite load_task_suite(const std::string& path);
TaskSuite parse_task_suite(const std::string& text);

// Fresh executor for one episode; seeds make episodes reproducible and let
// methods share them pairwise.
using ExecutorFactory =
    std::function<std::unique_ptr<SkillExecutor>(const Task&, std::uint64_t seed)>;

struct TaskReport {
  std::string task_name;
  std::string set_name;
  Method method = Method::Plan4MC;
  int episodes = 0;
  double success_rate = 0;
  double mean_env_steps = 0;
  std::vector<ItemId> curve_skills;  // deduplicated initial plan
  std::vector<double> curve;         // leading 1.0 + per-skill success fraction
};

struct RunOptions {
  PlannerOptions planner;
  // per-skill step allowances used when a task carries no explicit cap
  std::map<ItemId, int> per_skill_steps;
  int default_skill_steps = 100;
};

TaskReport run_task(const SkillGraph& graph, const SuiteTask& task,
                    const ExecutorFactory& executors, Method method,
                    int episodes, std::uint64_t seed,
                    const RunOptions& opts = {});

std::vector<TaskReport> run_suite(const SkillGraph& graph,
                                  const TaskSuite& suite,
                                  const ExecutorFactory& executors,
                                  const std::vector<Method>& methods,
                                  int episodes, std::uint64_t seed,
                                  const RunOptions& opts = {});

// Fraction of episodes in which each (deduplicated, in plan order) skill
// succeeded at least once; a leading 1.0 stands for task start.
std::vector<double> step_success_curve(
    const std::vector<EpisodeResult>& episode_logs,
    const std::vector<ItemId>& dedup_plan);

std::vector<ItemId> dedup_plan(const Plan& plan);

std::string reports_to_csv(const std::vector<TaskReport>& reports);
std::string reports_to_json(const std::vector<TaskReport>& reports);
// writes report.csv, report.json and curves/*.csv under out_dir
void write_reports(const std::vector<TaskReport>& reports,
                   const std::string& out_dir);

// --- synthetic executor -------------------------------------------------------

// Symbolic executor with injected per-skill success probabilities: a success
// applies the skill's bookkeeping (require/consume/obtain, nearby clearing),
// a failure changes nothing. Each attempt costs one env step.
class BernoulliExecutor : public SkillExecutor {
 public:
  BernoulliExecutor(const SkillGraph& graph, Condition initial,
                    double success_prob, std::uint64_t seed);

  void set_skill_prob(const ItemId& skill, double p) { per_skill_[skill] = p; }

  SkillOutcome execute_skill(const ItemId& skill, double cap_scale) override;
  Condition read_condition() override;

 private:
  const SkillGraph& graph_;
  Condition condition_;
  double p_;
  std::map<ItemId, double> per_skill_;
  std::mt19937_64 rng_;
};

// Factory running each episode in its own seeded gridworld with the given
// per-skill policies and step caps.
ExecutorFactory gridworld_executors(
    const SkillGraph& graph, const WorldConfig& base_config,
    std::shared_ptr<std::map<ItemId, SkillPolicies>> policies,
    std::map<ItemId, int> step_caps, int default_cap = 100);

// Builds the per-skill policies fresh for every episode from the episode
// seed. Required for paired method comparisons: policy closures carry RNG
// and exploration-sheet state, so sharing one instance across episodes
// breaks the seed pairing.
using PoliciesBuilder =
    std::function<std::map<ItemId, SkillPolicies>(std::uint64_t seed)>;

ExecutorFactory gridworld_executors(
    const SkillGraph& graph, const WorldConfig& base_config,
    PoliciesBuilder policies, std::map<ItemId, int> step_caps,
    int default_cap = 100);

}  // namespace skillforge
