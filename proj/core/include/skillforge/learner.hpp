#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skillforge/rewards.hpp"
#include "skillforge/world.hpp"

namespace skillforge {

enum class PolicyKind { GoalNav, ExplorerHigh, Manipulation };

struct PolicyTable {
  PolicyKind kind = PolicyKind::GoalNav;
  int n_actions = 8;
  std::map<long long, std::vector<double>> table;
  double epsilon = 0.0;
  int version = 0;

  std::vector<double>& row(long long state);
  // argmax with lowest-index tie break; unseen states pick action 0
  int greedy(long long state) const;
  bool has(long long state) const { return table.count(state) > 0; }
};

void save_policy(const PolicyTable& policy, const std::string& path);
PolicyTable load_policy(const std::string& path);

struct EpisodeRecord {
  double ret = 0;
  bool success = false;
  int env_steps = 0;
};

struct TrainingCurve {
  std::vector<EpisodeRecord> episodes;
  // trailing moving average over the success flags (or returns)
  std::vector<double> smoothed_success(int window) const;
  std::vector<double> smoothed_return(int window) const;
};

struct LearnerConfig {
  int episodes = 500;
  int step_cap = 80;
  double learning_rate = 0.2;
  double discount = 0.95;
  double epsilon_start = 0.4;
  double epsilon_end = 0.05;
  int smoothing_window = 100;
  int goal_distance = 10;
  int goal_directions = 4;
  double w_intrinsic = 1.0;
  double w_extrinsic = 10.0;
  int visit_cell_size = 10;
  int visit_side = 11;
  int spawn_radius = 2;
  std::uint64_t seed = 0;
};

LearnerConfig load_learner_config(const std::string& path);

// Builds seeded worlds from one base config.
struct WorldFactory {
  WorldConfig config;
  const SkillGraph* graph = nullptr;

  World make(std::uint64_t seed) const;
  World make_near(std::uint64_t seed, const std::string& entity,
                  int radius) const;
};

// Low level: one-step TD (Q-learning) on the goal-navigation reward;
// state = (clamped relative goal offset, heading), actions = 8 moves.
std::pair<PolicyTable, TrainingCurve> train_goal_nav(const WorldFactory& worlds,
                                                     const LearnerConfig& cfg);

// High level: return-weighted Monte Carlo over goal directions, rewarded by
// first visits on a coarse grid; the frozen low level walks each subgoal.
std::pair<PolicyTable, TrainingCurve> train_explorer(const WorldFactory& worlds,
                                                     const PolicyTable& low_level,
                                                     const LearnerConfig& cfg);

enum class TrainMode { SpawnNearby, GoExplore };

// Q-learning for one manipulation skill. SpawnNearby guarantees a target next
// to the spawn; GoExplore first runs the Finding-skill (the supplied explorer
// + navigator) and trains from wherever it ends up.
std::pair<PolicyTable, TrainingCurve> train_manipulation(
    const WorldFactory& worlds, const SkillDefinition& skill, TrainMode mode,
    const std::optional<std::pair<PolicyTable, PolicyTable>>& finding,
    const LearnerConfig& cfg);

// Checkpoint whose trailing-window success average peaks; earliest index wins
// ties. Checkpoints must align one-to-one with curve episodes.
PolicyTable select_model(const TrainingCurve& curve,
                         const std::vector<PolicyTable>& checkpoints,
                         int window);

// Wire learned tables into the world's skill-execution callbacks; any null
// table falls back to the scripted behavior.
SkillPolicies policies_from(const PolicyTable* nav, const PolicyTable* explorer,
                            const PolicyTable* manipulation,
                            const LearnerConfig& cfg, std::uint64_t seed);

// --- exploration evaluation -------------------------------------------------

// Runs the hierarchical explore loop for `steps` env steps and reports how
// many coarse grid squares were visited.
int run_exploration(World& world, const SkillPolicies& policies, int steps,
                    int cell_size = 10, int side = 11);
// Same metric for a flat per-step policy (random / hand-coded baselines).
int run_exploration_flat(World& world,
                         const std::function<Action(const Observation&)>& act,
                         int steps, int cell_size = 10, int side = 11);

std::function<Action(const Observation&)> random_walker(std::uint64_t seed);
// always forward, with an occasional random turn
std::function<Action(const Observation&)> handcoded_walker(std::uint64_t seed);

}  // namespace skillforge
