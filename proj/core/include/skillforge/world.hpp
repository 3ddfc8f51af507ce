#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "skillforge/graph.hpp"
#include "skillforge/items.hpp"
#include "skillforge/planner.hpp"

namespace skillforge {

// 8 compass directions, index 0 = north, clockwise.
inline constexpr int kDirX[8] = {0, 1, 1, 1, 0, -1, -1, -1};
inline constexpr int kDirZ[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

inline int chebyshev(int dx, int dz) {
  return std::max(dx < 0 ? -dx : dx, dz < 0 ? -dz : dz);
}

struct WorldConfig {
  int size = 32;
  // entities per 1,000 cells, by layer
  std::map<std::string, double> resource_densities;
  std::map<std::string, double> underground_densities;
  std::map<std::string, int> mob_counts;
  int detection_radius = 8;  // lidar range
  int reach_distance = 3;
  int view_radius = 4;
  std::map<std::string, int> harvest_hits;  // interactions to break/kill
  std::map<std::string, std::string> harvest_tools;  // entity -> needed tool
  std::map<std::string, std::pair<std::string, int>> harvest_drops;
  bool mob_flee = true;
  double mob_walk_prob = 0.2;
  std::uint64_t seed = 0;
  std::string biome = "plains";
  // when set, world generation guarantees one such entity within the radius
  // of the agent spawn (manipulation-skill training in spawn-nearby mode)
  std::optional<std::string> ensure_near_entity;
  int ensure_near_radius = 2;

  int hits_for(const std::string& entity) const;
  std::pair<std::string, int> drop_for(const std::string& entity) const;
  std::string tool_for(const std::string& entity) const;
  bool is_mob(const std::string& entity) const {
    return mob_counts.count(entity) > 0;
  }
};

WorldConfig load_world_config(const std::string& path);
WorldConfig parse_world_config(const std::string& text);

enum class Layer { Surface, Underground };

struct WorldState {
  int size = 0;
  Layer layer = Layer::Surface;
  int x = 0, z = 0;
  int y_depth = 0;  // 0 = surface, negative below
  int heading = 0;  // direction index

  std::vector<std::string> entity_names;       // grid stores index+1
  std::vector<std::uint8_t> surface, underground;
  std::vector<std::uint8_t> surface_hits, underground_hits;

  struct Mob {
    std::uint8_t type = 0;  // entity_names index + 1
    int x = 0, z = 0;
    int hits = 0;
    bool fleeing = false;
    bool alive = true;
  };
  std::vector<Mob> mobs;

  ItemCount inventory;
  std::optional<ItemId> equipped;
  long elapsed_steps = 0;
  std::mt19937_64 rng;

  int cell(int x, int z) const { return z * size + x; }
  bool in_bounds(int x, int z) const {
    return x >= 0 && z >= 0 && x < size && z < size;
  }
  const std::string* entity_at(Layer layer, int x, int z) const;
};

std::string serialize_world(const WorldState& state);

struct LidarHit {
  std::string entity;
  int dx = 0, dz = 0;
  int distance = 0;

  bool operator==(const LidarHit&) const = default;
};

struct Observation {
  int view_radius = 0;
  std::vector<std::string> local_window;  // (2v+1)^2 row-major, "" = empty
  std::vector<LidarHit> lidar;            // ascending distance
  ItemCount inventory;
  int x = 0, z = 0, y_depth = 0, heading = 0;
  Layer layer = Layer::Surface;
  int world_size = 0;
  long elapsed_steps = 0;

  const std::optional<LidarHit> nearest(const std::string& entity) const;
};

struct Action {
  enum class Kind { Move, Interact, Place, DigDown, Ascend, Craft, Noop };
  Kind kind = Kind::Noop;
  int dir = 0;   // Move
  ItemId item;   // Place: inventory item; Craft: skill name

  static Action move(int dir) { return {Kind::Move, dir, {}}; }
  static Action interact() { return {Kind::Interact, 0, {}}; }
  static Action place(ItemId item) { return {Kind::Place, 0, std::move(item)}; }
  static Action dig_down() { return {Kind::DigDown, 0, {}}; }
  static Action ascend() { return {Kind::Ascend, 0, {}}; }
  static Action craft(ItemId skill) { return {Kind::Craft, 0, std::move(skill)}; }
  static Action noop() { return {Kind::Noop, 0, {}}; }
};

// Policy callbacks wired in by the caller: scripted ones below, learned ones
// from the learner module.
struct SkillPolicies {
  // step toward an absolute cell
  std::function<Action(const Observation&, int gx, int gz)> navigate;
  // next exploration goal for the Finding loop (absolute cell)
  std::function<std::pair<int, int>(const Observation&)> propose_goal;
  // one action of a manipulation behavior against the named entity
  std::function<Action(const Observation&, const std::string& target)> manipulate;
  // env steps the low level runs per proposed goal
  int low_level_horizon = 12;
};

SkillPolicies scripted_policies(std::uint64_t seed = 0);

class World {
 public:
  World(WorldConfig cfg, const SkillGraph& graph);

  void reset(std::uint64_t seed);
  Observation observe() const;
  Observation step(const Action& action);
  Condition condition() const;

  SkillOutcome execute_skill(const SkillDefinition& skill,
                             const SkillPolicies& policies, int step_cap);

  WorldState& state() { return state_; }
  const WorldState& state() const { return state_; }
  const WorldConfig& config() const { return cfg_; }
  const SkillGraph& graph() const { return *graph_; }
  void set_trace(std::ostream* out) { trace_ = out; }

 private:
  void apply(const Action& action);
  void update_mobs();
  void interact_nearest();
  void write_trace(const Action& action);

  WorldConfig cfg_;
  const SkillGraph* graph_;
  WorldState state_;
  std::ostream* trace_ = nullptr;
};

WorldState generate_world(const WorldConfig& cfg);

// An executor over a live gridworld: runs one skill attempt per call using
// per-skill policies and step caps.
class GridworldExecutor : public SkillExecutor {
 public:
  GridworldExecutor(World& world,
                    std::map<ItemId, SkillPolicies> policies,
                    std::map<ItemId, int> step_caps,
                    int default_cap = 100);

  SkillOutcome execute_skill(const ItemId& skill, double cap_scale) override;
  Condition read_condition() override;

 private:
  World& world_;
  std::map<ItemId, SkillPolicies> policies_;
  std::map<ItemId, int> step_caps_;
  int default_cap_;
};

}  // namespace skillforge
