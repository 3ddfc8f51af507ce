// Shared test machinery: randomized acyclic skill sets plus a brute-force
// feasibility oracle to check the planner against.
#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "skillforge/errors.hpp"
#include "skillforge/graph.hpp"
#include "skillforge/planner.hpp"

namespace testing_support {

using namespace skillforge;

struct RandomSkillSet {
  std::vector<SkillDefinition> defs;
  std::set<ItemId> primitives;
  Condition initial;
  ItemId goal;
};

// Acyclic by construction: skill i only draws inputs from items produced by
// skills j < i or from the declared primitives. Parent quantities for crafted
// inputs never exceed that parent's own yield, which keeps plan expansion
// small; primitives may or may not be stocked, so infeasible instances occur.
inline RandomSkillSet make_random_skill_set(std::mt19937_64& rng,
                                            int max_skills = 12) {
  std::uniform_int_distribution<int> skill_count(2, max_skills);
  std::uniform_int_distribution<int> coin(0, 1);
  auto rand_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  RandomSkillSet out;
  out.primitives = {"p0", "p1"};
  // Every item has a fixed role: "tools" are only ever required (and never
  // consumed), "materials" only consumed. Mixing the two on one item is
  // unsound under depth-first planning by design, so the sampler avoids it.
  std::vector<ItemId> pool = {"p0", "p1"};
  std::map<ItemId, int> yield_of = {{"p0", 1}, {"p1", 1}};
  std::set<ItemId> tools;

  int n = skill_count(rng);
  for (int i = 0; i < n; ++i) {
    SkillDefinition d;
    bool finding = i == 0 && rand_int(0, 3) == 0;
    d.name = finding ? "s0_nearby" : "s" + std::to_string(i);
    int yield = rand_int(1, 3);
    d.obtain[d.name] = yield;

    if (!finding) {
      int n_parents = std::min<int>(rand_int(0, 2), (int)pool.size());
      std::vector<ItemId> picks = pool;
      std::shuffle(picks.begin(), picks.end(), rng);
      picks.resize(n_parents);
      for (const auto& parent : picks) {
        // crafted inputs never demand more than one craft of the parent
        // yields, keeping witness plans short
        int qty = rand_int(1, yield_of.at(parent));
        if (is_nearby(parent))
          d.require[parent] = 1;
        else if (tools.count(parent))
          d.require[parent] = qty;
        else
          d.consume[parent] = qty;
      }
    }
    d.kind = infer_kind(d.name, d.consume, d.require, d.equip);
    out.defs.push_back(d);
    yield_of[d.name] = yield;
    pool.push_back(d.name);
    if (!finding && rand_int(0, 2) == 0) tools.insert(d.name);
  }

  // random primitive stock; zero stock is what makes instances infeasible
  for (const auto& p : out.primitives)
    if (int c = rand_int(0, 3); c > 0) out.initial.add(p, c);
  // occasionally pre-stock an intermediate
  if (rand_int(0, 3) == 0 && out.defs.size() > 1) {
    const auto& pick = out.defs[rand_int(0, (int)out.defs.size() - 2)].name;
    if (!is_nearby(pick)) out.initial.add(pick, rand_int(1, 2));
  }

  out.goal = out.defs.back().name;
  return out;
}

struct OracleKey {
  ItemCount inventory, nearby;
  auto operator<=>(const OracleKey&) const = default;
};

// Breadth-first search over reachable conditions, executing any skill whose
// requirements hold. Counts are capped so the state space stays finite; the
// cap is safe as long as no single skill needs more than `cap` of one item.
inline bool oracle_feasible(const SkillGraph& graph, const Condition& initial,
                            const ItemId& goal, int max_len = 20, int cap = 12) {
  auto clamp_counts = [&](ItemCount m) {
    for (auto& [k, v] : m) v = std::min(v, cap);
    return m;
  };
  std::set<OracleKey> seen;
  std::deque<std::pair<Condition, int>> queue;
  queue.emplace_back(initial, 0);
  seen.insert({clamp_counts(initial.inventory()), clamp_counts(initial.nearby())});

  while (!queue.empty()) {
    auto [cond, len] = queue.front();
    queue.pop_front();
    if (cond.count(goal) >= 1) return true;
    if (len >= max_len) continue;

    for (const auto& [name, sk] : graph.skills()) {
      bool ok = true;
      for (const auto& [item, nn] : sk.require)
        if (cond.count(item) < nn) { ok = false; break; }
      for (const auto& [item, nn] : sk.consume)
        if (ok && cond.count(item) < nn) { ok = false; break; }
      if (!ok) continue;

      Condition next = cond;
      for (const auto& [item, nn] : sk.consume) next.remove(item, nn);
      if (sk.kind != SkillKind::Crafting) next.clear_nearby();
      for (const auto& [item, nn] : sk.obtain) next.add(item, nn);

      OracleKey key{clamp_counts(next.inventory()), clamp_counts(next.nearby())};
      if (seen.insert(key).second) queue.emplace_back(std::move(next), len + 1);
    }
  }
  return false;
}

inline std::optional<Plan> planner_answer(const SkillGraph& graph,
                                          const Task& task) {
  try {
    return search_plan(graph, task);
  } catch (const UnproducibleItem&) {
    return std::nullopt;
  }
}

}  // namespace testing_support
