#include "skillforge/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "skillforge/errors.hpp"

namespace skillforge {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// config

int WorldConfig::hits_for(const std::string& entity) const {
  auto it = harvest_hits.find(entity);
  if (it != harvest_hits.end()) return it->second;
  if (is_mob(entity)) return 3;
  if (entity == "tree") return 5;
  if (entity == "stone") return 8;
  if (entity == "iron") return 10;
  return 1;
}

std::pair<std::string, int> WorldConfig::drop_for(
    const std::string& entity) const {
  auto it = harvest_drops.find(entity);
  if (it != harvest_drops.end()) return it->second;
  if (entity == "tree") return {"log", 1};
  return {entity, 1};
}

std::string WorldConfig::tool_for(const std::string& entity) const {
  auto it = harvest_tools.find(entity);
  return it == harvest_tools.end() ? "" : it->second;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') &&
      s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

}  // namespace

WorldConfig parse_world_config(const std::string& text) {
  WorldConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[' && s.back() == ']') {
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("world config line " + std::to_string(no) +
                        ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val = unquote(trim(s.substr(eq + 1)));
    if (!section.empty()) key = section + "." + key;

    auto starts = [&](const std::string& p) {
      return key.rfind(p, 0) == 0 ? key.substr(p.size()) : "";
    };
    try {
      if (auto e = starts("density."); !e.empty())
        cfg.resource_densities[e] = std::stod(val);
      else if (auto e = starts("underground."); !e.empty())
        cfg.underground_densities[e] = std::stod(val);
      else if (auto e = starts("mobs."); !e.empty())
        cfg.mob_counts[e] = std::stoi(val);
      else if (auto e = starts("hits."); !e.empty())
        cfg.harvest_hits[e] = std::stoi(val);
      else if (auto e = starts("tools."); !e.empty())
        cfg.harvest_tools[e] = val;
      else if (auto e = starts("drops."); !e.empty()) {
        size_t c = val.find(':');
        cfg.harvest_drops[e] = {trim(val.substr(0, c)),
                                c == std::string::npos
                                    ? 1
                                    : std::stoi(val.substr(c + 1))};
      } else if (key == "size")
        cfg.size = std::stoi(val);
      else if (key == "detection_radius")
        cfg.detection_radius = std::stoi(val);
      else if (key == "reach_distance")
        cfg.reach_distance = std::stoi(val);
      else if (key == "view_radius")
        cfg.view_radius = std::stoi(val);
      else if (key == "mob_flee")
        cfg.mob_flee = (val == "true" || val == "1");
      else if (key == "mob_walk_prob")
        cfg.mob_walk_prob = std::stod(val);
      else if (key == "seed")
        cfg.seed = std::stoull(val);
      else if (key == "biome")
        cfg.biome = val;
      else if (key == "ensure_near_entity")
        cfg.ensure_near_entity = val;
      else if (key == "ensure_near_radius")
        cfg.ensure_near_radius = std::stoi(val);
      else
        throw ConfigError("unknown world config key: " + key);
    } catch (const std::invalid_argument&) {
      throw ConfigError("world config line " + std::to_string(no) +
                        ": bad value '" + val + "' for " + key);
    }
  }
  if (cfg.size < 16) throw ConfigError("world size must be >= 16");
  if (cfg.detection_radius >= cfg.size)
    throw ConfigError("detection_radius must be < size");
  if (cfg.reach_distance < 1) throw ConfigError("reach_distance must be >= 1");
  return cfg;
}

WorldConfig load_world_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open world config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_world_config(ss.str());
}

// ---------------------------------------------------------------------------
// generation

namespace {

std::uint8_t intern(WorldState& st, const std::string& name) {
  auto it = std::find(st.entity_names.begin(), st.entity_names.end(), name);
  if (it != st.entity_names.end())
    return (std::uint8_t)(it - st.entity_names.begin() + 1);
  st.entity_names.push_back(name);
  return (std::uint8_t)st.entity_names.size();
}

}  // namespace

const std::string* WorldState::entity_at(Layer l, int px, int pz) const {
  if (!in_bounds(px, pz)) return nullptr;
  std::uint8_t t =
      (l == Layer::Surface ? surface : underground)[cell(px, pz)];
  return t ? &entity_names[t - 1] : nullptr;
}

WorldState generate_world(const WorldConfig& cfg) {
  WorldState st;
  st.size = cfg.size;
  int cells = cfg.size * cfg.size;
  st.surface.assign(cells, 0);
  st.underground.assign(cells, 0);
  st.surface_hits.assign(cells, 0);
  st.underground_hits.assign(cells, 0);
  st.rng.seed(cfg.seed);

  std::uniform_int_distribution<int> cell_dist(0, cfg.size - 1);
  st.x = cell_dist(st.rng);
  st.z = cell_dist(st.rng);
  st.heading = (int)(st.rng() % 8);

  auto place_layer = [&](std::vector<std::uint8_t>& grid,
                         const std::map<std::string, double>& densities) {
    for (const auto& [entity, density] : densities) {
      long want = (long)std::nearbyint(cells * density / 1000.0);
      long free = std::count(grid.begin(), grid.end(), 0) - 1;  // agent cell
      if (want > free)
        throw InfeasibleDensity("cannot place " + std::to_string(want) + " " +
                                entity + " entities");
      std::uint8_t id = intern(st, entity);
      for (long i = 0; i < want;) {
        int x = cell_dist(st.rng), z = cell_dist(st.rng);
        if (grid[st.cell(x, z)] || (x == st.x && z == st.z)) continue;
        grid[st.cell(x, z)] = id;
        ++i;
      }
    }
  };
  place_layer(st.surface, cfg.resource_densities);
  place_layer(st.underground, cfg.underground_densities);

  for (const auto& [mob, count] : cfg.mob_counts) {
    std::uint8_t id = intern(st, mob);
    for (int i = 0; i < count;) {
      int x = cell_dist(st.rng), z = cell_dist(st.rng);
      if (st.surface[st.cell(x, z)] || (x == st.x && z == st.z)) continue;
      st.mobs.push_back({id, x, z, 0, false, true});
      ++i;
    }
  }

  if (cfg.ensure_near_entity) {
    const std::string& entity = *cfg.ensure_near_entity;
    int r = cfg.ensure_near_radius;
    bool present = false;
    for (int dz = -r; dz <= r && !present; ++dz)
      for (int dx = -r; dx <= r && !present; ++dx) {
        const std::string* e = st.entity_at(Layer::Surface, st.x + dx, st.z + dz);
        if (e && *e == entity) present = true;
      }
    for (const auto& m : st.mobs)
      if (st.entity_names[m.type - 1] == entity &&
          chebyshev(m.x - st.x, m.z - st.z) <= r)
        present = true;
    if (!present) {
      std::uniform_int_distribution<int> off(-r, r);
      std::uint8_t id = intern(st, entity);
      for (int tries = 0; tries < 1000; ++tries) {
        int x = st.x + off(st.rng), z = st.z + off(st.rng);
        if (!st.in_bounds(x, z) || (x == st.x && z == st.z)) continue;
        if (st.surface[st.cell(x, z)]) continue;
        if (cfg.is_mob(entity))
          st.mobs.push_back({id, x, z, 0, false, true});
        else
          st.surface[st.cell(x, z)] = id;
        present = true;
        break;
      }
      if (!present)
        throw InfeasibleDensity("no free cell near spawn for " + entity);
    }
  }
  return st;
}

std::string serialize_world(const WorldState& st) {
  json j;
  j["size"] = st.size;
  j["layer"] = st.layer == Layer::Surface ? "surface" : "underground";
  j["pos"] = {st.x, st.z};
  j["y_depth"] = st.y_depth;
  j["heading"] = st.heading;
  j["entity_names"] = st.entity_names;
  j["surface"] = st.surface;
  j["underground"] = st.underground;
  j["surface_hits"] = st.surface_hits;
  j["underground_hits"] = st.underground_hits;
  json mobs = json::array();
  for (const auto& m : st.mobs)
    mobs.push_back({{"type", m.type}, {"x", m.x}, {"z", m.z},
                    {"hits", m.hits}, {"fleeing", m.fleeing},
                    {"alive", m.alive}});
  j["mobs"] = mobs;
  j["inventory"] = st.inventory;
  j["equipped"] = st.equipped ? json(*st.equipped) : json(nullptr);
  j["elapsed_steps"] = st.elapsed_steps;
  std::ostringstream rng;
  rng << st.rng;
  j["rng"] = rng.str();
  return j.dump();
}

// ---------------------------------------------------------------------------
// observation

const std::optional<LidarHit> Observation::nearest(
    const std::string& entity) const {
  for (const auto& h : lidar)
    if (h.entity == entity) return h;
  return std::nullopt;
}

World::World(WorldConfig cfg, const SkillGraph& graph)
    : cfg_(std::move(cfg)), graph_(&graph), state_(generate_world(cfg_)) {}

void World::reset(std::uint64_t seed) {
  cfg_.seed = seed;
  state_ = generate_world(cfg_);
}

Observation World::observe() const {
  const WorldState& st = state_;
  Observation obs;
  obs.view_radius = cfg_.view_radius;
  obs.x = st.x;
  obs.z = st.z;
  obs.y_depth = st.y_depth;
  obs.heading = st.heading;
  obs.layer = st.layer;
  obs.inventory = st.inventory;
  obs.world_size = st.size;
  obs.elapsed_steps = st.elapsed_steps;

  int v = cfg_.view_radius;
  obs.local_window.assign((2 * v + 1) * (2 * v + 1), "");
  auto window_set = [&](int dx, int dz, const std::string& name) {
    obs.local_window[(dz + v) * (2 * v + 1) + (dx + v)] = name;
  };

  int r = cfg_.detection_radius;
  for (int dz = -r; dz <= r; ++dz)
    for (int dx = -r; dx <= r; ++dx) {
      const std::string* e = st.entity_at(st.layer, st.x + dx, st.z + dz);
      if (!e) continue;
      obs.lidar.push_back({*e, dx, dz, chebyshev(dx, dz)});
      if (std::abs(dx) <= v && std::abs(dz) <= v) window_set(dx, dz, *e);
    }
  if (st.layer == Layer::Surface)
    for (const auto& m : st.mobs) {
      if (!m.alive) continue;
      int dx = m.x - st.x, dz = m.z - st.z;
      if (chebyshev(dx, dz) > r) continue;
      obs.lidar.push_back(
          {st.entity_names[m.type - 1], dx, dz, chebyshev(dx, dz)});
      if (std::abs(dx) <= v && std::abs(dz) <= v)
        window_set(dx, dz, st.entity_names[m.type - 1]);
    }
  std::stable_sort(obs.lidar.begin(), obs.lidar.end(),
                   [](const LidarHit& a, const LidarHit& b) {
                     return a.distance < b.distance;
                   });
  return obs;
}

Condition World::condition() const {
  const WorldState& st = state_;
  Condition c = Condition::from(st.inventory);
  int r = cfg_.reach_distance;
  for (int dz = -r; dz <= r; ++dz)
    for (int dx = -r; dx <= r; ++dx) {
      const std::string* e = st.entity_at(st.layer, st.x + dx, st.z + dz);
      if (e) c.add(*e + "_nearby", 1);
    }
  if (st.layer == Layer::Surface)
    for (const auto& m : st.mobs)
      if (m.alive && chebyshev(m.x - st.x, m.z - st.z) <= r)
        c.add(st.entity_names[m.type - 1] + "_nearby", 1);
  return c;
}

// ---------------------------------------------------------------------------
// stepping

void World::interact_nearest() {
  WorldState& st = state_;
  int r = cfg_.reach_distance;
  // nearest mob first, then nearest resource cell, deterministic scan order
  WorldState::Mob* mob = nullptr;
  int best = r + 1;
  if (st.layer == Layer::Surface)
    for (auto& m : st.mobs) {
      if (!m.alive) continue;
      int d = chebyshev(m.x - st.x, m.z - st.z);
      if (d < best) {
        best = d;
        mob = &m;
      }
    }
  int rx = -1, rz = -1;
  int rbest = r + 1;
  for (int dz = -r; dz <= r; ++dz)
    for (int dx = -r; dx <= r; ++dx) {
      if (st.entity_at(st.layer, st.x + dx, st.z + dz) &&
          chebyshev(dx, dz) < rbest) {
        rbest = chebyshev(dx, dz);
        rx = st.x + dx;
        rz = st.z + dz;
      }
    }

  auto ensure_tool = [&](const std::string& entity) {
    std::string tool = cfg_.tool_for(entity);
    if (tool.empty()) return true;
    auto it = st.inventory.find(tool);
    if (it == st.inventory.end() || it->second < 1) return false;
    st.equipped = tool;
    return true;
  };

  if (mob && best <= rbest) {
    const std::string& name = st.entity_names[mob->type - 1];
    if (!ensure_tool(name)) return;
    mob->hits += 1;
    if (cfg_.mob_flee) mob->fleeing = true;
    if (mob->hits >= cfg_.hits_for(name)) {
      mob->alive = false;
      auto [item, qty] = cfg_.drop_for(name);
      st.inventory[item] += qty;
    }
    return;
  }
  if (rx >= 0) {
    auto& grid = st.layer == Layer::Surface ? st.surface : st.underground;
    auto& hits = st.layer == Layer::Surface ? st.surface_hits : st.underground_hits;
    int c = st.cell(rx, rz);
    const std::string& name = st.entity_names[grid[c] - 1];
    if (!ensure_tool(name)) return;
    hits[c] += 1;
    if (hits[c] >= cfg_.hits_for(name)) {
      auto [item, qty] = cfg_.drop_for(name);
      st.inventory[item] += qty;
      grid[c] = 0;
      hits[c] = 0;
    }
  }
}

void World::apply(const Action& action) {
  WorldState& st = state_;
  switch (action.kind) {
    case Action::Kind::Move: {
      int d = ((action.dir % 8) + 8) % 8;
      st.heading = d;
      // slide along walls: a blocked component is dropped, not the whole move
      int nx = st.x + kDirX[d], nz = st.z + kDirZ[d];
      if (nx >= 0 && nx < st.size) st.x = nx;
      if (nz >= 0 && nz < st.size) st.z = nz;
      break;
    }
    case Action::Kind::Interact:
      interact_nearest();
      break;
    case Action::Kind::Place: {
      auto it = st.inventory.find(action.item);
      if (it == st.inventory.end() || it->second < 1) break;
      auto& grid = st.layer == Layer::Surface ? st.surface : st.underground;
      for (int d = 0; d < 8; ++d) {
        int nx = st.x + kDirX[d], nz = st.z + kDirZ[d];
        if (!st.in_bounds(nx, nz) || grid[st.cell(nx, nz)]) continue;
        grid[st.cell(nx, nz)] = intern(st, action.item);
        if (--it->second == 0) st.inventory.erase(it);
        break;
      }
      break;
    }
    case Action::Kind::DigDown:
      if (st.layer == Layer::Surface) {
        st.layer = Layer::Underground;
        st.y_depth = -1;
      } else {
        st.y_depth -= 1;
      }
      break;
    case Action::Kind::Ascend:
      if (st.layer == Layer::Underground) {
        if (st.y_depth < -1) {
          st.y_depth += 1;
        } else {
          st.layer = Layer::Surface;
          st.y_depth = 0;
        }
      }
      break;
    case Action::Kind::Craft: {
      const SkillDefinition* sk = graph_->find(action.item);
      if (!sk || sk->kind != SkillKind::Crafting) break;
      Condition cond = condition();
      bool ok = true;
      for (const auto& [item, n] : sk->require)
        if (cond.count(item) < n) ok = false;
      for (const auto& [item, n] : sk->consume)
        if (cond.count(item) < n) ok = false;
      if (!ok) break;
      for (const auto& [item, n] : sk->consume) {
        st.inventory[item] -= n;
        if (st.inventory[item] == 0) st.inventory.erase(item);
      }
      for (const auto& [item, n] : sk->obtain)
        if (!is_nearby(item)) st.inventory[item] += n;
      break;
    }
    case Action::Kind::Noop:
      break;
  }
}

void World::update_mobs() {
  WorldState& st = state_;
  for (auto& m : st.mobs) {
    if (!m.alive) continue;
    int dx = 0, dz = 0;
    if (m.fleeing && cfg_.mob_flee) {
      dx = m.x == st.x ? 0 : (m.x > st.x ? 1 : -1);
      dz = m.z == st.z ? 0 : (m.z > st.z ? 1 : -1);
    } else {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      if (u(st.rng) >= cfg_.mob_walk_prob) continue;
      int d = (int)(st.rng() % 8);
      dx = kDirX[d];
      dz = kDirZ[d];
    }
    int nx = m.x + dx, nz = m.z + dz;
    if (st.in_bounds(nx, nz) && !st.surface[st.cell(nx, nz)]) {
      m.x = nx;
      m.z = nz;
    }
  }
}

void World::write_trace(const Action& action) {
  if (!trace_) return;
  static const char* kinds[] = {"move",   "interact", "place", "dig_down",
                                "ascend", "craft",    "noop"};
  json j;
  j["t"] = state_.elapsed_steps;
  j["action"] = kinds[(int)action.kind];
  if (action.kind == Action::Kind::Move) j["dir"] = action.dir;
  if (!action.item.empty()) j["item"] = action.item;
  j["pos"] = {state_.x, state_.z};
  j["y_depth"] = state_.y_depth;
  j["inventory"] = state_.inventory;
  *trace_ << j.dump() << "\n";
}

Observation World::step(const Action& action) {
  apply(action);
  update_mobs();
  state_.elapsed_steps += 1;
  write_trace(action);
  return observe();
}

// ---------------------------------------------------------------------------
// skill-level execution

namespace {

const std::string* first_nearby_key(const ItemCount& m) {
  for (const auto& [k, v] : m)
    if (is_nearby(k)) return &k;
  return nullptr;
}

}  // namespace

SkillOutcome World::execute_skill(const SkillDefinition& skill,
                                  const SkillPolicies& policies, int step_cap) {
  SkillOutcome out;
  out.skill = skill.name;
  ItemCount before = state_.inventory;
  Condition cond0 = condition();
  long t0 = state_.elapsed_steps;

  auto finish = [&](bool success) {
    out.success = success;
    out.env_steps = (int)(state_.elapsed_steps - t0);
    for (const auto& [item, n] : state_.inventory) {
      int prev = before.count(item) ? before.at(item) : 0;
      if (n > prev) out.obtained[item] = n - prev;
    }
    if (success)
      for (const auto& [item, n] : skill.obtain)
        if (is_nearby(item)) out.obtained[item] = n;
    return out;
  };

  if (skill.kind == SkillKind::Crafting) {
    step(Action::craft(skill.name));
    return finish(state_.inventory.count(skill.name) &&
                  state_.inventory.at(skill.name) >
                      (before.count(skill.name) ? before.at(skill.name) : 0));
  }

  if (skill.kind == SkillKind::Finding) {
    std::string target = nearby_base(skill.name);
    int steps = 0;
    while (steps < step_cap) {
      Observation obs = observe();
      auto hit = obs.nearest(target);
      if (hit && hit->distance <= cfg_.reach_distance) return finish(true);
      if (hit) {
        step(policies.navigate(obs, state_.x + hit->dx, state_.z + hit->dz));
        ++steps;
        continue;
      }
      auto [gx, gz] = policies.propose_goal(obs);
      for (int i = 0; i < policies.low_level_horizon && steps < step_cap; ++i) {
        obs = observe();
        if (obs.nearest(target)) break;
        step(policies.navigate(obs, gx, gz));
        ++steps;
      }
    }
    Observation obs = observe();
    auto hit = obs.nearest(target);
    return finish(hit && hit->distance <= cfg_.reach_distance);
  }

  // Manipulation: placements resolve in one action, harvest/attack loops the
  // skill behavior until the goods are in the inventory.
  const std::string* placed = first_nearby_key(skill.obtain);
  if (placed && skill.consume.count(nearby_base(*placed))) {
    step(Action::place(nearby_base(*placed)));
    return finish(condition().count(*placed) >= skill.obtain.at(*placed));
  }

  const std::string* near_key = first_nearby_key(skill.consume);
  if (!near_key) near_key = first_nearby_key(skill.require);
  std::string target = near_key ? nearby_base(*near_key) : skill.name;
  int want = 0;
  for (const auto& [item, n] : skill.obtain)
    if (!is_nearby(item)) want = n;
  const std::string& obtained_item = skill.obtain.begin()->first;

  // Tool-gated harvesting: a missing tool can never succeed, bail out early.
  if (!skill.require.empty())
    for (const auto& [item, n] : skill.require)
      if (!is_nearby(item) && cond0.count(item) < n) return finish(false);

  // The target must actually have been found: a *_nearby precondition that
  // is not satisfied (target out of reach) fails the attempt. The aborted
  // attempt still costs one step so a controller can never retry for free.
  auto missing_nearby = [&](const ItemCount& section) {
    for (const auto& [item, n] : section)
      if (is_nearby(item) && cond0.count(item) < n) return true;
    return false;
  };
  if (missing_nearby(skill.consume) || missing_nearby(skill.require)) {
    step(Action{});  // refused attempt: time passes, the agent stays put
    return finish(false);
  }

  for (int steps = 0; steps < step_cap; ++steps) {
    Observation obs = observe();
    int have = obs.inventory.count(obtained_item)
                   ? obs.inventory.at(obtained_item)
                   : 0;
    int had = before.count(obtained_item) ? before.at(obtained_item) : 0;
    if (have >= had + want) return finish(true);
    step(policies.manipulate(obs, target));
  }
  int have = state_.inventory.count(obtained_item)
                 ? state_.inventory.at(obtained_item)
                 : 0;
  int had = before.count(obtained_item) ? before.at(obtained_item) : 0;
  return finish(have >= had + want);
}

// ---------------------------------------------------------------------------
// scripted behaviors

namespace {

int direction_toward(int dx, int dz) {
  int sx = dx == 0 ? 0 : (dx > 0 ? 1 : -1);
  int sz = dz == 0 ? 0 : (dz > 0 ? 1 : -1);
  for (int d = 0; d < 8; ++d)
    if (kDirX[d] == sx && kDirZ[d] == sz) return d;
  return 0;
}

}  // namespace

SkillPolicies scripted_policies(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  SkillPolicies p;
  p.navigate = [](const Observation& obs, int gx, int gz) {
    if (gx == obs.x && gz == obs.z) return Action::noop();
    return Action::move(direction_toward(gx - obs.x, gz - obs.z));
  };
  p.propose_goal = [rng](const Observation& obs) {
    int d = (int)((*rng)() % 8);
    return std::make_pair(obs.x + kDirX[d] * 10, obs.z + kDirZ[d] * 10);
  };
  p.manipulate = [rng](const Observation& obs, const std::string& target) {
    auto hit = obs.nearest(target);
    if (!hit) return Action::move((int)((*rng)() % 8));
    if (hit->distance <= 2) return Action::interact();
    return Action::move(direction_toward(hit->dx, hit->dz));
  };
  return p;
}

// ---------------------------------------------------------------------------

GridworldExecutor::GridworldExecutor(World& world,
                                     std::map<ItemId, SkillPolicies> policies,
                                     std::map<ItemId, int> step_caps,
                                     int default_cap)
    : world_(world), policies_(std::move(policies)),
      step_caps_(std::move(step_caps)), default_cap_(default_cap) {}

SkillOutcome GridworldExecutor::execute_skill(const ItemId& skill,
                                              double cap_scale) {
  const SkillDefinition& def = world_.graph().at(skill);
  auto pit = policies_.find(skill);
  SkillPolicies pol =
      pit != policies_.end() ? pit->second : scripted_policies(world_.state().rng());
  auto cit = step_caps_.find(skill);
  int cap = cit != step_caps_.end() ? cit->second : default_cap_;
  cap = std::max(1, (int)(cap * cap_scale));
  return world_.execute_skill(def, pol, cap);
}

Condition GridworldExecutor::read_condition() { return world_.condition(); }

}  // namespace skillforge
