#include "skillforge/learner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "skillforge/errors.hpp"

namespace skillforge {

using json = nlohmann::ordered_json;

std::vector<double>& PolicyTable::row(long long state) {
  auto it = table.find(state);
  if (it == table.end())
    it = table.emplace(state, std::vector<double>(n_actions, 0.0)).first;
  return it->second;
}

int PolicyTable::greedy(long long state) const {
  auto it = table.find(state);
  if (it == table.end()) return 0;
  const auto& q = it->second;
  return (int)(std::max_element(q.begin(), q.end()) - q.begin());
}

void save_policy(const PolicyTable& policy, const std::string& path) {
  json j;
  j["kind"] = (int)policy.kind;
  j["n_actions"] = policy.n_actions;
  j["epsilon"] = policy.epsilon;
  j["version"] = policy.version;
  json table = json::object();
  for (const auto& [s, q] : policy.table) table[std::to_string(s)] = q;
  j["table"] = table;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write policy: " + path);
  out << j.dump(1);
}

PolicyTable load_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read policy: " + path);
  json j = json::parse(in);
  PolicyTable p;
  p.kind = (PolicyKind)j.at("kind").get<int>();
  p.n_actions = j.at("n_actions").get<int>();
  p.epsilon = j.at("epsilon").get<double>();
  p.version = j.at("version").get<int>();
  for (const auto& [k, v] : j.at("table").items())
    p.table[std::stoll(k)] = v.get<std::vector<double>>();
  return p;
}

static std::vector<double> smooth(const std::vector<double>& xs, int window) {
  std::vector<double> out(xs.size(), 0.0);
  double acc = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    acc += xs[i];
    if ((int)i >= window) acc -= xs[i - window];
    out[i] = acc / std::min<int>((int)i + 1, window);
  }
  return out;
}

std::vector<double> TrainingCurve::smoothed_success(int window) const {
  std::vector<double> xs;
  for (const auto& e : episodes) xs.push_back(e.success ? 1.0 : 0.0);
  return smooth(xs, window);
}

std::vector<double> TrainingCurve::smoothed_return(int window) const {
  std::vector<double> xs;
  for (const auto& e : episodes) xs.push_back(e.ret);
  return smooth(xs, window);
}

LearnerConfig load_learner_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open learner config: " + path);
  LearnerConfig c;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    size_t h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    std::istringstream ls(line);
    std::string key, eq;
    if (!(ls >> key)) continue;
    double v;
    if (!(ls >> eq >> v) || eq != "=")
      throw ConfigError("learner config line " + std::to_string(no));
    if (key == "episodes") c.episodes = (int)v;
    else if (key == "step_cap") c.step_cap = (int)v;
    else if (key == "learning_rate") c.learning_rate = v;
    else if (key == "discount") c.discount = v;
    else if (key == "epsilon_start") c.epsilon_start = v;
    else if (key == "epsilon_end") c.epsilon_end = v;
    else if (key == "smoothing_window") c.smoothing_window = (int)v;
    else if (key == "goal_distance") c.goal_distance = (int)v;
    else if (key == "goal_directions") c.goal_directions = (int)v;
    else if (key == "w_intrinsic") c.w_intrinsic = v;
    else if (key == "w_extrinsic") c.w_extrinsic = v;
    else if (key == "visit_cell_size") c.visit_cell_size = (int)v;
    else if (key == "visit_side") c.visit_side = (int)v;
    else if (key == "spawn_radius") c.spawn_radius = (int)v;
    else if (key == "seed") c.seed = (std::uint64_t)v;
    else throw ConfigError("unknown learner config key: " + key);
  }
  if (c.smoothing_window < 1) throw ConfigError("smoothing_window must be >= 1");
  return c;
}

World WorldFactory::make(std::uint64_t seed) const {
  WorldConfig cfg = config;
  cfg.seed = seed;
  return World(cfg, *graph);
}

World WorldFactory::make_near(std::uint64_t seed, const std::string& entity,
                              int radius) const {
  WorldConfig cfg = config;
  cfg.seed = seed;
  cfg.ensure_near_entity = entity;
  cfg.ensure_near_radius = radius;
  return World(cfg, *graph);
}

// ---------------------------------------------------------------------------
// state encodings

namespace {

int clampi(int v, int lo, int hi) { return std::max(lo, std::min(hi, v)); }

// (relative goal offset clamped to +-2, heading)
long long nav_state(int dx, int dz, int heading) {
  int bx = clampi(dx, -2, 2) + 2;
  int bz = clampi(dz, -2, 2) + 2;
  return ((long long)bx * 5 + bz) * 8 + heading;
}

double heading_alignment(int dir, int dx, int dz) {
  if (dx == 0 && dz == 0) return 1.0;
  double hx = kDirX[dir], hz = kDirZ[dir];
  double gx = dx, gz = dz;
  double dot = hx * gx + hz * gz;
  return dot / (std::hypot(hx, hz) * std::hypot(gx, gz));
}

// novelty pattern of the eight neighbouring coarse squares: bit d is set
// when one step of `cell` in direction d lands on an unvisited square; the
// rule "head for fresh squares" generalises across positions and episodes
long long explorer_state(const VisitGrid& grid, int cell, int x, int z,
                         int world_size) {
  long long bits = 0;
  for (int d = 0; d < 8; ++d) {
    int nx = x + kDirX[d] * cell;
    int nz = z + kDirZ[d] * cell;
    bool off_world = nx < 0 || nz < 0 || nx >= world_size || nz >= world_size;
    if (!off_world && !grid.seen(nx, nz)) bits |= (1LL << d);
  }
  return bits;
}

// (clamped offset to nearest target | not-visible)
long long manip_state(const Observation& obs, const std::string& target) {
  auto hit = obs.nearest(target);
  if (!hit) return 81;
  int bx = clampi(hit->dx, -4, 4) + 4;
  int bz = clampi(hit->dz, -4, 4) + 4;
  return (long long)bx * 9 + bz;
}

double epsilon_at(const LearnerConfig& cfg, int episode) {
  if (cfg.episodes <= 1) return cfg.epsilon_end;
  double t = (double)episode / (cfg.episodes - 1);
  return cfg.epsilon_start + t * (cfg.epsilon_end - cfg.epsilon_start);
}

int pick_action(const PolicyTable& pol, long long s, double eps,
                std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  if (u(rng) < eps) return (int)(rng() % pol.n_actions);
  return pol.greedy(s);
}

std::string manipulation_target(const SkillDefinition& skill) {
  for (const auto& [k, v] : skill.consume)
    if (is_nearby(k)) return nearby_base(k);
  for (const auto& [k, v] : skill.require)
    if (is_nearby(k)) return nearby_base(k);
  return skill.name;
}

}  // namespace

// ---------------------------------------------------------------------------
// goal navigation

std::pair<PolicyTable, TrainingCurve> train_goal_nav(const WorldFactory& worlds,
                                                     const LearnerConfig& cfg) {
  PolicyTable pol;
  pol.kind = PolicyKind::GoalNav;
  pol.n_actions = 8;
  pol.epsilon = cfg.epsilon_end;
  TrainingCurve curve;
  std::mt19937_64 rng(cfg.seed ^ 0x6e61765f676f616cULL);

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    World world = worlds.make(cfg.seed + ep);
    WorldState& st = world.state();
    // goal at one of the configured compass directions
    int dir = (int)(rng() % std::max(1, cfg.goal_directions)) *
              (8 / std::max(1, cfg.goal_directions));
    int gx = clampi(st.x + kDirX[dir] * cfg.goal_distance, 0, st.size - 1);
    int gz = clampi(st.z + kDirZ[dir] * cfg.goal_distance, 0, st.size - 1);

    double eps = epsilon_at(cfg, ep);
    double ret = 0;
    bool reached = false;
    int t = 0;
    for (; t < cfg.step_cap; ++t) {
      int dx = gx - st.x, dz = gz - st.z;
      if (dx == 0 && dz == 0) {
        reached = true;
        break;
      }
      long long s = nav_state(dx, dz, st.heading);
      int a = pick_action(pol, s, eps, rng);
      double prev_dist = chebyshev(dx, dz);
      world.step(Action::move(a));
      int ndx = gx - st.x, ndz = gz - st.z;
      PoseSample ps;
      ps.distance_to_goal = chebyshev(ndx, ndz);
      ps.heading_alignment = heading_alignment(a, dx, dz);
      double r = goal_nav_reward(ps, prev_dist);
      ret += r;
      long long s2 = nav_state(ndx, ndz, st.heading);
      auto& q = pol.row(s);
      double target =
          (ndx == 0 && ndz == 0)
              ? r
              : r + cfg.discount *
                        *std::max_element(pol.row(s2).begin(), pol.row(s2).end());
      q[a] += cfg.learning_rate * (target - q[a]);
    }
    curve.episodes.push_back({ret, reached, t});
  }
  return {pol, curve};
}

// ---------------------------------------------------------------------------
// exploration

std::pair<PolicyTable, TrainingCurve> train_explorer(const WorldFactory& worlds,
                                                     const PolicyTable& low_level,
                                                     const LearnerConfig& cfg) {
  if (low_level.kind != PolicyKind::GoalNav)
    throw ConfigError("explorer training needs a goal_nav low level");
  PolicyTable pol;
  pol.kind = PolicyKind::ExplorerHigh;
  pol.n_actions = 8;
  pol.epsilon = cfg.epsilon_end;
  TrainingCurve curve;
  std::mt19937_64 rng(cfg.seed ^ 0x6578706c6f726572ULL);

  auto nav_action = [&](const Observation& obs, int gx, int gz) {
    long long s = nav_state(gx - obs.x, gz - obs.z, obs.heading);
    if (low_level.has(s)) return Action::move(low_level.greedy(s));
    return Action::move((int)(rng() % 8));
  };

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    World world = worlds.make(cfg.seed + ep);
    WorldState& st = world.state();
    VisitGrid grid(st.x, st.z, cfg.visit_cell_size, cfg.visit_side);
    grid.visit(st.x, st.z);
    double eps = epsilon_at(cfg, ep);

    double total = 0;
    int steps = 0;
    while (steps < cfg.step_cap) {
      long long s = explorer_state(grid, cfg.visit_cell_size, st.x, st.z, st.size);
      int a = pick_action(pol, s, eps, rng);
      int gx = clampi(st.x + kDirX[a] * cfg.goal_distance, 0, st.size - 1);
      int gz = clampi(st.z + kDirZ[a] * cfg.goal_distance, 0, st.size - 1);
      double r = 0;
      if (gx == st.x && gz == st.z) {
        // subgoal clamped onto the agent (world edge): burn one step so the
        // episode always advances
        world.step(Action::move(a));
        ++steps;
        r += state_count_reward(grid, st.x, st.z);
      } else {
        for (int i = 0; i < cfg.goal_distance && steps < cfg.step_cap; ++i) {
          Observation obs = world.observe();
          if (obs.x == gx && obs.z == gz) break;
          world.step(nav_action(obs, gx, gz));
          ++steps;
          r += state_count_reward(grid, st.x, st.z);
        }
      }
      // myopic update: the segment reward already says everything about the
      // chosen direction (novel squares pay, seen squares do not), and a
      // bootstrapped continuation value only buries that signal in noise
      auto& q = pol.row(s);
      q[a] += cfg.learning_rate * (r - q[a]);
      total += r;
    }
    curve.episodes.push_back({total, false, steps});
  }
  return {pol, curve};
}

// ---------------------------------------------------------------------------
// manipulation

std::pair<PolicyTable, TrainingCurve> train_manipulation(
    const WorldFactory& worlds, const SkillDefinition& skill, TrainMode mode,
    const std::optional<std::pair<PolicyTable, PolicyTable>>& finding,
    const LearnerConfig& cfg) {
  if (mode == TrainMode::GoExplore && !finding)
    throw ConfigError("go-explore training needs the finding policies");
  std::string target = manipulation_target(skill);
  if (mode == TrainMode::GoExplore) {
    bool exists = worlds.config.resource_densities.count(target) ||
                  worlds.config.underground_densities.count(target) ||
                  worlds.config.mob_counts.count(target);
    if (!exists)
      throw NoTargetInWorld("no '" + target + "' entities in the world config");
  }
  bool mob_target = worlds.config.is_mob(target);

  PolicyTable pol;
  pol.kind = PolicyKind::Manipulation;
  pol.n_actions = 9;  // 8 moves + interact
  pol.epsilon = cfg.epsilon_end;
  TrainingCurve curve;
  PolicyTable best = pol;
  double best_trailing = -1;
  std::mt19937_64 rng(cfg.seed ^ 0x6d616e6970ULL);

  const std::string& obtained =
      skill.obtain.begin()->first;  // maps are sorted; fine for one-entry skills
  int want = skill.obtain.count(skill.name) ? skill.obtain.at(skill.name) : 1;

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    World world =
        mode == TrainMode::SpawnNearby
            ? worlds.make_near(cfg.seed + ep, target, cfg.spawn_radius)
            : worlds.make(cfg.seed + ep);
    if (mode == TrainMode::GoExplore) {
      SkillDefinition find_def;
      find_def.name = target + "_nearby";
      find_def.kind = SkillKind::Finding;
      find_def.obtain[find_def.name] = 1;
      SkillPolicies fp = policies_from(&finding->first, &finding->second,
                                       nullptr, cfg, cfg.seed + ep);
      world.execute_skill(find_def, fp, cfg.step_cap);
    }
    WorldState& st = world.state();
    // training assumes the skill's prerequisites are met: grant required
    // tools and non-nearby ingredients so only the behaviour is learned
    for (const auto& [item, n] : skill.require)
      if (!is_nearby(item) && (int)st.inventory[item] < n)
        st.inventory[item] = n;
    for (const auto& [item, n] : skill.consume)
      if (!is_nearby(item) && (int)st.inventory[item] < n)
        st.inventory[item] = n;
    int have0 = st.inventory.count(obtained) ? st.inventory.at(obtained) : 0;
    double eps = epsilon_at(cfg, ep);
    double ret = 0;
    bool success = false;
    double prev_min = 1e18;
    int t = 0;
    for (; t < cfg.step_cap; ++t) {
      Observation obs = world.observe();
      int have = obs.inventory.count(obtained) ? obs.inventory.at(obtained) : 0;
      if (have >= have0 + want) {
        success = true;
        break;
      }
      long long s = manip_state(obs, target);
      int a = pick_action(pol, s, eps, rng);
      auto before_hit = obs.nearest(target);
      Observation next = world.step(a < 8 ? Action::move(a) : Action::interact());
      auto after_hit = next.nearest(target);

      double intrinsic = 0;
      if (mob_target) {
        if (after_hit) {
          PoseSample ps;
          ps.distance_to_goal = after_hit->distance;
          ps.prev_min_distance = std::min(prev_min, 1e6);
          if (prev_min < 1e17) intrinsic += combat_distance_reward(ps);
          prev_min = std::min(prev_min, (double)after_hit->distance);
        }
        bool attacked = a == 8 && before_hit && before_hit->distance <= 2;
        intrinsic += attack_reward(attacked, attacked && before_hit->distance <= 1);
      } else {
        MaybeDistance dp = before_hit
                               ? MaybeDistance((double)before_hit->distance)
                               : std::nullopt;
        MaybeDistance dn =
            after_hit ? MaybeDistance((double)after_hit->distance) : std::nullopt;
        // The on-top bonus is paid once, on arrival; repeating it every step
        // would make hovering outscore actually harvesting.
        if (!(dp && *dp < 1.5 && dn && *dn < 1.5))
          intrinsic += mining_distance_reward(dp, dn);
        // landed hits on an in-reach target earn the flat attack payment,
        // otherwise nothing ever favors the interact action before the first
        // lucky harvest
        bool attacked = a == 8 && before_hit && before_hit->distance <= 3;
        intrinsic += attack_reward(attacked, false);
      }
      int got = next.inventory.count(obtained) ? next.inventory.at(obtained) : 0;
      int succ_now = got >= have0 + want ? 1 : 0;
      double r = combined_reward(intrinsic, succ_now, cfg.w_intrinsic,
                                 cfg.w_extrinsic);
      ret += r;
      long long s2 = manip_state(next, target);
      auto& q = pol.row(s);
      double tgt = succ_now
                       ? r
                       : r + cfg.discount * *std::max_element(
                                                pol.row(s2).begin(),
                                                pol.row(s2).end());
      q[a] += cfg.learning_rate * (tgt - q[a]);
    }
    curve.episodes.push_back({ret, success, t});

    // periodically score the greedy policy on held-out spawns and keep the
    // best checkpoint: late low-epsilon updates can carve loops into an
    // already-good greedy policy
    int stride = std::max(1, cfg.smoothing_window / 2);
    if ((ep + 1) % stride == 0 || ep + 1 == cfg.episodes) {
      int wins = 0;
      const int probes = 20;
      for (int i = 0; i < probes; ++i) {
        World probe_world =
            mode == TrainMode::SpawnNearby
                ? worlds.make_near(cfg.seed + 900001 + i, target,
                                   cfg.spawn_radius)
                : worlds.make(cfg.seed + 900001 + i);
        if (mode == TrainMode::GoExplore) {
          SkillDefinition find_def;
          find_def.name = target + "_nearby";
          find_def.kind = SkillKind::Finding;
          find_def.obtain[find_def.name] = 1;
          SkillPolicies fp = policies_from(&finding->first, &finding->second,
                                           nullptr, cfg, cfg.seed + i);
          probe_world.execute_skill(find_def, fp, cfg.step_cap);
        }
        WorldState& pst = probe_world.state();
        for (const auto& [item, n] : skill.require)
          if (!is_nearby(item) && (int)pst.inventory[item] < n)
            pst.inventory[item] = n;
        for (const auto& [item, n] : skill.consume)
          if (!is_nearby(item) && (int)pst.inventory[item] < n)
            pst.inventory[item] = n;
        int h0 = pst.inventory.count(obtained) ? pst.inventory.at(obtained) : 0;
        for (int t2 = 0; t2 < cfg.step_cap; ++t2) {
          Observation obs = probe_world.observe();
          int have = obs.inventory.count(obtained) ? obs.inventory.at(obtained)
                                                   : 0;
          if (have >= h0 + want) {
            ++wins;
            break;
          }
          long long s = manip_state(obs, target);
          int a = pol.has(s) ? pol.greedy(s) : (int)(probe_world.state().rng() % 9);
          probe_world.step(a < 8 ? Action::move(a) : Action::interact());
        }
      }
      double score = (double)wins / probes;
      if (score >= best_trailing) {
        best_trailing = score;
        best = pol;
      }
    }
  }
  return {best, curve};
}

// ---------------------------------------------------------------------------

PolicyTable select_model(const TrainingCurve& curve,
                         const std::vector<PolicyTable>& checkpoints,
                         int window) {
  if (curve.episodes.empty() || checkpoints.empty())
    throw ConfigError("cannot select a model from an empty curve");
  if (checkpoints.size() != curve.episodes.size())
    throw ConfigError("checkpoints must align with the curve");
  auto smoothed = curve.smoothed_success(window);
  size_t best = 0;
  for (size_t i = 1; i < smoothed.size(); ++i)
    if (smoothed[i] > smoothed[best]) best = i;
  return checkpoints[best];
}

SkillPolicies policies_from(const PolicyTable* nav, const PolicyTable* explorer,
                            const PolicyTable* manipulation,
                            const LearnerConfig& cfg, std::uint64_t seed) {
  SkillPolicies scripted = scripted_policies(seed);
  SkillPolicies p = scripted;
  p.low_level_horizon = cfg.goal_distance;
  auto rng = std::make_shared<std::mt19937_64>(seed ^ 0x706f6cULL);

  if (nav) {
    PolicyTable low = *nav;
    p.navigate = [low, scripted](const Observation& obs, int gx, int gz) {
      long long s = nav_state(gx - obs.x, gz - obs.z, obs.heading);
      if (low.has(s)) return Action::move(low.greedy(s));
      return scripted.navigate(obs, gx, gz);
    };
  }
  if (explorer) {
    PolicyTable high = *explorer;
    auto grid = std::make_shared<std::optional<VisitGrid>>();
    int cell = cfg.visit_cell_size, side = cfg.visit_side;
    int dist = cfg.goal_distance;
    auto last_step = std::make_shared<long>(-1);
    p.propose_goal = [high, grid, cell, side, dist, rng,
                      last_step](const Observation& obs) {
      // a step counter that went backwards means a fresh episode: start a
      // new visit sheet instead of reusing the previous world's coverage
      if (obs.elapsed_steps < *last_step) grid->reset();
      *last_step = obs.elapsed_steps;
      if (!*grid) grid->emplace(obs.x, obs.z, cell, side);
      (*grid)->visit(obs.x, obs.z);
      long long s = explorer_state(**grid, cell, obs.x, obs.z, obs.world_size);
      // no novel neighbour leaves the table without a preference; dither
      // instead of committing to an arbitrary greedy direction
      int a = (s != 0 && high.has(s)) ? high.greedy(s) : (int)((*rng)() % 8);
      int gx = clampi(obs.x + kDirX[a] * dist, 0, obs.world_size - 1);
      int gz = clampi(obs.z + kDirZ[a] * dist, 0, obs.world_size - 1);
      return std::make_pair(gx, gz);
    };
  }
  if (manipulation) {
    PolicyTable m = *manipulation;
    SkillPolicies fallback = scripted;
    p.manipulate = [m, fallback](const Observation& obs,
                                 const std::string& target) {
      long long s = manip_state(obs, target);
      if (!m.has(s)) return fallback.manipulate(obs, target);
      int a = m.greedy(s);
      return a < 8 ? Action::move(a) : Action::interact();
    };
  }
  return p;
}

// ---------------------------------------------------------------------------
// exploration metrics

int run_exploration(World& world, const SkillPolicies& policies, int steps,
                    int cell_size, int side) {
  WorldState& st = world.state();
  VisitGrid grid(st.x, st.z, cell_size, side);
  grid.visit(st.x, st.z);
  int t = 0;
  while (t < steps) {
    Observation obs = world.observe();
    auto [gx, gz] = policies.propose_goal(obs);
    if (gx == obs.x && gz == obs.z) {
      // degenerate proposal (e.g. clamped into the agent's own cell): burn a
      // step so the loop always advances
      world.step(Action::move((int)(st.rng() % 8)));
      ++t;
      grid.visit(st.x, st.z);
      continue;
    }
    for (int i = 0; i < policies.low_level_horizon && t < steps; ++i) {
      obs = world.observe();
      if (obs.x == gx && obs.z == gz) break;
      world.step(policies.navigate(obs, gx, gz));
      ++t;
      grid.visit(st.x, st.z);
    }
  }
  return grid.visited_count();
}

int run_exploration_flat(World& world,
                         const std::function<Action(const Observation&)>& act,
                         int steps, int cell_size, int side) {
  WorldState& st = world.state();
  VisitGrid grid(st.x, st.z, cell_size, side);
  grid.visit(st.x, st.z);
  for (int t = 0; t < steps; ++t) {
    world.step(act(world.observe()));
    grid.visit(st.x, st.z);
  }
  return grid.visited_count();
}

std::function<Action(const Observation&)> random_walker(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const Observation&) { return Action::move((int)((*rng)() % 8)); };
}

std::function<Action(const Observation&)> handcoded_walker(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  auto dir = std::make_shared<int>((int)((*rng)() % 8));
  return [rng, dir](const Observation& obs) {
    std::uniform_real_distribution<double> u(0, 1);
    // turn occasionally, or when stuck on the world edge
    int nx = obs.x + kDirX[*dir], nz = obs.z + kDirZ[*dir];
    bool blocked = nx < 0 || nz < 0 || nx >= obs.world_size || nz >= obs.world_size;
    if (blocked || u(*rng) < 0.05) *dir = (int)((*rng)() % 8);
    return Action::move(*dir);
  };
}

}  // namespace skillforge
