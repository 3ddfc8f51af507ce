// skillforge: plan, validate, train, evaluate, and generate skill sets.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "skillforge/errors.hpp"
#include "skillforge/harness.hpp"
#include "skillforge/learner.hpp"
#include "skillforge/llmgen.hpp"
#include "skillforge/planner.hpp"
#include "skillforge/world.hpp"

namespace sf = skillforge;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

sf::ItemCount parse_inventory(const std::string& spec) {
  sf::ItemCount out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    size_t eq = tok.find('=');
    if (eq == std::string::npos)
      throw sf::ConfigError("bad inventory entry: " + tok);
    out[tok.substr(0, eq)] = std::stoi(tok.substr(eq + 1));
  }
  return out;
}

std::set<sf::ItemId> parse_names(const std::string& spec) {
  std::set<sf::ItemId> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) if (!tok.empty()) out.insert(tok);
  return out;
}

std::map<sf::ItemId, int> load_step_table(const std::string& path) {
  std::map<sf::ItemId, int> out;
  std::ifstream in(path);
  if (!in) throw sf::ConfigError("cannot open step table: " + path);
  std::string line;
  while (std::getline(in, line)) {
    size_t h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    std::istringstream ls(line);
    std::string key, eq;
    int v;
    if (ls >> key >> eq >> v && eq == "=") out[key] = v;
  }
  return out;
}

int cmd_plan(const std::string& skills_path, const std::string& goal,
             const std::string& inventory, const std::string& primitives,
             bool strict_gt, bool emit_trace) {
  auto defs = sf::load_skill_file(skills_path);
  auto graph = sf::SkillGraph::build(defs, parse_names(primitives));
  sf::Task task{goal, sf::Condition::from(parse_inventory(inventory))};
  sf::PlannerOptions opts;
  opts.strict_gt = strict_gt;
  sf::Plan plan = sf::search_plan(graph, task, opts);
  for (const auto& s : plan.steps) std::cout << s << "\n";

  if (emit_trace) {
    auto trace = sf::symbolic_execute(graph, plan, task.initial);
    json arr = json::array();
    for (const auto& rec : trace.records) {
      json j;
      j["skill"] = rec.skill;
      j["inventory"] = rec.after.inventory();
      j["nearby"] = rec.after.nearby();
      arr.push_back(j);
    }
    std::cout << arr.dump(1) << "\n";
  }
  std::cerr << plan.steps.size() << " steps, " << plan.distinct_count()
            << " distinct skills\n";
  return 0;
}

int cmd_validate(const std::string& skills_path, const std::string& against,
                 bool lenient, bool dot, const std::string& primitives) {
  auto defs = sf::load_skill_file(
      skills_path, lenient ? sf::ParseMode::Lenient : sf::ParseMode::Strict);
  if (!against.empty()) {
    auto ref = sf::load_skill_file(against);
    auto diffs = sf::validate_against_db(defs, ref);
    for (const auto& d : diffs) std::cout << d.describe() << "\n";
    std::cerr << diffs.size() << " discrepancies\n";
    return diffs.empty() ? 0 : 1;
  }
  auto graph = sf::SkillGraph::build(defs, parse_names(primitives));
  if (dot) std::cout << graph.to_dot();
  std::cerr << defs.size() << " skills, " << graph.edge_count() << " edges\n";
  return 0;
}

int cmd_train(const std::string& skill, const std::string& mode,
              const std::string& config_path, const std::string& world_path,
              const std::string& skills_path, const std::string& out_dir) {
  auto defs = sf::load_skill_file(skills_path);
  auto graph = sf::SkillGraph::build(defs);
  sf::LearnerConfig cfg = config_path.empty() ? sf::LearnerConfig{}
                                              : sf::load_learner_config(config_path);
  sf::WorldFactory worlds{sf::load_world_config(world_path), &graph};
  fs::create_directories(out_dir);

  if (skill == "find") {
    auto [nav, nav_curve] = sf::train_goal_nav(worlds, cfg);
    auto [high, high_curve] = sf::train_explorer(worlds, nav, cfg);
    sf::save_policy(nav, (fs::path(out_dir) / "goal_nav.json").string());
    sf::save_policy(high, (fs::path(out_dir) / "explorer.json").string());
    std::cerr << "trained goal_nav (" << nav.table.size() << " states) and "
              << "explorer (" << high.table.size() << " states)\n";
    return 0;
  }

  sf::TrainMode tm = mode == "goexplore" ? sf::TrainMode::GoExplore
                                         : sf::TrainMode::SpawnNearby;
  std::optional<std::pair<sf::PolicyTable, sf::PolicyTable>> finding;
  if (tm == sf::TrainMode::GoExplore) {
    auto [nav, c1] = sf::train_goal_nav(worlds, cfg);
    auto [high, c2] = sf::train_explorer(worlds, nav, cfg);
    finding = {nav, high};
  }
  auto [pol, curve] = sf::train_manipulation(worlds, graph.at(skill), tm,
                                             finding, cfg);
  sf::save_policy(pol, (fs::path(out_dir) / (skill + ".json")).string());
  auto smoothed = curve.smoothed_success(cfg.smoothing_window);
  std::cerr << "trained " << skill << ": final smoothed success "
            << (smoothed.empty() ? 0.0 : smoothed.back()) << "\n";
  return 0;
}

int cmd_eval(const std::string& suite_path, const std::string& skills_path,
             const std::string& world_path, const std::string& methods_csv,
             int episodes, std::uint64_t seed, const std::string& out_dir,
             const std::string& steps_path) {
  auto defs = sf::load_skill_file(skills_path);
  auto graph = sf::SkillGraph::build(defs);
  auto suite = sf::load_task_suite(suite_path);
  sf::WorldConfig world = sf::load_world_config(world_path);

  std::vector<sf::Method> methods;
  std::stringstream ss(methods_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) methods.push_back(sf::method_from_string(tok));

  sf::RunOptions opts;
  if (!steps_path.empty()) opts.per_skill_steps = load_step_table(steps_path);

  auto policies = std::make_shared<std::map<sf::ItemId, sf::SkillPolicies>>();
  std::map<sf::ItemId, int> caps = opts.per_skill_steps;
  auto factory = sf::gridworld_executors(graph, world, policies, caps,
                                         opts.default_skill_steps);
  auto reports = sf::run_suite(graph, suite, factory, methods, episodes, seed, opts);
  sf::write_reports(reports, out_dir);
  std::cout << sf::reports_to_csv(reports);
  return 0;
}

int cmd_skillgen(const std::string& family, const std::string& skills_csv,
                 const std::string& offline, const std::string& against,
                 const std::string& cache_dir) {
  sf::ChatEndpointConfig endpoint = sf::ChatEndpointConfig::from_env();
  if (!offline.empty()) endpoint.offline_fixture = offline;
  if (!cache_dir.empty()) endpoint.cache_dir = cache_dir;
  sf::PromptTemplate tmpl = family == "manipulation" ? sf::manipulation_prompt()
                                                     : sf::crafting_prompt();
  std::vector<sf::ItemId> names;
  std::stringstream ss(skills_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) if (!tok.empty()) names.push_back(tok);

  auto result = sf::generate_skills(endpoint, tmpl, names);
  std::cout << sf::serialize_skills(result.skills);
  for (const auto& f : result.failures)
    std::cerr << "parse failure: " << f.skill << ": " << f.reason << "\n";
  for (const auto& m : result.missing) std::cerr << "missing: " << m << "\n";

  if (!against.empty()) {
    auto ref = sf::load_skill_file(against);
    // compare only the skills that were asked for
    std::vector<sf::SkillDefinition> subset;
    for (const auto& d : ref)
      if (std::find(names.begin(), names.end(), d.name) != names.end())
        subset.push_back(d);
    auto diffs = sf::validate_against_db(result.skills, subset);
    for (const auto& d : diffs) std::cerr << d.describe() << "\n";
    std::cerr << diffs.size() << " discrepancies\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skill planning and tabular RL for a crafting gridworld"};
  app.require_subcommand(1);

  // plan
  std::string skills_path, goal, inventory, primitives, against, out_dir;
  bool strict_gt = false, emit_trace = false, lenient = false, dot = false;
  auto* plan = app.add_subcommand("plan", "plan a skill sequence for a goal");
  plan->add_option("--skills", skills_path, "skill definition file")->required();
  plan->add_option("--goal", goal, "target item")->required();
  plan->add_option("--inventory", inventory, "initial items k=v,...");
  plan->add_option("--primitives", primitives, "declared primitive items a,b,...");
  plan->add_flag("--strict-gt", strict_gt, "literal strict possession test");
  plan->add_flag("--trace", emit_trace, "print JSON condition trace");

  // validate
  auto* validate = app.add_subcommand("validate", "check a skill file / diff against a reference");
  std::string v_skills, v_against, v_primitives;
  validate->add_option("--skills", v_skills, "skill definition file")->required();
  validate->add_option("--against", v_against, "reference skill file to diff");
  validate->add_option("--primitives", v_primitives, "declared primitives a,b,...");
  validate->add_flag("--lenient", lenient, "parse with generated-text leniency");
  validate->add_flag("--dot", dot, "dump the dependency graph as DOT");

  // train
  auto* train = app.add_subcommand("train", "train a tabular skill policy");
  std::string t_skill, t_mode = "spawn", t_config, t_world, t_skills, t_out = "out";
  train->add_option("--skill", t_skill, "skill name, or 'find' for the explorer pair")->required();
  train->add_option("--mode", t_mode, "spawn|goexplore")
      ->check(CLI::IsMember({"spawn", "goexplore"}));
  train->add_option("--config", t_config, "learner config file");
  train->add_option("--world", t_world, "world config file")->required();
  train->add_option("--skills", t_skills, "skill definition file")->required();
  train->add_option("--out", t_out, "output directory");

  // eval
  auto* eval = app.add_subcommand("eval", "run a task suite");
  std::string e_suite, e_skills, e_world, e_methods = "plan4mc", e_out = "out", e_steps;
  int e_episodes = 30;
  std::uint64_t e_seed = 0;
  eval->add_option("--suite", e_suite, "task suite file")->required();
  eval->add_option("--skills", e_skills, "skill definition file")->required();
  eval->add_option("--world", e_world, "world config file")->required();
  eval->add_option("--methods", e_methods, "comma list: plan4mc,zero_shot,half_steps,no_find");
  eval->add_option("--episodes", e_episodes, "episodes per task");
  eval->add_option("--seed", e_seed, "base seed");
  eval->add_option("--out", e_out, "report directory");
  eval->add_option("--steps", e_steps, "per-skill step table");

  // skillgen
  auto* gen = app.add_subcommand("skillgen", "generate skills via a chat model");
  std::string g_family = "crafting", g_skills, g_offline, g_against, g_cache;
  gen->add_option("--family", g_family, "manipulation|crafting")
      ->check(CLI::IsMember({"manipulation", "crafting"}));
  gen->add_option("--skills", g_skills, "comma list of skill names")->required();
  gen->add_option("--offline", g_offline, "canned response file (no network)");
  gen->add_option("--against", g_against, "reference skill file to diff");
  gen->add_option("--cache", g_cache, "response cache directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (plan->parsed())
      return cmd_plan(skills_path, goal, inventory, primitives, strict_gt, emit_trace);
    if (validate->parsed())
      return cmd_validate(v_skills, v_against, lenient, dot, v_primitives);
    if (train->parsed())
      return cmd_train(t_skill, t_mode, t_config, t_world, t_skills, t_out);
    if (eval->parsed())
      return cmd_eval(e_suite, e_skills, e_world, e_methods, e_episodes, e_seed,
                      e_out, e_steps);
    if (gen->parsed())
      return cmd_skillgen(g_family, g_skills, g_offline, g_against, g_cache);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
