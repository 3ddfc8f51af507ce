#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "skillforge/errors.hpp"
#include "skillforge/harness.hpp"

using namespace skillforge;

namespace {

std::string data_path(const std::string& name) {
  return std::string(SKILLFORGE_DATA_DIR) + "/" + name;
}

const SkillGraph& big_graph() {
  static SkillGraph g =
      SkillGraph::build(load_skill_file(data_path("minecraft55.skills")), {});
  return g;
}

// every skill succeeds with probability p, bookkeeping included
ExecutorFactory bernoulli_executors(const SkillGraph& graph, double p) {
  return [&graph, p](const Task& task, std::uint64_t seed) {
    return std::make_unique<BernoulliExecutor>(graph, task.initial, p, seed);
  };
}

SuiteTask make_task(const std::string& goal, ItemCount initial = {},
                    int max_steps = 0) {
  SuiteTask t;
  t.task.goal = goal;
  t.task.display_name = goal;
  t.task.initial = Condition::from(initial);
  t.task.max_env_steps = max_steps;
  t.expected_planning_steps = 1;
  t.set_name = "test";
  return t;
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (Method m : {Method::Plan4MC, Method::ZeroShot, Method::HalfSteps,
                   Method::NoFind, Method::InteractiveLlm})
    CHECK(method_from_string(to_string(m)) == m);
  CHECK(to_string(Method::Plan4MC) == "plan4mc");
  CHECK_THROWS_AS(method_from_string("alphago"), ConfigError);
}

TEST_CASE("suite rows parse into tasks") {
  TaskSuite suite = parse_task_suite(
      "# comment line\n"
      "\n"
      "stick | - | default | 350 | 4 | cut_trees\n"
      "stone | wooden_pickaxe=1,planks=2 | caves | 0 | 2 | mine_stones\n");
  REQUIRE(suite.tasks.size() == 2);
  CHECK(suite.tasks[0].task.goal == "stick");
  CHECK(suite.tasks[0].task.initial.all().empty());
  CHECK(suite.tasks[0].task.max_env_steps == 350);
  CHECK(suite.tasks[0].expected_planning_steps == 4);
  CHECK(suite.tasks[0].set_name == "cut_trees");
  CHECK(suite.tasks[1].task.initial.count("wooden_pickaxe") == 1);
  CHECK(suite.tasks[1].task.initial.count("planks") == 2);
  CHECK(suite.tasks[1].task.world_preset == "caves");
  CHECK(suite.tasks[1].task.max_env_steps == 0);

  CHECK_THROWS_AS(parse_task_suite("stick | - | default | 350\n"), ConfigError);
  CHECK_THROWS_AS(parse_task_suite("stick | - | d | 350 | 0 | s\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_task_suite("stick | planks | d | 350 | 4 | s\n"),
                  ConfigError);
  CHECK_THROWS_AS(load_task_suite("/nonexistent.suite"), ConfigError);

  TaskSuite bundled = load_task_suite(data_path("gridworld.suite"));
  CHECK(bundled.tasks.size() == 8);
}

TEST_CASE("dedup_plan keeps first occurrences in order") {
  Plan plan;
  plan.steps = {"log", "planks", "log", "planks", "stick", "log"};
  auto dedup = dedup_plan(plan);
  CHECK(dedup == std::vector<ItemId>{"log", "planks", "stick"});
}

TEST_CASE("step curves count per-skill episode successes") {
  auto ep = [](std::vector<std::pair<ItemId, bool>> hits) {
    EpisodeResult r;
    for (auto& [skill, ok] : hits) {
      SkillOutcome o;
      o.skill = skill;
      o.success = ok;
      r.outcomes.push_back(o);
    }
    return r;
  };
  std::vector<EpisodeResult> logs = {
      ep({{"log", true}, {"planks", true}}),
      ep({{"log", false}, {"log", true}}),  // retry counts once
      ep({{"log", false}}),
      ep({}),
  };
  auto curve = step_success_curve(logs, {"log", "planks"});
  REQUIRE(curve.size() == 3);
  CHECK(curve[0] == 1.0);          // task start
  CHECK(curve[1] == doctest::Approx(0.5));   // log succeeded in 2/4 episodes
  CHECK(curve[2] == doctest::Approx(0.25));  // planks in 1/4

  CHECK(step_success_curve({}, {"log"}) == std::vector<double>{1.0});
}

TEST_CASE("bernoulli executor applies symbolic bookkeeping on success") {
  const SkillGraph& g = big_graph();
  Condition start;
  start.set("log", 1);
  start.set("log_nearby", 1);

  BernoulliExecutor always(g, start, 1.0, 7);
  auto out = always.execute_skill("planks", 1.0);
  CHECK(out.success);
  CHECK(out.env_steps == 1);
  CHECK(out.obtained.at("planks") == 4);
  Condition c = always.read_condition();
  CHECK(c.count("log") == 0);          // consumed
  CHECK(c.count("planks") == 4);
  CHECK(c.count("log_nearby") == 1);   // crafting keeps nearby items

  // a manipulation skill clears nearby state on success
  BernoulliExecutor manip(g, start, 1.0, 7);
  auto got = manip.execute_skill("log", 1.0);
  CHECK(got.success);
  CHECK(manip.read_condition().count("log_nearby") == 0);

  // an unsatisfied precondition fails the attempt even when the coin says yes
  BernoulliExecutor blocked(g, Condition{}, 1.0, 7);
  CHECK_FALSE(blocked.execute_skill("planks", 1.0).success);
  CHECK(blocked.read_condition().all().empty());

  // probability zero never succeeds, but still costs a step
  BernoulliExecutor never(g, start, 0.0, 7);
  for (int i = 0; i < 20; ++i) {
    auto o = never.execute_skill("planks", 1.0);
    CHECK_FALSE(o.success);
    CHECK(o.env_steps == 1);
  }

  // per-skill overrides beat the default probability
  BernoulliExecutor mixed(g, start, 0.0, 7);
  mixed.set_skill_prob("planks", 1.0);
  CHECK(mixed.execute_skill("planks", 1.0).success);
}

TEST_CASE("run_task with a perfect executor solves every episode") {
  const SkillGraph& g = big_graph();
  SuiteTask t = make_task("stick");
  auto report = run_task(g, t, bernoulli_executors(g, 1.0), Method::Plan4MC,
                         10, 42);
  CHECK(report.task_name == "stick");
  CHECK(report.set_name == "test");
  CHECK(report.episodes == 10);
  CHECK(report.success_rate == 1.0);
  // the bare-hands stick plan takes 4 skills, one env step each
  CHECK(report.mean_env_steps == doctest::Approx(4.0));
  CHECK(report.curve_skills.size() == 4);
  REQUIRE(report.curve.size() == 5);
  for (double v : report.curve) CHECK(v == 1.0);

  auto zero = run_task(g, t, bernoulli_executors(g, 1.0), Method::ZeroShot,
                       10, 42);
  CHECK(zero.success_rate == 1.0);
}

TEST_CASE("half_steps halves the explicit budget") {
  const SkillGraph& g = big_graph();
  // 4 planning steps with a budget of exactly 5 attempts: plan4mc fits,
  // half_steps (2 attempts) cannot
  SuiteTask t = make_task("stick", {}, 5);
  auto full = run_task(g, t, bernoulli_executors(g, 1.0), Method::Plan4MC,
                       5, 42);
  auto half = run_task(g, t, bernoulli_executors(g, 1.0), Method::HalfSteps,
                       5, 42);
  CHECK(full.success_rate == 1.0);
  CHECK(half.success_rate == 0.0);
  CHECK(half.mean_env_steps <= 2.0);
}

TEST_CASE("no_find drops finding skills from plans and curves") {
  const SkillGraph& g = big_graph();
  SuiteTask t = make_task("log");
  // the log plan is log_nearby -> log; without the finding step and with no
  // nearby log provided, the task cannot be completed
  auto with = run_task(g, t, bernoulli_executors(g, 1.0), Method::Plan4MC,
                       5, 42);
  auto without = run_task(g, t, bernoulli_executors(g, 1.0), Method::NoFind,
                          5, 42);
  CHECK(with.success_rate == 1.0);
  CHECK(without.success_rate == 0.0);
  for (const auto& s : without.curve_skills)
    CHECK(g.at(s).kind != SkillKind::Finding);
  CHECK(without.curve_skills.size() < with.curve_skills.size());

  // when the world already has the target nearby, skipping finding is fine
  SuiteTask ready = make_task("log", {{"log_nearby", 1}});
  auto ok = run_task(g, ready, bernoulli_executors(g, 1.0), Method::NoFind,
                     5, 42);
  CHECK(ok.success_rate == 1.0);
}

TEST_CASE("interactive_llm is not runnable through the offline harness") {
  const SkillGraph& g = big_graph();
  SuiteTask t = make_task("stick");
  CHECK_THROWS_AS(run_task(g, t, bernoulli_executors(g, 1.0),
                           Method::InteractiveLlm, 1, 1),
                  ConfigError);
}

TEST_CASE("run_suite pairs every task with every method") {
  const SkillGraph& g = big_graph();
  TaskSuite suite;
  suite.tasks = {make_task("stick"), make_task("planks")};
  auto reports = run_suite(g, suite, bernoulli_executors(g, 0.9),
                           {Method::Plan4MC, Method::ZeroShot}, 20, 7);
  REQUIRE(reports.size() == 4);
  CHECK(reports[0].task_name == "stick");
  CHECK(reports[0].method == Method::Plan4MC);
  CHECK(reports[1].task_name == "stick");
  CHECK(reports[1].method == Method::ZeroShot);
  CHECK(reports[2].task_name == "planks");

  // identical settings reproduce identical numbers (seeded executors)
  auto again = run_suite(g, suite, bernoulli_executors(g, 0.9),
                         {Method::Plan4MC, Method::ZeroShot}, 20, 7);
  for (size_t i = 0; i < reports.size(); ++i) {
    CHECK(reports[i].success_rate == again[i].success_rate);
    CHECK(reports[i].mean_env_steps == again[i].mean_env_steps);
  }
}

TEST_CASE("reports render to csv and json deterministically") {
  const SkillGraph& g = big_graph();
  TaskSuite suite;
  suite.tasks = {make_task("stick")};
  auto reports = run_suite(g, suite, bernoulli_executors(g, 1.0),
                           {Method::Plan4MC}, 2, 7);

  std::string csv = reports_to_csv(reports);
  CHECK(csv.find("set,task,method,episodes,success_rate,mean_env_steps\n") ==
        0);
  CHECK(csv.find("test,stick,plan4mc,2,1.000000,4.000000") !=
        std::string::npos);
  CHECK(csv == reports_to_csv(reports));

  std::string json_text = reports_to_json(reports);
  CHECK(json_text.find("\"task\": \"stick\"") != std::string::npos);
  CHECK(json_text.find("\"curve_skills\"") != std::string::npos);

  namespace fs = std::filesystem;
  fs::path dir = fs::path("/tmp") /
                 ("skillforge_reports_" + std::to_string(::getpid()));
  write_reports(reports, dir.string());
  CHECK(fs::exists(dir / "report.csv"));
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "curves" / "stick_plan4mc.csv"));
  std::ifstream in(dir / "curves" / "stick_plan4mc.csv");
  std::string first;
  std::getline(in, first);
  CHECK(first == "skill,success_fraction");
  fs::remove_all(dir);
}
