#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "skillforge/rewards.hpp"

using namespace skillforge;
using doctest::Approx;

TEST_CASE("visit grid pays only first visits inside its sheet") {
  VisitGrid grid(0, 0, 10, 11);
  CHECK(grid.visit(0, 0) == 1);
  CHECK(grid.visit(3, 3) == 0);    // same 10x10 square
  CHECK(grid.visit(10, 0) == 1);   // next square over
  CHECK(grid.visit(10, 0) == 0);
  CHECK(grid.visit(500, 500) == 0);  // off the sheet
  CHECK(!grid.covers(500, 500));
  CHECK(grid.visited_count() == 2);
}

TEST_CASE("visit grid covers side*cell/2 in every direction") {
  VisitGrid grid(100, 100, 10, 11);
  CHECK(grid.covers(100 - 55, 100 - 55));
  CHECK(grid.covers(100 + 54, 100 + 54));
  CHECK(!grid.covers(100 + 55, 100));
  CHECK(!grid.covers(100, 100 - 56));
  // visiting every covered square saturates at side^2
  for (int x = 45; x <= 154; ++x)
    for (int z = 45; z <= 154; ++z) grid.visit(x, z);
  CHECK(grid.visited_count() == 11 * 11);
}

TEST_CASE("goal navigation reward") {
  PoseSample s;
  s.heading_alignment = 1.0;  // facing the goal
  s.pitch_term = 1.0;         // level view
  s.distance_to_goal = 4.0;
  CHECK(goal_nav_reward(s, 5.0) == Approx(1 + 1 + 10 * 1.0));

  s.heading_alignment = -1.0;  // facing away
  s.distance_to_goal = 6.0;    // and losing ground
  CHECK(goal_nav_reward(s, 5.0) == Approx(-1 + 1 + 10 * -1.0));
}

TEST_CASE("distance terms telescope over a trajectory") {
  // summed over any path, the distance term collapses to 10*(d_first - d_last)
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  std::vector<double> d(50);
  for (auto& v : d) v = u(rng);
  double total = 0;
  for (size_t t = 1; t < d.size(); ++t) {
    PoseSample s;
    s.heading_alignment = 0;
    s.pitch_term = 0;
    s.distance_to_goal = d[t];
    total += goal_nav_reward(s, d[t - 1]);
  }
  CHECK(total == Approx(10.0 * (d.front() - d.back())));
}

TEST_CASE("combat reward pays only fresh progress") {
  PoseSample s;
  s.prev_min_distance = 8.0;
  s.distance_to_goal = 5.0;
  CHECK(combat_distance_reward(s) == Approx(3.0));
  s.distance_to_goal = 9.0;  // retreating earns nothing, not a penalty
  CHECK(combat_distance_reward(s) == Approx(0.0));
}

TEST_CASE("mining reward branches") {
  CHECK(mining_distance_reward(5.0, 1.0) == Approx(2.0));          // on target
  CHECK(mining_distance_reward(5.0, std::nullopt) == Approx(-2.0));  // lost it
  CHECK(mining_distance_reward(std::nullopt, std::nullopt) == Approx(-2.0));
  CHECK(mining_distance_reward(std::nullopt, 6.0) == Approx(0.0));  // just seen
  CHECK(mining_distance_reward(5.0, 3.0) == Approx(2.0));
  CHECK(mining_distance_reward(5.0, 4.25) == Approx(0.75));
  CHECK(mining_distance_reward(5.0, 7.0) == Approx(-2.0));
}

TEST_CASE("attack reward branches") {
  CHECK(attack_reward(true, true) == Approx(90.0));
  CHECK(attack_reward(true, false) == Approx(1.0));
  CHECK(attack_reward(false, true) == Approx(0.0));
  CHECK(attack_reward(false, false) == Approx(0.0));
}

TEST_CASE("depth reward pays progress past the running extreme") {
  PoseSample s;
  s.prev_extreme_depth = -3;
  s.y_depth = -5;
  CHECK(depth_reward(DepthMode::Down, s) == Approx(2.0));
  s.y_depth = -2;  // above the extreme: nothing
  CHECK(depth_reward(DepthMode::Down, s) == Approx(0.0));

  s.prev_extreme_depth = 4;
  s.y_depth = 6;
  CHECK(depth_reward(DepthMode::Up, s) == Approx(2.0));
  s.y_depth = 1;
  CHECK(depth_reward(DepthMode::Up, s) == Approx(0.0));
}

TEST_CASE("combined reward weights intrinsic vs success") {
  CHECK(combined_reward(0.5, 1) == Approx(0.5 + 10.0));
  CHECK(combined_reward(0.5, 0) == Approx(0.5));
  CHECK(combined_reward(2.0, 1, 0.5, 100.0) == Approx(101.0));
}

TEST_CASE("similarity stub is a constant zero") {
  SimilarityRewardProvider p;
  CHECK(p.similarity("chop a tree") == Approx(0.0));
}
