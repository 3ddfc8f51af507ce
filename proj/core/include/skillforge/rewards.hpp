#pragma once

#include <optional>
#include <string>
#include <vector>

namespace skillforge {

// Coarse visitation map: an odd `side` x `side` sheet of cell_size x cell_size
// squares centered on `origin`. Drives count-based exploration.
class VisitGrid {
 public:
  VisitGrid(int origin_x, int origin_z, int cell_size = 10, int side = 11)
      : ox_(origin_x), oz_(origin_z), cell_(cell_size), side_(side),
        visited_(side * side, false) {}

  // +1 on the first visit to a covered square, 0 on revisits and positions
  // off the sheet.
  int visit(int x, int z);

  int visited_count() const;
  int side() const { return side_; }
  bool covers(int x, int z) const;
  // true when the square holding (x, z) was already visited; positions off
  // the sheet count as seen (they can never pay again)
  bool seen(int x, int z) const;

 private:
  std::optional<int> index(int x, int z) const;
  int ox_, oz_, cell_, side_;
  std::vector<bool> visited_;
};

inline int state_count_reward(VisitGrid& grid, int x, int z) {
  return grid.visit(x, z);
}

// Distances are in grid cells; "undetected" (no target in lidar) is the
// nullopt sentinel.
using MaybeDistance = std::optional<double>;

struct PoseSample {
  double distance_to_goal = 0;
  double prev_min_distance = 0;
  double heading_alignment = 1.0;  // cosine between heading and goal bearing
  double pitch_term = 1.0;         // flat world: cos(0)
  int y_depth = 0;
  int prev_extreme_depth = 0;
};

// heading + pitch + 10 * (distance progress)
double goal_nav_reward(const PoseSample& s, double prev_distance);

// Progress beyond the closest the agent has ever been; never negative.
double combat_distance_reward(const PoseSample& s);

// 2 when on top of the target, -2 when the target vanished from view,
// otherwise plain distance progress (0 across an undetected->detected edge).
double mining_distance_reward(MaybeDistance d_prev, MaybeDistance d_now);

// 90 for a landed hit on a centered target, 1 for any other landed hit.
double attack_reward(bool valid_attack, bool target_centered);

enum class DepthMode { Down, Up };

// Progress past the running depth extreme (min for Down, max for Up).
double depth_reward(DepthMode mode, const PoseSample& s);

double combined_reward(double intrinsic, int extrinsic_success,
                       double w_intrinsic = 1.0, double w_extrinsic = 10.0);

// Stand-in for a vision-language similarity reward: the real thing is out of
// scope, but the summation path through training stays exercised.
class SimilarityRewardProvider {
 public:
  virtual ~SimilarityRewardProvider() = default;
  virtual double similarity(const std::string& /*prompt*/) { return 0.0; }
};

}  // namespace skillforge
