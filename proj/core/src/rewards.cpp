#include "skillforge/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace skillforge {

std::optional<int> VisitGrid::index(int x, int z) const {
  int half = side_ * cell_ / 2;
  int gx = (x - (ox_ - half)) / cell_;
  int gz = (z - (oz_ - half)) / cell_;
  if (x < ox_ - half || z < oz_ - half || gx >= side_ || gz >= side_)
    return std::nullopt;
  return gz * side_ + gx;
}

bool VisitGrid::covers(int x, int z) const { return index(x, z).has_value(); }

bool VisitGrid::seen(int x, int z) const {
  auto idx = index(x, z);
  return !idx || visited_[*idx];
}

int VisitGrid::visit(int x, int z) {
  auto idx = index(x, z);
  if (!idx || visited_[*idx]) return 0;
  visited_[*idx] = true;
  return 1;
}

int VisitGrid::visited_count() const {
  return (int)std::count(visited_.begin(), visited_.end(), true);
}

double goal_nav_reward(const PoseSample& s, double prev_distance) {
  return s.heading_alignment + s.pitch_term +
         10.0 * (prev_distance - s.distance_to_goal);
}

double combat_distance_reward(const PoseSample& s) {
  return std::max(s.prev_min_distance - s.distance_to_goal, 0.0);
}

double mining_distance_reward(MaybeDistance d_prev, MaybeDistance d_now) {
  if (!d_now) return -2.0;
  if (*d_now < 1.5) return 2.0;
  if (!d_prev) return 0.0;  // target just (re)appeared: no baseline yet
  return *d_prev - *d_now;
}

double attack_reward(bool valid_attack, bool target_centered) {
  if (!valid_attack) return 0.0;
  return target_centered ? 90.0 : 1.0;
}

double depth_reward(DepthMode mode, const PoseSample& s) {
  double delta = mode == DepthMode::Down
                     ? s.prev_extreme_depth - s.y_depth
                     : s.y_depth - s.prev_extreme_depth;
  return std::max(delta, 0.0);
}

double combined_reward(double intrinsic, int extrinsic_success,
                       double w_intrinsic, double w_extrinsic) {
  return w_intrinsic * intrinsic + w_extrinsic * extrinsic_success;
}

}  // namespace skillforge
