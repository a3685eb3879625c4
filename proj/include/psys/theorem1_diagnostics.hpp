#pragma once

#include <vector>

#include "psys/front_tracking.hpp"

namespace psys {

struct LargeShock {
  double position = 0.0;
  double strength = 0.0;
};

struct CensusPoint {
  double t = 0.0;
  double x = 0.0;
  std::vector<int> counts;  // one per radius
  bool flagged = false;
};

struct ShockCensus {
  double delta0 = 0.05;
  std::vector<double> radii;  // decreasing
  std::vector<std::vector<LargeShock>> per_snapshot;
  std::vector<CensusPoint> points;

  bool empty() const;
  // Largest count at the given radius index over all points.
  int max_count(std::size_t radius_index) const;
};

// Counts distinct shock fronts of strength >= delta0 whose space-time segment
// meets the ball of each radius around the final-time front positions and the
// midpoints between them.  A point is flagged when at least `flag_count`
// large shocks reach it at the smallest radius.
ShockCensus census(const History& h, double delta0, std::vector<double> radii = {0.2, 0.1, 0.05, 0.025},
                   int flag_count = 2);

struct FarFieldReport {
  double initial_strength = 0.0;  // outside [-R0, R0] at the start
  double max_strength = 0.0;      // in the receding regions over the run
  double constant = 0.0;          // max_strength / eps0
  double lambda_hat = 0.0;
  double max_front_speed = 0.0;
  bool speed_ok = true;
  std::size_t times_checked = 0;
};

// Total wave strength in ]-inf, -R0 - lambda_hat t[ and ]R0 + lambda_hat t, inf[
// at the start, after every event and at the end.
FarFieldReport far_field_bound(const History& h, double R0, double eps0, double lambda_hat);

}  // namespace psys
