#pragma once

#include <functional>
#include <string>
#include <vector>
#include <utility>

#include "psys/patterns.hpp"

namespace psys {

// Maps physical (t, x) to run coordinates.
using CoordinateMap = std::function<std::pair<double, double>(double, double)>;

// Builds the initial front state and the interaction script that drives
// cycles 1..K of `seq` through the template, in the coordinates of `map`.
// Leftover waves move at `leftover_speed` in run coordinates.
PatternScenario build_pattern_scenario(const GasParams& g, const CycleSequence& seq, int K,
                                       const PatternTemplate& tpl, const ScheduleGeometry& geo,
                                       const CoordinateMap& map, double leftover_speed,
                                       const EngineConfig& engine);

// Geometry whose strip coordinate x + lambda t covers the template range with a
// margin; the strip width is 1.2 times that range.
ScheduleGeometry fit_geometry(const PatternTemplate& tpl, double period, double lambda, double* strip_width);

}  // namespace psys

namespace psys {

struct PeriodicityReport {
  double shift_per_period = 0.0;
  std::vector<double> errors;  // distance to the shifted initial configuration after n periods
  std::vector<int> events_per_period;
  std::vector<std::vector<std::string>> labels;  // event labels per period
  bool order_ok = true;  // labels (i)..(vii) in order in every period
};

struct PeriodicRun {
  History history;
  PeriodicityReport report;
  double max_c1_residual = 0.0;
};

// Builds and runs the periodic pattern, snapshotting at every period end.
PeriodicRun run_periodic_pattern(const GasParams& g, const PatternStates& ps, const PeriodicRunOptions& opt);

// Largest difference between two front configurations after shifting `b` by
// -shift in x; infinite when the front lists differ in length or type.
double configuration_distance(const GasParams& g, const Snapshot& a, const Snapshot& b, double shift);

}  // namespace psys
