#pragma once

#include <cstdint>

#include "psys/front_tracking.hpp"

namespace psys {

// Random piecewise constant data: a walk in (w1, w2) with jumps of at most
// max_jump per family, started at h in [h_lo, h_hi], kept inside `domain`.
struct SmallDataOptions {
  int breakpoints = 16;
  double spacing = 1.0;
  double max_jump = 0.04;
  double h_lo = 1.0;
  double h_hi = 2.0;
  Domain domain{0.5, 4.0};
  double V_max = 2.0;
  double shock_max = 0.05;
  double t_end = 40.0;
};

Profile small_data_profile(const GasParams& g, const SmallDataOptions& opt, Rng& rng);

struct MonotonicityReport {
  std::size_t events = 0;
  double V0 = 0.0;
  double max_shock0 = 0.0;
  double max_increase = 0.0;        // of V + eps0 Q across one event
  double max_increase_pairs = 0.0;  // same with the distinct-pair potential
  std::size_t violations = 0;
  std::size_t violations_pairs = 0;
  bool lemma3_ok = true;
  int dab_violations = 0;
  int speed_violations = 0;
};

MonotonicityReport functional_monotonicity(const History& h, double eps0, double slack = 1e-9);

struct SmallDataRun {
  Profile initial;
  History history;
  MonotonicityReport report;
};

// One exact-mode run from seeded small data.
SmallDataRun run_small_data_case(const GasParams& g, const SmallDataOptions& opt, EngineConfig engine,
                                 std::uint64_t seed);

}  // namespace psys
