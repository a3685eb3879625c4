#pragma once

#include <string>
#include <vector>

#include "psys/front_tracking.hpp"

namespace psys {

// States of the periodic interaction pattern.  P0, P3, P4 lie on {u = h},
// P1, P2, P5 on {u - h = 1}.  The perturbed variant adds P0p, P6 and Lp.
struct PatternStates {
  double epsilon = 0.0;
  double kappa = 0.0;
  double eta = 0.0;  // h(P2)
  State P0, P1, P2, P3, P4, P5, L;
  double L_bracket_lo = 0.0;  // bracket in h(L) used for the L search
  double L_bracket_hi = 0.0;

  bool perturbed = false;
  double split = 0.0;
  State P0p, P6, Lp;

  // States used by the run: the perturbed ones when present.
  const State& P0_used() const { return perturbed ? P0p : P0; }
  const State& P6_used() const { return perturbed ? P6 : P1; }
  const State& L_used() const { return perturbed ? Lp : L; }
};

// h of the state on {u - h = 1} joined by a 1-shock to (1/2, 1/2).
double lemma2_kappa(const GasParams& g);
PatternStates build_lemma2(const GasParams& g, double epsilon);
// Halving search 0.1, 0.05, ... until h0 - h5 >= margin.
double find_lemma2_epsilon(const GasParams& g, double margin = 1e-3, double start = 0.1);

PatternStates build_perturbed_pattern(const GasParams& g, const PatternStates& ps, double split);

struct InteractionCheck {
  std::string label;
  double residual = 0.0;
  bool kinds_ok = true;
};

// Re-solves the seven pattern interactions (i)-(vii) from their outer states.
std::vector<InteractionCheck> verify_pattern_interactions(const GasParams& g, const PatternStates& ps);

// States of one cycle.  P3 is the outer right state during the cycle, P3_next
// the one after it, P3_hat the state between the two leftover waves.
struct CycleStates {
  State P0, P1, P2, P3, P4, P5, P6;
  State P3_next, P3_hat;
};

struct CycleSequence {
  int k_start = 1;
  int k_end = 1;
  double alpha = 0.0;
  bool has_split = false;
  State L;
  State P3_limit;
  PatternStates reference;
  std::vector<CycleStates> cycles;  // index 0 holds the pre-cycle states (P0, P2, P6 only)

  const CycleStates& at(int k) const { return cycles.at(static_cast<std::size_t>(k)); }
};

CycleSequence build_cycle_sequence(const GasParams& g, const PatternStates& ps, double alpha, int K,
                                   int anchor_index = 20000);

// Normalized event layout of one cycle: period 1, drift -1 per period.  Event j
// of cycle k sits at t = k - 1 + t[j], x = x[j] - (k - 1).
struct PatternTemplate {
  double t[7] = {0.10, 0.25, 0.40, 0.50, 0.62, 0.78, 0.90};
  double x[7] = {0.0, -0.3, -0.7, 0.0, -0.4, -1.0, 0.6};
  double leftover_speed = 1.25;
  double strip_min() const;
  double strip_max() const;
};

struct ScheduleGeometry {
  double period = 1.0;
  double lambda = 1.0;
  double x_offset = 0.0;
};

struct PatternScenario {
  EngineState initial;
  std::shared_ptr<InteractionScript> script;
  ScheduleGeometry geometry;
  std::vector<double> cycle_end_times;  // in run coordinates
};

// Smallest invariant domain holding every state of the sequence, with a factor
// 2 margin below the least h and 1% above the largest |u| + h.
Domain pattern_domain(const GasParams& g, const CycleSequence& seq);

// Drift speed used when none is given: 1.1 x the fastest left-moving shock of the pattern.
double default_pattern_drift(const GasParams& g, const PatternStates& ps);

struct PeriodicRunOptions {
  int periods = 5;
  double lambda = 0.0;  // 0: default_pattern_drift
  double period = 1.0;
  EngineConfig engine;  // speed_mode is forced to Prescribed
};

PatternScenario build_periodic_run(const GasParams& g, const PatternStates& ps, const PeriodicRunOptions& opt);

// Human-readable listing of all states and waves.
std::string dump_pattern(const GasParams& g, const PatternStates& ps);

}  // namespace psys
