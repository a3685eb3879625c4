#pragma once

#include <string>
#include <utility>
#include <vector>

#include "psys/schedule.hpp"

namespace psys {

struct BlowupConfig {
  double T = 100.0;
  double lambda = 0.0;        // 0: default_pattern_drift
  double h_strip = 0.0;       // 0: fitted to the template
  double epsilon_rate = 0.0;  // 0: -ln(1 - 1/T)
  int cycles = 100;
  double alpha = 0.01;
  double period = 5.0;         // untransformed duration of one cycle
  double density_floor = 0.0;  // C3 bound; 0: the run's domain a
  double c2_required = 0.0;

  void validate() const;
  double rate() const;
};

// Fills lambda, h_strip and epsilon_rate when left at 0.
BlowupConfig resolve_blowup_config(const GasParams& g, const PatternStates& ps, BlowupConfig cfg);

std::pair<double, double> transform(double t, double x, const BlowupConfig& cfg);
// Inverse of transform, for tau < T.
std::pair<double, double> inverse_transform(double tau, double y, const BlowupConfig& cfg);

// Speed in (tau, y) of a front moving at xi_prime through (t, x).
double transformed_speed(double t, double x, double xi_prime, const BlowupConfig& cfg);

// max |zeta' - xi'| over a grid of the strip and of |xi'| <= xi_max.
double max_speed_deviation(const BlowupConfig& cfg, double xi_max, int grid = 41);

struct BVRow {
  int cycle = 0;
  double tau = 0.0;
  double bv_hu = 0.0;
  double V = 0.0;
  double leftover_sum = 0.0;  // measured on the leftover fronts
  double leftover_expected = 0.0;  // sum over j <= k of 2 alpha / j
};

struct BlowupReport {
  BlowupConfig cfg;
  std::vector<BVRow> series;
  History history;
  std::size_t events = 0;
  double max_tau = 0.0;

  double c1_max_residual = 0.0;
  bool c1_ok = true;
  DecayReport c2;
  double min_h = 0.0;
  double density_floor = 0.0;
  bool c3_ok = true;
  double c4_slope = 0.0;  // leftover_sum against ln k for k >= 10
  bool c4_ok = true;
  bool bv_ok = true;  // V >= leftover_sum at every cycle end
  int dab_violations = 0;
  double speed_error_constant = 0.0;  // max |zeta' - xi'| * T over pattern fronts
  std::string first_failure;  // empty when every condition holds

  bool pass() const { return first_failure.empty(); }
};

// Runs cycles 1..cfg.cycles of `seq` in transformed coordinates.
BlowupReport assemble_blowup_run(const GasParams& g, const CycleSequence& seq, const BlowupConfig& cfg,
                                 const EngineConfig& engine = {});

double harmonic_number(int n);
// Least-squares slope of ys against xs.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace psys
