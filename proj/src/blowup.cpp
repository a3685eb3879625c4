#include "psys/blowup.hpp"

#include <algorithm>
#include <cmath>

namespace psys {

void BlowupConfig::validate() const {
  if (!(T > 1.0)) throw Error(ErrorCode::InvalidParameter, "blowup T must exceed 1");
  if (lambda < 0.0 || h_strip < 0.0 || epsilon_rate < 0.0)
    throw Error(ErrorCode::InvalidParameter, "blowup lambda, h_strip and epsilon_rate must be nonnegative");
  if (cycles < 1) throw Error(ErrorCode::InvalidParameter, "blowup cycles must be at least 1");
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidParameter, "blowup alpha must be nonnegative");
  if (!(period > 0.0)) throw Error(ErrorCode::InvalidParameter, "blowup period must be positive");
}

double BlowupConfig::rate() const { return epsilon_rate > 0.0 ? epsilon_rate : -std::log1p(-1.0 / T); }

BlowupConfig resolve_blowup_config(const GasParams& g, const PatternStates& ps, BlowupConfig cfg) {
  cfg.validate();
  if (cfg.lambda == 0.0) cfg.lambda = default_pattern_drift(g, ps);
  double width = 0.0;
  fit_geometry(PatternTemplate{}, cfg.period, cfg.lambda, &width);
  if (cfg.h_strip == 0.0) {
    cfg.h_strip = width;
  } else if (cfg.h_strip < width) {
    throw Error(ErrorCode::InvalidParameter, "h_strip is narrower than one cycle of the pattern");
  }
  cfg.epsilon_rate = cfg.rate();
  return cfg;
}

std::pair<double, double> transform(double t, double x, const BlowupConfig& cfg) {
  double eps = cfg.rate();
  double decay = std::exp(-eps * t);
  return {-std::expm1(-eps * t) * cfg.T, (x + cfg.lambda * t + cfg.lambda * cfg.T) * decay};
}

std::pair<double, double> inverse_transform(double tau, double y, const BlowupConfig& cfg) {
  if (!(tau < cfg.T)) throw Error(ErrorCode::OutOfRange, "tau must be below T");
  double eps = cfg.rate();
  double t = -std::log1p(-tau / cfg.T) / eps;
  return {t, y * std::exp(eps * t) - cfg.lambda * t - cfg.lambda * cfg.T};
}

double transformed_speed(double t, double x, double xi_prime, const BlowupConfig& cfg) {
  double z = x + cfg.lambda * t;
  double tol = 1e-9 * std::max(1.0, cfg.h_strip);
  if (z < -tol || z > cfg.h_strip + tol) throw Error(ErrorCode::OutOfStrip, "x + lambda t outside [0, h_strip]");
  double eps = cfg.rate();
  return (cfg.lambda * (1.0 - eps * cfg.T) - eps * z + xi_prime) / (eps * cfg.T);
}

double max_speed_deviation(const BlowupConfig& cfg, double xi_max, int grid) {
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    double z = cfg.h_strip * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      double xi = -xi_max + 2.0 * xi_max * j / (grid - 1);
      worst = std::max(worst, std::abs(transformed_speed(0.0, z, xi, cfg) - xi));
    }
  }
  return worst;
}

double harmonic_number(int n) {
  double s = 0.0;
  for (int j = 1; j <= n; ++j) s += 1.0 / j;
  return s;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = std::min(xs.size(), ys.size());
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

namespace {

bool is_leftover(const std::string& tag) { return tag.rfind("f2:", 0) == 0 || tag.rfind("ls:", 0) == 0; }

}  // namespace

BlowupReport assemble_blowup_run(const GasParams& g, const CycleSequence& seq, const BlowupConfig& cfg_in,
                                 const EngineConfig& engine) {
  BlowupReport rep;
  BlowupConfig cfg = resolve_blowup_config(g, seq.reference, cfg_in);
  if (cfg.cycles > seq.k_end) throw Error(ErrorCode::InvalidParameter, "cycle sequence shorter than blowup cycles");
  rep.cfg = cfg;
  PatternTemplate tpl;
  double width = 0.0;
  ScheduleGeometry geo = fit_geometry(tpl, cfg.period, cfg.lambda, &width);
  CoordinateMap map = [cfg](double t, double x) { return transform(t, x, cfg); };
  PatternScenario sc =
      build_pattern_scenario(g, seq, cfg.cycles, tpl, geo, map, tpl.leftover_speed * cfg.lambda, engine);
  Engine eng(g, sc.initial, sc.script);
  eng.run_until(sc.cycle_end_times.back(), sc.cycle_end_times);
  rep.history = eng.history();
  const History& h = rep.history;
  rep.events = h.events.size();
  for (const EventRecord& e : h.events) rep.max_tau = std::max(rep.max_tau, e.time);

  double expected = 0.0;
  for (std::size_t k = 0; k < h.snapshots.size(); ++k) {
    const Snapshot& snap = h.snapshots[k];
    BVRow row;
    row.cycle = static_cast<int>(k) + 1;
    row.tau = snap.time;
    row.V = glimm_V(snap.measures());
    for (const Front& f : snap.fronts) {
      row.bv_hu += std::abs(f.wave.right.u - f.wave.left.u) + std::abs(h_of(g, f.wave.right) - h_of(g, f.wave.left));
      if (is_leftover(f.tag)) row.leftover_sum += std::abs(f.wave.strength);
    }
    expected += 2.0 * cfg.alpha / row.cycle;
    row.leftover_expected = expected;
    rep.series.push_back(row);
  }

  auto fail = [&](const std::string& what) {
    if (rep.first_failure.empty()) rep.first_failure = what;
  };
  rep.c1_max_residual = eng.max_c1_residual();
  rep.c1_ok = rep.c1_max_residual <= sc.initial.config.c1_tolerance;
  if (!rep.c1_ok) fail("C1");
  rep.c2 = check_decay_C2(g, h, cfg.c2_required);
  if (!rep.c2.pass) fail("C2");
  rep.min_h = kNever;
  for (const DiagnosticRow& r : h.diagnostics) rep.min_h = std::min(rep.min_h, r.min_h);
  rep.density_floor = cfg.density_floor > 0.0 ? cfg.density_floor : sc.initial.config.domain.a;
  rep.c3_ok = rep.min_h >= rep.density_floor && rep.density_floor > 0.0;
  if (!rep.c3_ok) fail("C3");
  rep.dab_violations = h.diagnostics.empty() ? 0 : h.diagnostics.back().dab_violations;
  if (rep.dab_violations > 0) fail("invariant domain");

  std::vector<double> lk, ls;
  for (const BVRow& r : rep.series) {
    if (r.V < r.leftover_sum - 1e-9) rep.bv_ok = false;
    if (r.cycle >= 10) {
      lk.push_back(std::log(static_cast<double>(r.cycle)));
      ls.push_back(r.leftover_sum);
    }
  }
  if (!rep.bv_ok) fail("BV below leftover sum");
  if (lk.size() >= 2) {
    rep.c4_slope = fit_slope(lk, ls);
    rep.c4_ok = std::abs(rep.c4_slope - 2.0 * cfg.alpha) <= 0.1 * 2.0 * cfg.alpha;
  } else {
    rep.c4_ok = rep.series.size() < 10;  // too few cycles for a trend
  }
  if (!rep.c4_ok) fail("C4");

  // speed budget: chord of each pattern front in (t, x) against its (tau, y) speed
  for (const FrontTrace& f : h.fronts) {
    if (is_leftover(f.tag)) continue;
    double t1 = f.birth, t2 = std::min(f.death, h.t_end);
    if (!(t2 > t1)) continue;
    auto p1 = inverse_transform(t1, f.anchor_x + f.speed * (t1 - f.anchor_t), cfg);
    auto p2 = inverse_transform(t2, f.anchor_x + f.speed * (t2 - f.anchor_t), cfg);
    double xi = (p2.second - p1.second) / (p2.first - p1.first);
    rep.speed_error_constant = std::max(rep.speed_error_constant, std::abs(f.speed - xi) * cfg.T);
  }
  return rep;
}

}  // namespace psys
