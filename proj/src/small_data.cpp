#include "psys/small_data.hpp"

#include <algorithm>
#include <cmath>

namespace psys {

Profile small_data_profile(const GasParams& g, const SmallDataOptions& opt, Rng& rng) {
  if (opt.breakpoints < 1 || !(opt.max_jump > 0.0) || !(opt.spacing > 0.0))
    throw Error(ErrorCode::InvalidParameter, "small data needs breakpoints >= 1 and positive jumps and spacing");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Profile p;
    double h = rng.uniform(opt.h_lo, opt.h_hi);
    double umax = std::max(0.0, opt.domain.b - h - 0.5);
    PhaseCoords w = to_phase(g, state_from_uh(g, rng.uniform(-umax, umax) * 0.25, h));
    p.states.push_back(from_phase(g, w));
    bool ok = true;
    for (int i = 0; i < opt.breakpoints && ok; ++i) {
      w.w1 += rng.uniform(-opt.max_jump, opt.max_jump);
      w.w2 += rng.uniform(-opt.max_jump, opt.max_jump);
      if (!(w.w2 > w.w1)) {
        ok = false;
        break;
      }
      State s = from_phase(g, w);
      if (!opt.domain.contains(g, s)) ok = false;
      p.breakpoints.push_back(opt.spacing * i);
      p.states.push_back(s);
    }
    if (!ok) continue;
    WaveMeasures m = wave_measures(g, p);
    double shock = 0.0;
    for (const Atom& a : m.atoms) shock = std::max(shock, -a.strength);
    if (glimm_V(m) <= opt.V_max && shock < opt.shock_max) return p;
  }
  throw Error(ErrorCode::InvalidParameter, "could not draw small data within the requested bounds");
}

MonotonicityReport functional_monotonicity(const History& h, double eps0, double slack) {
  MonotonicityReport rep;
  rep.events = h.events.size();
  if (h.diagnostics.empty()) return rep;
  const DiagnosticRow& first = h.diagnostics.front();
  rep.V0 = first.V;
  rep.max_shock0 = first.max_shock;
  for (std::size_t i = 0; i < h.diagnostics.size(); ++i) {
    const DiagnosticRow& r = h.diagnostics[i];
    if (!r.lemma3_ok) rep.lemma3_ok = false;
    rep.dab_violations = std::max(rep.dab_violations, r.dab_violations);
    rep.speed_violations = std::max(rep.speed_violations, r.speed_violations);
    if (i == 0) continue;
    const DiagnosticRow& p = h.diagnostics[i - 1];
    double inc = (r.V + eps0 * r.Q) - (p.V + eps0 * p.Q);
    double inc_pairs = (r.V + eps0 * r.Q_pairs) - (p.V + eps0 * p.Q_pairs);
    rep.max_increase = std::max(rep.max_increase, inc);
    rep.max_increase_pairs = std::max(rep.max_increase_pairs, inc_pairs);
    if (inc > slack) ++rep.violations;
    if (inc_pairs > slack) ++rep.violations_pairs;
  }
  return rep;
}

SmallDataRun run_small_data_case(const GasParams& g, const SmallDataOptions& opt, EngineConfig engine,
                                 std::uint64_t seed) {
  Rng rng(seed);
  SmallDataRun run;
  run.initial = small_data_profile(g, opt, rng);
  engine.speed_mode = SpeedMode::Exact;
  engine.domain = opt.domain;
  Engine eng(g, init_from_profile(g, run.initial, engine));
  eng.run_until(opt.t_end);
  run.history = eng.history();
  run.report = functional_monotonicity(run.history, engine.eps0);
  return run;
}

}  // namespace psys
