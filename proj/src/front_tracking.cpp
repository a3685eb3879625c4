#include "psys/front_tracking.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace psys {

void EngineConfig::validate() const {
  if (!(delta_rarefaction > 0.0) || delta_rarefaction > 0.1)
    throw Error(ErrorCode::InvalidParameter, "delta_rarefaction must lie in (0, 0.1]");
  if (!(delta0_shock_threshold > 0.0)) throw Error(ErrorCode::InvalidParameter, "delta0_shock_threshold must be positive");
  if (lambda_hat < 0.0) throw Error(ErrorCode::InvalidParameter, "lambda_hat must be nonnegative");
  if (!(tie_tolerance > 0.0)) throw Error(ErrorCode::InvalidParameter, "tie_tolerance must be positive");
  if (!(domain.a > 0.0) || !(domain.b > domain.a)) throw Error(ErrorCode::InvalidParameter, "domain needs 0 < a < b");
  if (!(eps0 > 0.0)) throw Error(ErrorCode::InvalidParameter, "eps0 must be positive");
  if (event_cap == 0) throw Error(ErrorCode::InvalidParameter, "event_cap must be positive");
  if (!(c1_tolerance > 0.0)) throw Error(ErrorCode::InvalidParameter, "c1_tolerance must be positive");
}

double EngineConfig::speed_bound(const GasParams& g) const {
  return lambda_hat > 0.0 ? lambda_hat : domain.lambda_hat(g);
}

std::vector<Wave> split_rarefaction(const GasParams& g, const Wave& w, double delta) {
  if (w.kind != WaveKind::Rarefaction || w.strength <= delta) return {w};
  int n = static_cast<int>(std::ceil(w.strength / delta - 1e-12));
  std::vector<Wave> out;
  State cur = w.left;
  for (int i = 0; i < n; ++i) {
    Wave piece;
    if (i + 1 < n) {
      piece = integral_curve_from_left(g, cur, w.family, delta);
    } else {
      piece = wave_between(g, cur, w.right, w.family, WaveKind::Rarefaction);
    }
    out.push_back(piece);
    cur = piece.right;
  }
  return out;
}

namespace {

void append_fronts(const GasParams& g, const Wave& w, double delta, double x, double t, long& next_id,
                   std::vector<Front>& out) {
  if (w.is_zero()) return;
  for (const Wave& piece : split_rarefaction(g, w, delta)) {
    Front f;
    f.id = next_id++;
    f.anchor_x = x;
    f.anchor_t = t;
    f.birth_time = t;
    f.wave = piece;
    f.speed = piece.speed;
    out.push_back(f);
  }
}

}  // namespace

EngineState init_from_profile(const GasParams& g, const Profile& p, const EngineConfig& cfg, double t0) {
  cfg.validate();
  p.validate(g);
  EngineState s;
  s.time = t0;
  s.config = cfg;
  s.far_left = p.states.front();
  s.far_right = p.states.back();
  for (std::size_t i = 0; i < p.breakpoints.size(); ++i) {
    RiemannSolution sol = solve_riemann(g, p.states[i], p.states[i + 1]);
    s.discarded_mass += sol.discarded;
    append_fronts(g, sol.wave1, cfg.delta_rarefaction, p.breakpoints[i], t0, s.next_id, s.fronts);
    append_fronts(g, sol.wave2, cfg.delta_rarefaction, p.breakpoints[i], t0, s.next_id, s.fronts);
  }
  return s;
}

std::optional<Event> next_event(const EngineState& s) {
  const auto& fr = s.fronts;
  const double t = s.time;
  const std::size_t n = fr.size();
  std::vector<double> tc(n > 0 ? n - 1 : 0, kNever), xc(tc.size(), 0.0);
  double best = kNever;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double ds = fr[i].speed - fr[i + 1].speed;
    if (!(ds > 0.0)) continue;
    double gap = fr[i + 1].position(t) - fr[i].position(t);
    double dt = gap > 0.0 ? gap / ds : 0.0;
    tc[i] = t + dt;
    xc[i] = fr[i].position(tc[i]);
    best = std::min(best, tc[i]);
  }
  double best_break = kNever;
  std::size_t break_idx = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (fr[i].break_time < best_break) {
      best_break = fr[i].break_time;
      break_idx = i;
    }
  if (best == kNever && best_break == kNever) return std::nullopt;

  const double tol = s.config.tie_tolerance;
  if (best_break < best) {
    Event ev;
    ev.kind = EventKind::Break;
    ev.time = std::max(best_break, t);
    ev.position = fr[break_idx].position(ev.time);
    ev.ids = {fr[break_idx].id};
    return ev;
  }
  double ttol = tol * std::max(1.0, std::abs(best));
  std::size_t first = 0;
  while (!(tc[first] <= best + ttol)) ++first;
  double x0 = xc[first];
  double xtol = std::max(1e3 * tol, 1e-9) * std::max(1.0, std::abs(x0));
  std::size_t last = first;  // pair index range [first, last]
  while (last + 1 < tc.size() && std::abs(tc[last + 1] - best) <= ttol && std::abs(xc[last + 1] - x0) <= xtol)
    ++last;
  // fronts sharing the collision point that move in parallel with a colliding neighbour
  Event ev;
  ev.kind = EventKind::Collision;
  ev.time = best;
  ev.position = x0;
  for (std::size_t i = first; i <= last + 1; ++i) ev.ids.push_back(fr[i].id);
  return ev;
}

Engine::Engine(GasParams g, EngineState s, std::shared_ptr<InteractionScript> script)
    : g_(g), s_(std::move(s)), script_(std::move(script)) {
  s_.config.validate();
  if (s_.config.speed_mode == SpeedMode::Prescribed && !script_)
    throw Error(ErrorCode::InvalidParameter, "prescribed speed mode needs an interaction script");
  hist_.t_start = s_.time;
  hist_.t_end = s_.time;
  hist_.far_left = s_.far_left;
  hist_.far_right = s_.far_right;
  for (const Front& f : s_.fronts) {
    if (static_cast<std::size_t>(f.id) != hist_.fronts.size())
      throw Error(ErrorCode::InvalidParameter, "front ids must be consecutive from 0");
    check_new_front(f);
    hist_.fronts.push_back({f.id, f.wave, f.speed, f.anchor_x, f.anchor_t, f.birth_time, kNever, f.tag});
  }
  if (!s_.fronts.empty() && !s_.config.domain.contains(g_, s_.far_left)) ++dab_violations_;
  DiagnosticRow row = diagnostics();
  hist_.diagnostics.push_back(row);
}

void Engine::check_new_front(const Front& f) {
  const Domain& d = s_.config.domain;
  if (!d.contains(g_, f.wave.right)) ++dab_violations_;
  if (std::abs(f.speed) > s_.config.speed_bound(g_) * (1.0 + 1e-12)) ++speed_violations_;
}

Front Engine::make_front(const Wave& w, double speed, double x, double t, std::string tag, double break_time) {
  Front f;
  f.id = s_.next_id++;
  f.anchor_x = x;
  f.anchor_t = t;
  f.birth_time = t;
  f.speed = speed;
  f.wave = w;
  f.tag = std::move(tag);
  f.break_time = break_time;
  return f;
}

std::vector<Front> Engine::exact_outgoing(const RiemannSolution& sol, double x, double t, double* discarded) {
  std::vector<Front> out;
  *discarded += sol.discarded;
  for (const Wave* w : {&sol.wave1, &sol.wave2}) {
    if (w->is_zero()) continue;
    for (const Wave& piece : split_rarefaction(g_, *w, s_.config.delta_rarefaction))
      out.push_back(make_front(piece, piece.speed, x, t, "", kNever));
  }
  return out;
}

namespace {

// Builds the waves of a plan starting at `left`, each planned front ending at
// its planned state.
std::vector<Wave> planned_waves(const GasParams& g, const State& left, const InteractionPlan& plan) {
  std::vector<Wave> ws;
  State cur = left;
  for (const PlannedFront& pf : plan.fronts) {
    ws.push_back(wave_between(g, cur, pf.right, pf.family, pf.kind));
    cur = pf.right;
  }
  return ws;
}

}  // namespace

void Engine::resolve_interaction(const Event& ev) {
  auto& fr = s_.fronts;
  std::size_t first = fr.size(), last = 0;
  for (std::size_t i = 0; i < fr.size(); ++i)
    if (std::find(ev.ids.begin(), ev.ids.end(), fr[i].id) != ev.ids.end()) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  if (first == fr.size() || last - first + 1 != ev.ids.size())
    throw Error(ErrorCode::InvalidParameter, "event does not match a contiguous group of fronts");

  s_.time = std::max(s_.time, ev.time);
  ++s_.event_count;
  if (s_.event_count > s_.config.event_cap)
    throw Error(ErrorCode::EventStorm, "event cap exceeded");

  const State L = fr[first].wave.left;
  const State R = fr[last].wave.right;
  EventRecord rec;
  rec.index = hist_.events.size();
  rec.time = ev.time;
  rec.position = ev.position;
  rec.kind = ev.kind;
  double amount = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    rec.in_ids.push_back(fr[i].id);
    rec.in_tags.push_back(fr[i].tag);
    for (std::size_t j = i + 1; j <= last; ++j) amount += std::abs(fr[i].wave.strength * fr[j].wave.strength);
  }
  rec.interaction_amount = amount;
  if (ev.kind == EventKind::Collision) s_.ledger.add(ev.time, ev.position, amount);

  std::vector<Front> out;
  if (s_.config.speed_mode == SpeedMode::Exact) {
    RiemannSolution sol = solve_riemann(g_, L, R);
    out = exact_outgoing(sol, ev.position, ev.time, &s_.discarded_mass);
  } else {
    InteractionContext ctx;
    ctx.time = ev.time;
    ctx.position = ev.position;
    ctx.kind = ev.kind;
    ctx.left = L;
    ctx.right = R;
    for (std::size_t i = first; i <= last; ++i) ctx.incoming.push_back(&fr[i]);
    InteractionPlan plan = script_->plan(ctx);
    rec.label = plan.label;
    if (plan.fronts.empty()) throw Error(ErrorCode::ScheduleInfeasible, "empty interaction plan");
    RiemannOptions opt;
    opt.branch1 = plan.branch1;
    opt.branch2 = plan.branch2;
    RiemannSolution sol = solve_riemann(g_, L, R, opt);

    // C1: the planned chain must reproduce the exact Riemann solution.
    std::vector<Wave> pw = planned_waves(g_, L, plan);
    State plan_mid = L;
    double plan_s1 = 0.0, plan_s2 = 0.0, curve_res = 0.0;
    for (std::size_t k = 0; k < pw.size(); ++k) {
      if (pw[k].family == 1) {
        plan_mid = pw[k].right;
        plan_s1 += pw[k].strength;
      } else {
        plan_s2 += pw[k].strength;
      }
      if (k > 0 && pw[k].family < pw[k - 1].family)
        throw Error(ErrorCode::ScheduleInfeasible, "planned 1-wave to the right of a 2-wave");
      curve_res = std::max(curve_res, curve_residual(g_, pw[k]));
    }
    double res = std::max({state_distance(g_, plan_mid, sol.middle),
                           std::abs(plan_s1 - sol.wave1.strength), std::abs(plan_s2 - sol.wave2.strength),
                           state_distance(g_, plan.fronts.back().right, R), curve_res});
    rec.c1_residual = res;
    max_c1_ = std::max(max_c1_, res);
    if (!(res <= s_.config.c1_tolerance))
      throw Error(ErrorCode::InvariantViolation,
                  "C1: planned outgoing waves differ from the exact Riemann solution at event " +
                      std::to_string(rec.index) + " (" + plan.label + "), residual " + std::to_string(res));

    std::vector<Wave> adopted;
    if (s_.config.adopt_planned_states) {
      adopted = pw;
      adopted.back().right = R;
      adopted.back() = wave_between(g_, adopted.back().left, R, adopted.back().family, adopted.back().kind);
    } else {
      // exact middle state; splits inside a family keep their planned strengths
      State cur = L;
      for (std::size_t k = 0; k < pw.size(); ++k) {
        bool last_of_family = k + 1 == pw.size() || pw[k + 1].family != pw[k].family;
        State end;
        if (last_of_family) {
          end = pw[k].family == 1 ? sol.middle : R;
        } else if (pw[k].kind == WaveKind::Shock) {
          end = shock_with_strength(g_, cur, pw[k].family, pw[k].strength).right;
        } else {
          end = integral_curve_from_left(g_, cur, pw[k].family, pw[k].strength).right;
        }
        adopted.push_back(wave_between(g_, cur, end, pw[k].family, pw[k].kind));
        cur = end;
      }
    }
    for (std::size_t k = 0; k < adopted.size(); ++k) {
      const PlannedFront& pf = plan.fronts[k];
      if (k > 0 && pf.speed < plan.fronts[k - 1].speed)
        throw Error(ErrorCode::ScheduleInfeasible, "planned speeds are not ordered at event " + plan.label);
      bool anchored = std::isfinite(pf.anchor_t) && std::isfinite(pf.anchor_x);
      out.push_back(make_front(adopted[k], pf.speed, anchored ? pf.anchor_x : ev.position,
                               anchored ? pf.anchor_t : ev.time, pf.tag, pf.break_time));
      out.back().birth_time = ev.time;
    }
  }

  for (std::size_t i = first; i <= last; ++i) hist_.fronts[static_cast<std::size_t>(fr[i].id)].death = ev.time;
  for (const Front& f : out) {
    check_new_front(f);
    rec.out_ids.push_back(f.id);
    hist_.fronts.push_back({f.id, f.wave, f.speed, f.anchor_x, f.anchor_t, f.birth_time, kNever, f.tag});
  }
  fr.erase(fr.begin() + static_cast<long>(first), fr.begin() + static_cast<long>(last) + 1);
  fr.insert(fr.begin() + static_cast<long>(first), out.begin(), out.end());
  hist_.events.push_back(rec);
  hist_.t_end = s_.time;
  DiagnosticRow row = diagnostics();
  row.event_index = rec.index + 1;
  hist_.diagnostics.push_back(row);
}

void Engine::run_until(double t_end, std::vector<double> snapshot_times) {
  if (t_end < s_.time) throw Error(ErrorCode::OutOfRange, "t_end precedes the current time");
  std::sort(snapshot_times.begin(), snapshot_times.end());
  std::size_t next_snap = 0;
  while (next_snap < snapshot_times.size() && snapshot_times[next_snap] < s_.time) ++next_snap;
  while (true) {
    std::optional<Event> ev = next_event();
    double t_next = ev ? ev->time : kNever;
    while (next_snap < snapshot_times.size() && snapshot_times[next_snap] <= std::min(t_next, t_end)) {
      hist_.snapshots.push_back(snapshot(snapshot_times[next_snap]));
      ++next_snap;
    }
    if (!ev || ev->time > t_end) break;
    resolve_interaction(*ev);
  }
  s_.time = t_end;
  hist_.t_end = t_end;
}

Snapshot Engine::snapshot(double t) const {
  Snapshot snap;
  snap.time = t;
  snap.far_left = s_.far_left;
  snap.far_right = s_.far_right;
  snap.fronts = s_.fronts;
  for (Front& f : snap.fronts) {
    f.anchor_x = f.position(t);
    f.anchor_t = t;
  }
  return snap;
}

Profile Snapshot::profile() const {
  Profile p;
  p.states.push_back(far_left);
  for (const Front& f : fronts) {
    double x = f.position(time);
    if (!p.breakpoints.empty() && !(x > p.breakpoints.back())) {
      p.states.back() = f.wave.right;
      continue;
    }
    p.breakpoints.push_back(x);
    p.states.push_back(f.wave.right);
  }
  return p;
}

WaveMeasures Snapshot::measures() const {
  std::vector<Atom> atoms;
  for (const Front& f : fronts) atoms.push_back({f.position(time), f.wave.family, f.wave.strength});
  return measures_from_atoms(std::move(atoms));
}

WaveMeasures Engine::measures() const { return snapshot(s_.time).measures(); }

DiagnosticRow Engine::diagnostics() const {
  DiagnosticRow row;
  row.time = s_.time;
  row.fronts = s_.fronts.size();
  WaveMeasures m = measures();
  row.V = glimm_V(m);
  row.Q = glimm_Q(m);
  row.Q_pairs = glimm_Q_pairs(m);
  row.functional = row.V + s_.config.eps0 * row.Q;
  row.min_h = h_of(g_, s_.far_left);
  for (const Front& f : s_.fronts) {
    row.bv_hu += std::abs(f.wave.right.u - f.wave.left.u) + std::abs(h_of(g_, f.wave.right) - h_of(g_, f.wave.left));
    if (f.wave.kind == WaveKind::Shock) row.max_shock = std::max(row.max_shock, std::abs(f.wave.strength));
    row.min_h = std::min(row.min_h, h_of(g_, f.wave.right));
  }
  row.ledger_total = s_.ledger.total;
  row.discarded = s_.discarded_mass;
  row.dab_violations = dab_violations_;
  row.speed_violations = speed_violations_;
  double delta1 = std::max(s_.config.delta_rarefaction, 1e-12);
  Lemma3Report l3 = check_lemma3(m, -kNever, kNever, s_.config.domain.b, delta1);
  row.lemma3_ok = l3.ok;
  return row;
}

DecayReport check_decay_C2(const GasParams& g, const History& h, double c0_required) {
  DecayReport rep;
  for (const FrontTrace& f : h.fronts) {
    if (f.wave.kind != WaveKind::Rarefaction || f.wave.strength <= 0.0) continue;
    double end = std::min(f.death, h.t_end);
    double life = end - f.birth;
    if (!(life > 0.0)) continue;
    ++rep.fronts_checked;
    double spread = characteristic_speed(g, f.wave.right, f.wave.family) -
                    characteristic_speed(g, f.wave.left, f.wave.family);
    if (!(spread > 0.0)) {
      rep.pass = false;
      rep.min_c0 = std::min(rep.min_c0, 0.0);
      rep.max_violation = std::max(rep.max_violation, c0_required);
      continue;
    }
    double weight = phi(g, h_of(g, f.wave.left) + h_of(g, f.wave.right));
    auto density = [&](double t) { return f.wave.strength / (spread * (t - f.birth)); };
    const int n = 8;
    for (int j = 1; j < n; ++j) {
      double t1 = f.birth + life * j / n, t2 = f.birth + life * (j + 1) / n;
      double d1 = density(t1), d2 = density(t2);
      double c0 = -(weight * d2 - weight * d1) / ((t2 - t1) * d1 * d2);
      rep.min_c0 = std::min(rep.min_c0, c0);
      if (c0 < c0_required) {
        rep.pass = false;
        rep.max_violation = std::max(rep.max_violation, c0_required - c0);
      }
    }
  }
  return rep;
}

namespace {

struct Alive {
  const FrontTrace* f;
  double x;
};

// Fronts alive on the open interval just below time t, ordered by position at t.
std::vector<Alive> alive_below(const History& h, double t) {
  std::vector<Alive> out;
  for (const FrontTrace& f : h.fronts)
    if (f.birth < t && f.death >= t) out.push_back({&f, f.anchor_x + f.speed * (t - f.anchor_t)});
  std::stable_sort(out.begin(), out.end(), [](const Alive& a, const Alive& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.f->id < b.f->id;
  });
  return out;
}

}  // namespace

std::vector<std::pair<double, double>> trace_min_characteristic(const GasParams& g, const History& h, int family,
                                                                double t, double x, double t_start) {
  if (t > h.t_end + 1e-12 || t < h.t_start || t_start < h.t_start || t_start > t)
    throw Error(ErrorCode::OutOfRange, "terminal point outside the recorded time range");
  std::set<double> times;
  for (const FrontTrace& f : h.fronts) {
    if (f.birth > t_start && f.birth < t) times.insert(f.birth);
    if (f.death > t_start && f.death < t) times.insert(f.death);
  }
  std::vector<std::pair<double, double>> path{{t, x}};
  double cur_t = t, cur_x = x;
  int guard = 0;
  while (cur_t > t_start && guard++ < 100000) {
    auto it = times.lower_bound(cur_t);
    double t_lo = it == times.begin() ? t_start : std::max(t_start, *std::prev(it));
    std::vector<Alive> al = alive_below(h, cur_t);
    double xtol = 1e-12 * std::max(1.0, std::abs(cur_x));
    // cells around cur_x: fronts located at cur_x, and the neighbours
    std::size_t lo = 0;
    while (lo < al.size() && al[lo].x < cur_x - xtol) ++lo;
    std::size_t hi = lo;
    while (hi < al.size() && al[hi].x <= cur_x + xtol) ++hi;
    auto cell_state = [&](std::size_t k) {  // cell left of al[k] (k may equal al.size())
      return k == 0 ? h.far_left : al[k - 1].f->wave.right;
    };
    double slope = 0.0;
    const FrontTrace* ride = nullptr;
    if (hi == lo) {
      slope = characteristic_speed(g, cell_state(lo), family);
    } else {
      bool chosen = false;
      for (std::size_t k = lo; k <= hi && !chosen; ++k) {
        double lam = characteristic_speed(g, cell_state(k), family);
        bool ok_left = k == lo || lam <= al[k - 1].f->speed;
        bool ok_right = k == hi || lam >= al[k].f->speed;
        if (ok_left && ok_right) {
          slope = lam;
          chosen = true;
        }
      }
      for (std::size_t k = lo; k < hi && !chosen; ++k) {
        double lam_l = characteristic_speed(g, cell_state(k), family);
        double lam_r = characteristic_speed(g, cell_state(k + 1), family);
        if (lam_l <= al[k].f->speed && lam_r >= al[k].f->speed) {
          ride = al[k].f;
          slope = ride->speed;
          chosen = true;
        }
      }
      if (!chosen) {
        ride = al[lo].f;
        slope = ride->speed;
      }
    }
    // march back to t_lo or to the first front met
    double t_hit = t_lo;
    if (!ride) {
      for (const Alive& a : al) {
        double ds = slope - a.f->speed;
        if (ds == 0.0) continue;
        double dt = (cur_x - a.x) / ds;  // positions coincide at cur_t - dt
        if (dt > 1e-15 * std::max(1.0, cur_t) && cur_t - dt > t_hit) t_hit = cur_t - dt;
      }
    }
    double nx = cur_x - slope * (cur_t - t_hit);
    cur_t = t_hit;
    cur_x = nx;
    path.push_back({cur_t, cur_x});
  }
  return path;
}

}  // namespace psys
