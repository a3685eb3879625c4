#include "psys/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace psys {

namespace {

using NB = NegativeBranch;
using WK = WaveKind;

// Event points of the template: E1..E7 are indices 0..6.
enum Point { E1 = 0, E2, E3, E4, E5, E6, E7 };

struct Placement {
  double t = 0.0;
  double x = 0.0;
};

class PatternScript : public InteractionScript {
 public:
  PatternScript(GasParams g, CycleSequence seq, int K, PatternTemplate tpl, ScheduleGeometry geo, CoordinateMap map,
                double leftover_speed)
      : g_(g),
        seq_(std::move(seq)),
        K_(K),
        tpl_(tpl),
        geo_(geo),
        map_(std::move(map)),
        leftover_speed_(leftover_speed) {}

  Placement point(int k, int j) const {
    double t = geo_.period * (k - 1 + tpl_.t[j]);
    double x = geo_.x_offset + geo_.lambda * geo_.period * (tpl_.x[j] - (k - 1));
    auto m = map_(t, x);
    return {m.first, m.second};
  }

  double chord(const Placement& a, const Placement& b) const { return (b.x - a.x) / (b.t - a.t); }

  // Front from event point (k, j) to (k2, j2), anchored at its end.
  PlannedFront between(int k, int j, int k2, int j2, int family, WK kind, const State& right, std::string tag) const {
    Placement a = point(k, j), b = point(k2, j2);
    PlannedFront pf;
    pf.family = family;
    pf.kind = kind;
    pf.right = right;
    pf.speed = chord(a, b);
    pf.tag = std::move(tag);
    pf.anchor_t = b.t;
    pf.anchor_x = b.x;
    return pf;
  }

  PlannedFront leftover(int k, int j, int family, WK kind, const State& right, std::string tag) const {
    Placement a = point(k, j);
    PlannedFront pf;
    pf.family = family;
    pf.kind = kind;
    pf.right = right;
    pf.speed = leftover_speed_;
    pf.tag = std::move(tag);
    pf.anchor_t = a.t;
    pf.anchor_x = a.x;
    return pf;
  }

  bool alpha_on() const { return seq_.alpha > 0.0; }

  InteractionPlan plan(const InteractionContext& ctx) override {
    std::multiset<std::string> roles;
    int k = -1;
    for (const Front* f : ctx.incoming) {
      auto colon = f->tag.find(':');
      if (colon == std::string::npos) throw Error(ErrorCode::ScheduleInfeasible, "untagged front in a pattern event");
      int kf = std::stoi(f->tag.substr(colon + 1));
      if (k >= 0 && kf != k)
        throw Error(ErrorCode::ScheduleInfeasible, "fronts of different cycles met: " + describe(ctx));
      k = kf;
      roles.insert(f->tag.substr(0, colon));
    }
    if (k < 1 || k > K_) throw Error(ErrorCode::ScheduleInfeasible, "event outside the scheduled cycles: " + describe(ctx));
    const CycleStates& c = seq_.at(k);
    const std::string ks = std::to_string(k), kn = std::to_string(k + 1);
    auto is = [&](std::initializer_list<const char*> want) {
      return roles == std::multiset<std::string>(want.begin(), want.end());
    };
    InteractionPlan p;
    if (ctx.kind == EventKind::Break) {
      if (!is({"h"})) throw Error(ErrorCode::ScheduleInfeasible, "unexpected break: " + describe(ctx));
      p.label = "(iv):" + ks;
      p.fronts = {between(k, E4, k, E5, 1, WK::Rarefaction, c.P2, "k:" + ks),
                  between(k, E4, k, E7, 2, WK::Shock, c.P4, "l:" + ks)};
    } else if (is({"b2", "c", "d"}) || is({"c", "d"})) {
      p.label = "(i):" + ks;
      p.fronts = {between(k, E1, k, E2, 1, WK::Shock, c.P4, "e:" + ks),
                  between(k, E1, k, E7, 2, WK::Rarefaction, alpha_on() ? c.P3_hat : c.P3, "f1:" + ks)};
      if (alpha_on()) p.fronts.push_back(leftover(k, E1, 2, WK::Rarefaction, c.P3, "f2:" + ks));
    } else if (is({"b1", "e"})) {
      p.label = "(ii):" + ks;
      p.branch2 = NB::Compression;
      p.fronts = {between(k, E2, k, E3, 1, WK::Shock, c.P3, "g:" + ks),
                  between(k, E2, k, E4, 2, WK::Compression, c.P4, "h:" + ks)};
      p.fronts.back().break_time = point(k, E4).t;
    } else if (is({"a", "g"})) {
      p.label = "(iii):" + ks;
      p.fronts = {between(k, E3, k, E6, 1, WK::Shock, c.P0, "i:" + ks),
                  between(k, E3, k, E5, 2, WK::Rarefaction, c.P3, "j:" + ks)};
    } else if (is({"j", "k"})) {
      p.label = "(v):" + ks;
      p.fronts = {between(k, E5, k, E6, 1, WK::Rarefaction, c.P6, "m:" + ks),
                  between(k, E5, k + 1, E1, 2, WK::Rarefaction, c.P2, "c:" + kn)};
    } else if (is({"i", "m"})) {
      p.label = "(vi):" + ks;
      p.branch2 = NB::Compression;
      const CycleStates& n = seq_.at(k + 1);
      p.fronts = {between(k, E6, k + 1, E3, 1, WK::Shock, n.P5, "a:" + kn),
                  between(k, E6, k + 1, E2, 2, WK::Compression, n.P1, "b1:" + kn)};
      if (seq_.has_split) p.fronts.push_back(between(k, E6, k + 1, E1, 2, WK::Compression, c.P6, "b2:" + kn));
    } else if (is({"l", "f1"})) {
      p.label = "(vii):" + ks;
      p.branch1 = NB::Compression;
      p.fronts = {between(k, E7, k + 1, E1, 1, WK::Compression, c.P3_next, "d:" + kn)};
      if (alpha_on()) p.fronts.push_back(leftover(k, E7, 2, WK::Shock, c.P3_hat, "ls:" + ks));
    } else {
      throw Error(ErrorCode::ScheduleInfeasible, "unplanned interaction: " + describe(ctx));
    }
    return p;
  }

 private:
  static std::string describe(const InteractionContext& ctx) {
    std::string s = "t=" + std::to_string(ctx.time) + " {";
    for (std::size_t i = 0; i < ctx.incoming.size(); ++i) s += (i ? "," : "") + ctx.incoming[i]->tag;
    return s + "}";
  }

  GasParams g_;
  CycleSequence seq_;
  int K_;
  PatternTemplate tpl_;
  ScheduleGeometry geo_;
  CoordinateMap map_;
  double leftover_speed_;
};

}  // namespace

ScheduleGeometry fit_geometry(const PatternTemplate& tpl, double period, double lambda, double* strip_width) {
  if (!(period > 0.0) || !(lambda > 0.0))
    throw Error(ErrorCode::InvalidParameter, "period and lambda must be positive");
  double range = tpl.strip_max() - tpl.strip_min();
  ScheduleGeometry geo;
  geo.period = period;
  geo.lambda = lambda;
  geo.x_offset = lambda * period * (0.1 * range - tpl.strip_min());
  if (strip_width) *strip_width = 1.2 * range * lambda * period;
  return geo;
}

PatternScenario build_pattern_scenario(const GasParams& g, const CycleSequence& seq, int K,
                                       const PatternTemplate& tpl, const ScheduleGeometry& geo,
                                       const CoordinateMap& map, double leftover_speed,
                                       const EngineConfig& engine) {
  if (K < 1 || K > seq.k_end) throw Error(ErrorCode::InvalidParameter, "K outside the built cycle range");
  auto script = std::make_shared<PatternScript>(g, seq, K, tpl, geo, map, leftover_speed);
  PatternScenario sc;
  sc.script = script;
  sc.geometry = geo;
  EngineState& s = sc.initial;
  s.config = engine;
  s.config.speed_mode = SpeedMode::Prescribed;
  s.config.domain = pattern_domain(g, seq);
  s.time = map(0.0, geo.x_offset).first;
  const CycleStates& c0 = seq.at(0);
  const CycleStates& c1 = seq.at(1);
  s.far_left = seq.L;
  s.far_right = c1.P3;

  auto add = [&](const State& left, const PlannedFront& pf) {
    Front f;
    f.id = s.next_id++;
    f.wave = wave_between(g, left, pf.right, pf.family, pf.kind);
    f.speed = pf.speed;
    f.anchor_t = pf.anchor_t;
    f.anchor_x = pf.anchor_x;
    f.birth_time = s.time;
    f.tag = pf.tag;
    s.fronts.push_back(f);
  };
  add(seq.L, script->between(0, E6, 1, E3, 1, WK::Shock, c1.P5, "a:1"));
  add(c1.P5, script->between(0, E6, 1, E2, 2, WK::Compression, c1.P1, "b1:1"));
  if (seq.has_split) add(c1.P1, script->between(0, E6, 1, E1, 2, WK::Compression, c0.P6, "b2:1"));
  add(c0.P6, script->between(0, E5, 1, E1, 2, WK::Rarefaction, c0.P2, "c:1"));
  add(c0.P2, script->between(0, E7, 1, E1, 1, WK::Compression, c1.P3, "d:1"));
  for (std::size_t i = 1; i < s.fronts.size(); ++i)
    if (!(s.fronts[i].position(s.time) > s.fronts[i - 1].position(s.time)))
      throw Error(ErrorCode::ScheduleInfeasible, "initial fronts out of order");
  for (int k = 1; k <= K; ++k) sc.cycle_end_times.push_back(map(geo.period * k, geo.x_offset).first);
  return sc;
}

}  // namespace psys

namespace psys {

double configuration_distance(const GasParams& g, const Snapshot& a, const Snapshot& b, double shift) {
  if (a.fronts.size() != b.fronts.size()) return kNever;
  double d = std::max(state_distance(g, a.far_left, b.far_left), state_distance(g, a.far_right, b.far_right));
  for (std::size_t i = 0; i < a.fronts.size(); ++i) {
    const Front& fa = a.fronts[i];
    const Front& fb = b.fronts[i];
    if (fa.wave.family != fb.wave.family || fa.wave.kind != fb.wave.kind) return kNever;
    d = std::max({d, std::abs(fa.position(a.time) - (fb.position(b.time) - shift)), std::abs(fa.speed - fb.speed),
                  state_distance(g, fa.wave.right, fb.wave.right)});
  }
  return d;
}

PeriodicRun run_periodic_pattern(const GasParams& g, const PatternStates& ps, const PeriodicRunOptions& opt) {
  PatternScenario sc = build_periodic_run(g, ps, opt);
  std::vector<double> snaps{sc.initial.time};
  snaps.insert(snaps.end(), sc.cycle_end_times.begin(), sc.cycle_end_times.end());
  Engine eng(g, sc.initial, sc.script);
  eng.run_until(sc.cycle_end_times.back(), snaps);
  PeriodicRun run;
  run.history = eng.history();
  run.max_c1_residual = eng.max_c1_residual();
  PeriodicityReport& rep = run.report;
  const ScheduleGeometry& geo = sc.geometry;
  rep.shift_per_period = geo.lambda * geo.period;
  const auto& sn = run.history.snapshots;
  for (std::size_t n = 1; n < sn.size(); ++n)
    rep.errors.push_back(configuration_distance(g, sn[n], sn[0], static_cast<double>(n) * rep.shift_per_period));
  static const char* expected[] = {"(i)", "(ii)", "(iii)", "(iv)", "(v)", "(vi)", "(vii)"};
  double start = sc.initial.time;
  for (double end : sc.cycle_end_times) {
    std::vector<std::string> labels;
    for (const EventRecord& e : run.history.events)
      if (e.time >= start && e.time < end) labels.push_back(e.label.substr(0, e.label.find(':')));
    rep.events_per_period.push_back(static_cast<int>(labels.size()));
    bool ok = labels.size() == 7;
    for (std::size_t j = 0; ok && j < 7; ++j) ok = labels[j] == expected[j];
    if (!ok) rep.order_ok = false;
    rep.labels.push_back(labels);
    start = end;
  }
  return run;
}

}  // namespace psys
