#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "psys/front_tracking.hpp"
#include "psys/small_data.hpp"

using namespace psys;

namespace {

const GasParams g3;

State rho_u(double rho, double u) { return State(1.0 / rho, u); }

Profile chain(const State& start, const std::vector<Wave>& waves, const std::vector<double>& xs) {
  Profile p;
  p.states.push_back(start);
  for (std::size_t i = 0; i < waves.size(); ++i) {
    p.breakpoints.push_back(xs[i]);
    p.states.push_back(waves[i].right);
  }
  return p;
}

Front bare_front(long id, double x, double speed) {
  Front f;
  f.id = id;
  f.anchor_x = x;
  f.speed = speed;
  return f;
}

double uh_dist(const State& a, const State& b) {
  return std::max(std::abs(a.u - b.u), std::abs(h_of(g3, a) - h_of(g3, b)));
}

void check_chain(const EngineState& s) {
  for (std::size_t i = 0; i + 1 < s.fronts.size(); ++i) {
    CHECK(uh_dist(s.fronts[i].wave.right, s.fronts[i + 1].wave.left) <= 1e-12);
    CHECK(s.fronts[i].position(s.time) <= s.fronts[i + 1].position(s.time) + 1e-12);
  }
  if (!s.fronts.empty()) {
    CHECK(uh_dist(s.fronts.front().wave.left, s.far_left) <= 1e-12);
    CHECK(uh_dist(s.fronts.back().wave.right, s.far_right) <= 1e-12);
  }
}

}  // namespace

TEST_CASE("config validation") {
  EngineConfig c;
  CHECK_NOTHROW(c.validate());
  c.delta_rarefaction = 0.2;
  CHECK_THROWS_AS(c.validate(), Error);
  c.delta_rarefaction = 0.05;
  c.domain = {2.0, 1.0};
  CHECK_THROWS_AS(c.validate(), Error);
  EngineConfig d;
  CHECK(d.speed_bound(g3) == doctest::Approx(16.0));
  d.lambda_hat = 3.0;
  CHECK(d.speed_bound(g3) == 3.0);
}

TEST_CASE("initial fronts") {
  EngineConfig cfg;
  cfg.delta_rarefaction = 0.1;
  Profile flat{{0.0, 1.0}, {rho_u(1, 0), rho_u(1, 0), rho_u(1, 0)}};
  CHECK(init_from_profile(g3, flat, cfg).fronts.empty());

  State l = rho_u(1.0, 0.0);
  Wave sh = shock_from_left(g3, l, 1, 1.5);
  EngineState s1 = init_from_profile(g3, chain(l, {sh}, {0.0}), cfg);
  REQUIRE(s1.fronts.size() == 1);
  CHECK(s1.fronts[0].speed == doctest::Approx(rh_speed(g3, l, sh.right, 1)).epsilon(1e-12));
  CHECK(s1.fronts[0].wave.kind == WaveKind::Shock);

  Wave r = rarefaction_from_left(g3, l, 2, 0.35);
  EngineState s2 = init_from_profile(g3, chain(l, {r}, {0.0}), cfg);
  REQUIRE(s2.fronts.size() == 4);
  const double expect[] = {0.1, 0.1, 0.1, 0.05};
  for (int i = 0; i < 4; ++i) {
    const Wave& w = s2.fronts[i].wave;
    CHECK(w.strength == doctest::Approx(expect[i]).epsilon(1e-12));
    double mean = 0.5 * (characteristic_speed(g3, w.left, 2) + characteristic_speed(g3, w.right, 2));
    CHECK(s2.fronts[i].speed == doctest::Approx(mean).epsilon(1e-14));
  }
  check_chain(s2);
}

TEST_CASE("next event kinematics") {
  EngineState s;
  CHECK_FALSE(next_event(s).has_value());
  s.time = 2.0;
  s.fronts = {bare_front(0, 0.0, 1.0), bare_front(1, 1.0, -1.0)};
  for (Front& f : s.fronts) f.anchor_t = 2.0;
  auto ev = next_event(s);
  REQUIRE(ev.has_value());
  CHECK(ev->time == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(ev->position == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ev->ids == std::vector<long>{0, 1});

  // three fronts aimed at x = 1 at t = 1
  EngineState t;
  t.fronts = {bare_front(0, 0.0, 1.0), bare_front(1, 1.0, 0.0), bare_front(2, 2.0, -1.0)};
  auto e3 = next_event(t);
  REQUIRE(e3.has_value());
  CHECK(e3->ids.size() == 3);
  CHECK(e3->time == doctest::Approx(1.0).epsilon(1e-15));

  // diverging fronts never meet
  EngineState u;
  u.fronts = {bare_front(0, 0.0, -1.0), bare_front(1, 1.0, 1.0)};
  CHECK_FALSE(next_event(u).has_value());

  // a scheduled break comes first
  EngineState v;
  v.fronts = {bare_front(0, 0.0, 1.0), bare_front(1, 1.0, -1.0)};
  v.fronts[1].break_time = 0.25;
  auto eb = next_event(v);
  REQUIRE(eb.has_value());
  CHECK(eb->kind == EventKind::Break);
  CHECK(eb->time == 0.25);
  CHECK(eb->position == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("head-on small shocks") {
  State l = rho_u(1.0, 0.0);
  Wave s2 = shock_with_strength(g3, l, 2, -0.03);
  Wave s1 = shock_with_strength(g3, s2.right, 1, -0.02);
  EngineConfig cfg;
  Engine eng(g3, init_from_profile(g3, chain(l, {s2, s1}, {0.0, 0.1}), cfg));
  eng.run_until(1.0);
  REQUIRE(eng.history().events.size() == 1);
  const EngineState& s = eng.state();
  REQUIRE(s.fronts.size() == 2);
  double d1 = std::abs(s.fronts[0].wave.strength - s1.strength);
  double d2 = std::abs(s.fronts[1].wave.strength - s2.strength);
  double cubic = 0.03 * 0.02 * 0.05;
  CHECK(d1 + d2 <= 10.0 * cubic);
  CHECK(s.fronts[0].wave.family == 1);
  CHECK(s.fronts[1].wave.family == 2);
  CHECK(eng.history().diagnostics.back().ledger_total == doctest::Approx(0.03 * 0.02).epsilon(1e-10));
  check_chain(s);
}

TEST_CASE("rarefaction crossing a large shock is amplified") {
  State l = rho_u(1.0, 0.0);
  Wave sh = shock_from_left(g3, l, 1, 2.0);
  double eps = 1e-3;
  // state left of l joined to it by a 2-rarefaction of strength eps
  State pl = from_phase(g3, {w1_of(g3, l), w2_of(g3, l) - eps});
  Wave r = wave_between(g3, pl, l, 2, WaveKind::Rarefaction);
  EngineConfig cfg;
  cfg.domain = {0.1, 10.0};
  Engine eng(g3, init_from_profile(g3, chain(pl, {r, sh}, {0.0, 0.1}), cfg));
  eng.run_until(1.0);
  REQUIRE(eng.history().events.size() == 1);
  const Front& out2 = eng.state().fronts.back();
  CHECK(out2.wave.family == 2);
  CHECK(out2.wave.strength == doctest::Approx(amplification_factor(g3, 2.0) * eps).epsilon(1e-3));
}

TEST_CASE("same-family shocks merge") {
  State l = rho_u(1.0, 0.0);
  Wave a = shock_with_strength(g3, l, 1, -0.04);
  Wave b = shock_with_strength(g3, a.right, 1, -0.03);
  EngineConfig cfg;
  Engine eng(g3, init_from_profile(g3, chain(l, {a, b}, {0.0, 0.1}), cfg));
  eng.run_until(5.0);
  REQUIRE(eng.history().events.size() == 1);
  const auto& fr = eng.state().fronts;
  REQUIRE(!fr.empty());
  CHECK(fr[0].wave.family == 1);
  CHECK(fr[0].wave.kind == WaveKind::Shock);
  CHECK(fr[0].wave.strength == doctest::Approx(-0.07).epsilon(1e-3));
  double opposite = 0.0;
  for (std::size_t i = 1; i < fr.size(); ++i) opposite += std::abs(fr[i].wave.strength);
  CHECK(opposite <= 10.0 * 0.04 * 0.03 * 0.07);
}

TEST_CASE("runs") {
  EngineConfig cfg;
  Profile flat{{0.0}, {rho_u(1, 0), rho_u(1, 0)}};
  Engine e0(g3, init_from_profile(g3, flat, cfg));
  e0.run_until(10.0);
  CHECK(e0.state().fronts.empty());
  CHECK(e0.history().events.empty());
  CHECK(e0.state().time == 10.0);

  State l = rho_u(1.0, 0.0);
  Wave s2 = shock_with_strength(g3, l, 2, -0.03);
  Wave s1 = shock_with_strength(g3, s2.right, 1, -0.03);
  Engine e1(g3, init_from_profile(g3, chain(l, {s2, s1}, {0.0, 0.1}), cfg));
  e1.run_until(100.0, {0.0, 50.0});
  CHECK(e1.history().events.size() == 1);
  CHECK(e1.history().snapshots.size() == 2);
  CHECK(e1.history().snapshots[1].time == 50.0);
  CHECK(e1.history().diagnostics.front().event_index == 0);
}

TEST_CASE("event cap") {
  EngineConfig cfg;
  cfg.event_cap = 1;
  State l = rho_u(1.0, 0.0);
  Wave s2 = shock_with_strength(g3, l, 2, -0.03);
  Wave s1 = shock_with_strength(g3, s2.right, 1, -0.03);
  Wave s0 = shock_with_strength(g3, s1.right, 1, -0.02);
  Engine e(g3, init_from_profile(g3, chain(l, {s2, s1, s0}, {0.0, 0.1, 0.3}), cfg));
  try {
    e.run_until(100.0);
    FAIL("expected an event storm");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::EventStorm);
  }
}

TEST_CASE("random small-data runs keep their invariants") {
  SmallDataOptions opt;
  opt.breakpoints = 10;
  opt.t_end = 20.0;
  EngineConfig cfg;
  cfg.domain = opt.domain;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    Profile p = small_data_profile(g3, opt, rng);
    Engine eng(g3, init_from_profile(g3, p, cfg));
    std::size_t seen = 0;
    while (auto ev = eng.next_event()) {
      if (ev->time > opt.t_end) break;
      eng.resolve_interaction(*ev);
      check_chain(eng.state());
      CHECK(uh_dist(eng.state().far_left, p.states.front()) == 0.0);
      CHECK(uh_dist(eng.state().far_right, p.states.back()) == 0.0);
      ++seen;
    }
    DiagnosticRow d = eng.diagnostics();
    CHECK(d.dab_violations == 0);
    CHECK(d.speed_violations == 0);
    CHECK(seen > 0);
  }
}

TEST_CASE("total interaction stays below twice the squared initial variation") {
  SmallDataOptions opt;
  opt.max_jump = 0.01;
  EngineConfig cfg;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SmallDataRun run = run_small_data_case(g3, opt, cfg, seed);
    double K0 = run.report.V0;
    CHECK(run.history.diagnostics.back().ledger_total <= 2.0 * K0 * K0);
    for (const DiagnosticRow& r : run.history.diagnostics) CHECK(r.lemma3_ok);
  }
}

TEST_CASE("decay check") {
  History h;
  h.t_start = 0.0;
  h.t_end = 10.0;
  State l = rho_u(1.0, 0.0);
  FrontTrace f;
  f.wave = rarefaction_from_left(g3, l, 2, 0.05);
  f.birth = 0.0;
  f.death = kNever;
  h.fronts.push_back(f);
  DecayReport r = check_decay_C2(g3, h, 0.01);
  CHECK(r.fronts_checked == 1);
  CHECK(r.pass);
  // the 1/t density of a free fan gives a constant rate: weight * spread / strength
  double spread = characteristic_speed(g3, f.wave.right, 2) - characteristic_speed(g3, f.wave.left, 2);
  double weight = phi(g3, h_of(g3, f.wave.left) + h_of(g3, f.wave.right));
  CHECK(r.min_c0 == doctest::Approx(weight * spread / 0.05).epsilon(1e-9));
  CHECK_FALSE(check_decay_C2(g3, h, 2.0 * r.min_c0).pass);

  History z;
  z.t_end = 1.0;
  FrontTrace zf;
  zf.wave = rarefaction_from_left(g3, l, 2, 0.0);
  z.fronts.push_back(zf);
  DecayReport rz = check_decay_C2(g3, z, 1.0);
  CHECK(rz.pass);
  CHECK(rz.fronts_checked == 0);
}

TEST_CASE("minimal characteristics") {
  EngineConfig cfg;
  State l = rho_u(1.0, 0.0);
  Profile flat{{}, {l}};
  Engine e0(g3, init_from_profile(g3, flat, cfg));
  e0.run_until(2.0);
  auto path = trace_min_characteristic(g3, e0.history(), 2, 2.0, 0.0, 0.0);
  CHECK(path.back().first == 0.0);
  CHECK(path.back().second == doctest::Approx(-2.0).epsilon(1e-14));
  auto p1 = trace_min_characteristic(g3, e0.history(), 1, 2.0, 0.0, 0.0);
  CHECK(p1.back().second == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(trace_min_characteristic(g3, e0.history(), 1, 3.0, 0.0, 0.0), Error);

  // a 1-shock from x = 0: backward characteristics leave it on both sides, and
  // from a point on the shock the minimal one uses the left (slower) state
  Wave sh = shock_from_left(g3, l, 1, 2.0);
  Engine e1(g3, init_from_profile(g3, chain(l, {sh}, {0.0}), cfg));
  e1.run_until(1.0);
  double xs = sh.speed;
  double lam_l = characteristic_speed(g3, l, 1), lam_r = characteristic_speed(g3, sh.right, 1);
  REQUIRE(lam_r < sh.speed);
  REQUIRE(sh.speed < lam_l);
  auto on = trace_min_characteristic(g3, e1.history(), 1, 1.0, xs, 0.0);
  CHECK(on.back().first == 0.0);
  CHECK(on.back().second == doctest::Approx(xs - lam_l).epsilon(1e-12));
  auto right = trace_min_characteristic(g3, e1.history(), 1, 1.0, xs + 0.5, 0.0);
  CHECK(right.back().second == doctest::Approx(xs + 0.5 - lam_r).epsilon(1e-12));

  // the edges of a rarefaction fan diverge linearly
  Wave r = rarefaction_from_left(g3, l, 2, 0.3);
  Engine e2(g3, init_from_profile(g3, chain(l, {r}, {0.0}), cfg));
  e2.run_until(4.0);
  const auto& fr = e2.state().fronts;
  double w2 = fr.back().position(2.0) - fr.front().position(2.0);
  double w4 = fr.back().position(4.0) - fr.front().position(4.0);
  CHECK(w4 == doctest::Approx(2.0 * w2).epsilon(1e-12));
}
