#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "psys/patterns.hpp"
#include "psys/schedule.hpp"

using namespace psys;

namespace {

const GasParams g3;

double dist(const State& a, const State& b) {
  return std::max(std::abs(a.u - b.u), std::abs(h_of(g3, a) - h_of(g3, b)));
}

// u - h of a state, i.e. its offset from the line u = h
double off(const State& s) { return s.u - h_of(g3, s); }

// Relative mismatch between a 1-shock issued from `left` and the state `right`.
double shock_mismatch(const State& left, const State& right, int family) {
  Wave w = shock_from_left(g3, left, family, left.v / right.v);
  return dist(w.right, right) / std::max(1.0, std::abs(right.u));
}

struct Fixture {
  double eps = find_lemma2_epsilon(g3);
  PatternStates base = build_lemma2(g3, eps);
  PatternStates pert = build_perturbed_pattern(g3, base, 0.5);
};

const Fixture& fx() {
  static Fixture f;
  return f;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("reference shock height") {
  double kappa = lemma2_kappa(g3);
  CHECK(kappa > 0.0);
  CHECK(kappa < 0.5);
  // oracle: bisection on u_Q - s(h_Q, theta) = 1/2 with u_Q = 1 + h_Q
  double lo = 1e-9, hi = 0.5 - 1e-12;
  auto f = [](double h) {
    double th = std::pow(0.5 / h, 2.0 / (g3.gamma() - 1.0));
    return 1.0 + h - shock_jump(g3, h, th) - 0.5;
  };
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (lo + hi);
    ((f(m) > 0.0) == (f(lo) > 0.0) ? lo : hi) = m;
  }
  CHECK(kappa == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));
  CHECK(kappa == doctest::Approx(0.0947955).epsilon(1e-6));
}

TEST_CASE("epsilon search") {
  CHECK(fx().eps == 0.1 / 65536.0);
  CHECK_THROWS_AS(build_lemma2(g3, 0.1), Error);
  try {
    build_lemma2(g3, 0.1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EpsilonTooLarge);
  }
  CHECK_THROWS_AS(build_lemma2(g3, 0.0), Error);
}

TEST_CASE("pattern states") {
  const PatternStates& p = fx().base;
  double eps = p.epsilon;
  CHECK(p.P0.u == doctest::Approx(0.5 + eps).epsilon(1e-15));
  CHECK(h_of(g3, p.P0) == doctest::Approx(0.5 + eps).epsilon(1e-14));
  CHECK(p.P1.u == doctest::Approx(1.0 + eps).epsilon(1e-15));
  CHECK(h_of(g3, p.P1) == doctest::Approx(eps).epsilon(1e-10));
  for (const State* s : {&p.P0, &p.P3, &p.P4}) CHECK(std::abs(off(*s)) <= 1e-10);
  for (const State* s : {&p.P1, &p.P2, &p.P5}) CHECK(std::abs(off(*s) - 1.0) <= 1e-10);
  double h0 = h_of(g3, p.P0), h3 = h_of(g3, p.P3), h5 = h_of(g3, p.P5);
  CHECK(h5 < h0);
  CHECK(h0 < h3);
  CHECK(p.P0.u < p.P3.u);
  CHECK(p.P3.u < p.P5.u);
  CHECK(p.eta == doctest::Approx(h_of(g3, p.P2)).epsilon(1e-15));
  CHECK(h_of(g3, p.P3) == doctest::Approx(0.5 + p.eta).epsilon(1e-12));
  // L is joined to P0 and P5 by admissible 1-shocks
  CHECK(shock_mismatch(p.L, p.P0, 1) <= 1e-10);
  CHECK(shock_mismatch(p.L, p.P5, 1) <= 1e-10);
  CHECK(rh_residual(g3, wave_between(g3, p.L, p.P0, 1, WaveKind::Shock)) <= 1e-10);
  CHECK(rh_residual(g3, wave_between(g3, p.L, p.P5, 1, WaveKind::Shock)) <= 1e-10);
  CHECK(p.L_bracket_lo < h_of(g3, p.L));
  CHECK(h_of(g3, p.L) < p.L_bracket_hi);
  // P4 on the 1-shock curve from P1, P2 on the 2-shock curve into P4, P5 into P3
  CHECK(shock_mismatch(p.P1, p.P4, 1) <= 1e-10);
  CHECK(shock_mismatch(p.P2, p.P4, 2) <= 1e-10);
  CHECK(shock_mismatch(p.P5, p.P3, 1) <= 1e-10);
}

TEST_CASE("inequality chain") {
  const PatternStates& p = fx().base;
  double h0 = h_of(g3, p.P0), h5 = h_of(g3, p.P5);
  CHECK(h0 - h5 > p.epsilon - p.eta + (0.5 - p.kappa));
  PatternStates tiny = build_lemma2(g3, 1e-10);
  double t0 = h_of(g3, tiny.P0), t5 = h_of(g3, tiny.P5);
  double mid = tiny.epsilon - tiny.eta + (0.5 - tiny.kappa);
  CHECK(t0 - t5 > mid);
  CHECK(mid > 0.0);
}

TEST_CASE("pattern interactions re-solve") {
  for (const PatternStates* p : {&fx().base, &fx().pert}) {
    auto checks = verify_pattern_interactions(g3, *p);
    REQUIRE(checks.size() == 7);
    for (const InteractionCheck& c : checks) {
      INFO(c.label);
      CHECK(c.residual <= 1e-8);
      CHECK(c.kinds_ok);
    }
  }
  PatternStates p01 = build_perturbed_pattern(g3, fx().base, 0.1);
  for (const InteractionCheck& c : verify_pattern_interactions(g3, p01)) {
    CHECK(c.residual <= 1e-8);
    CHECK(c.kinds_ok);
  }
}

TEST_CASE("the compression is amplified by the large shock") {
  const PatternStates& p = fx().base;
  double in = w2_of(g3, p.P1) - w2_of(g3, p.P5);
  double out = w2_of(g3, p.P4) - w2_of(g3, p.P3);
  CHECK(in < 0.0);
  CHECK(out < 0.0);
  CHECK(std::abs(out) > std::abs(in));
  // (vii): the 2-shock P2P4 and the 2-rarefaction P4P3 cancel into a 1-wave
  CHECK(std::abs(w2_of(g3, p.P2) - w2_of(g3, p.P3)) <= 1e-12);
}

TEST_CASE("perturbed pattern") {
  const PatternStates& b = fx().base;
  const PatternStates& p = fx().pert;
  CHECK(p.perturbed);
  CHECK(h_of(g3, p.P0p) > h_of(g3, p.P5));
  CHECK(std::abs(off(p.P0p)) <= 1e-12);
  CHECK(w2_of(g3, p.P6) - w2_of(g3, p.P1) < 0.0);
  CHECK(w1_of(g3, p.P6) == doctest::Approx(w1_of(g3, p.P1)).epsilon(1e-12));
  CHECK(shock_mismatch(p.Lp, p.P0p, 1) <= 1e-10);
  CHECK(shock_mismatch(p.Lp, p.P5, 1) <= 1e-10);
  // the Riemann problem (P1, P3) is still the 1-shock P1P4 and 2-rarefaction P4P3
  RiemannSolution s = solve_riemann(g3, p.P1, p.P3);
  CHECK(dist(s.middle, p.P4) <= 1e-8);
  CHECK(s.wave1.kind == WaveKind::Shock);
  CHECK(s.wave2.kind == WaveKind::Rarefaction);

  PatternStates z = build_perturbed_pattern(g3, b, 1e-9);
  CHECK(dist(z.P6, b.P1) <= 1e-12);
  CHECK(dist(z.P0p, b.P0) <= 1e-12);
  CHECK(dist(z.Lp, b.L) / std::abs(b.L.u) <= 1e-6);

  CHECK_THROWS_AS(build_perturbed_pattern(g3, b, 0.0), Error);
  CHECK_THROWS_AS(build_perturbed_pattern(g3, b, 1.0), Error);
}

TEST_CASE("cycle sequence without leftovers repeats the pattern") {
  const PatternStates& p = fx().pert;
  CycleSequence seq = build_cycle_sequence(g3, p, 0.0, 10);
  for (int k = 1; k <= 10; ++k) {
    const CycleStates& c = seq.at(k);
    CHECK(dist(c.P3, p.P3) <= 1e-10);
    CHECK(dist(c.P5, p.P5) <= 1e-10);
    CHECK(dist(c.P0, p.P0p) <= 1e-10);
    CHECK(dist(c.P1, p.P1) <= 1e-10);
    CHECK(dist(c.P2, p.P2) <= 1e-10);
    CHECK(dist(c.P4, p.P4) <= 1e-10);
    CHECK(dist(c.P6, p.P6) <= 1e-10);
  }
}

TEST_CASE("cycle sequence with leftovers") {
  const PatternStates& p = fx().pert;
  const double alpha = 0.01;
  const int K = 100;
  CycleSequence seq = build_cycle_sequence(g3, p, alpha, K);
  REQUIRE(seq.cycles.size() == static_cast<std::size_t>(K + 2));
  double total = 0.0, expected = 0.0;
  for (int k = 1; k <= K; ++k) {
    const CycleStates& c = seq.at(k);
    double shock = w2_of(g3, c.P3_hat) - w2_of(g3, c.P3_next);
    double rare = w2_of(g3, c.P3) - w2_of(g3, c.P3_hat);
    CHECK(shock == doctest::Approx(-alpha / k).epsilon(1e-10));
    CHECK(rare == doctest::Approx(alpha / k).epsilon(1e-10));
    CHECK(shock_mismatch(c.P3_next, c.P3_hat, 2) <= 1e-10);
    CHECK(w1_of(g3, c.P3) == doctest::Approx(w1_of(g3, c.P3_hat)).epsilon(1e-12));
    // P6 of cycle k and P1 of cycle k+1 are joined by a 2-compression
    const State& P1n = seq.at(k + 1).P1;
    CHECK(w2_of(g3, c.P6) < w2_of(g3, P1n));
    CHECK(w1_of(g3, c.P6) == doctest::Approx(w1_of(g3, P1n)).epsilon(1e-12));
    total += std::abs(shock) + std::abs(rare);
    expected += 2.0 * alpha / k;
  }
  CHECK(total == doctest::Approx(expected).epsilon(1e-10));

  std::vector<double> ks, steps;
  for (int k = 5; k < K; ++k) {
    ks.push_back(k);
    steps.push_back(dist(seq.at(k + 1).P3, seq.at(k).P3));
  }
  double slope = loglog_slope(ks, steps);
  CHECK(slope == doctest::Approx(-3.0).epsilon(0.05));
  double C = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) C = std::max(C, steps[i] * std::pow(ks[i], 3));
  for (std::size_t i = 0; i < ks.size(); ++i) CHECK(steps[i] <= C / std::pow(ks[i], 3) * (1.0 + 1e-12));

  auto gap = [&](int k) {
    const CycleStates& c = seq.at(k);
    return std::max({dist(c.P0, p.P0p), dist(c.P1, p.P1), dist(c.P2, p.P2), dist(c.P3, p.P3),
                     dist(c.P4, p.P4), dist(c.P5, p.P5), dist(c.P6, p.P6)});
  };
  for (int k = 10; k < K; ++k) CHECK(gap(k + 1) <= gap(k));
  CHECK(gap(K) < 0.1 * gap(5));

  CHECK_THROWS_AS(build_cycle_sequence(g3, p, 0.01, 0), Error);
}

TEST_CASE("periodic run") {
  PeriodicRunOptions opt;
  opt.periods = 5;
  PeriodicRun run = run_periodic_pattern(g3, fx().base, opt);
  const PeriodicityReport& rep = run.report;
  REQUIRE(rep.errors.size() == 5);
  for (std::size_t n = 0; n < rep.errors.size(); ++n) CHECK(rep.errors[n] <= 1e-7 * (n + 1));
  CHECK(rep.order_ok);
  for (int c : rep.events_per_period) CHECK(c == 7);
  CHECK(run.max_c1_residual <= 1e-8);
  CHECK(rep.shift_per_period == doctest::Approx(default_pattern_drift(g3, fx().base)));  // leftward drift per period

  PeriodicRun pr = run_periodic_pattern(g3, fx().pert, opt);
  CHECK(pr.report.order_ok);
  for (double e : pr.report.errors) CHECK(e <= 1e-6);
}

TEST_CASE("pattern dump") {
  std::string s = dump_pattern(g3, fx().pert);
  for (const char* name : {"P0", "P1", "P2", "P3", "P4", "P5", "P6", "L"}) CHECK(s.find(name) != std::string::npos);
}
