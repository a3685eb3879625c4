#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "psys/domain.hpp"
#include "psys/wave_curves.hpp"

using namespace psys;

namespace {

const GasParams g3;  // gamma = 3, A = 1/3: h = rho, c = rho^2

double dist_uh(const GasParams& g, const State& a, const State& b) {
  return std::max(std::abs(a.u - b.u), std::abs(h_of(g, a) - h_of(g, b)));
}

// Least-squares slope of log y against log x.
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

State rho_u(double rho, double u) { return State(1.0 / rho, u); }

}  // namespace

TEST_CASE("shock from the left") {
  Wave w = shock_from_left(g3, rho_u(1.0, 0.0), 1, 4.0);
  // oracle: u_- - u_+ = sqrt(-[p][v]) with p = v^-3 / 3
  double jump = std::sqrt((64.0 / 3.0 - 1.0 / 3.0) * 0.75);
  CHECK(w.right.u == doctest::Approx(-jump).epsilon(1e-12));
  CHECK(w.right.u == doctest::Approx(-std::sqrt(63.0 / 4.0)).epsilon(1e-12));
  CHECK(rho_of(w.right) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(rh_residual(g3, w) <= 1e-10);
  CHECK(w.strength < 0.0);
  CHECK(w.right.u < w.left.u);
  CHECK_THROWS_AS(shock_from_left(g3, rho_u(1.0, 0.0), 1, 1.0), Error);
  CHECK_THROWS_AS(shock_from_left(g3, rho_u(1.0, 0.0), 2, 2.0), Error);
}

TEST_CASE("shock parameter recovers theta and the jump") {
  Rng rng(3);
  for (double gamma : {1.4, 5.0 / 3.0, 3.0}) {
    GasParams g(gamma, 0.8);
    for (int i = 0; i < 200; ++i) {
      State l(std::exp(rng.uniform(-1, 1)), rng.uniform(-1, 1));
      int fam = rng.coin() ? 1 : 2;
      double th = fam == 1 ? rng.uniform(1.001, 20.0) : 1.0 / rng.uniform(1.001, 20.0);
      Wave w = shock_from_left(g, l, fam, th);
      ShockParam p = shock_param(g, l, w.right);
      CHECK(p.theta == doctest::Approx(th).epsilon(1e-12));
      CHECK(p.s == doctest::Approx(shock_jump(g, h_of(g, l), th)).epsilon(1e-12));
      CHECK(rh_residual(g, w) <= 1e-10);
      CHECK(w.right.u < w.left.u);  // Lax
      CHECK(w.strength == doctest::Approx(fam == 1 ? w1_of(g, w.right) - w1_of(g, l)
                                                   : w2_of(g, w.right) - w2_of(g, l)).epsilon(1e-10));
    }
  }
}

TEST_CASE("rarefaction and compression") {
  State l = rho_u(1.0, 0.0);
  Wave r = rarefaction_from_left(g3, l, 2, 1.0);
  CHECK(rho_of(r.right) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(r.right.u == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(w1_of(g3, r.right) == doctest::Approx(w1_of(g3, l)).epsilon(1e-15));
  Wave c = compression_from_left(g3, l, 1, -1.0);
  CHECK(rho_of(c.right) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(c.right.u == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(w2_of(g3, c.right) == doctest::Approx(w2_of(g3, l)).epsilon(1e-15));
  Wave z = rarefaction_from_left(g3, l, 1, 0.0);
  CHECK(dist_uh(g3, z.right, l) == 0.0);
  try {
    rarefaction_from_left(g3, l, 1, 2.0);
    FAIL("expected vacuum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::VacuumReached);
  }
  CHECK_THROWS_AS(rarefaction_from_left(g3, l, 1, -0.1), Error);
  CHECK_THROWS_AS(compression_from_left(g3, l, 1, 0.1), Error);
}

TEST_CASE("riemann solver basics") {
  State u = rho_u(1.3, 0.2);
  RiemannSolution s = solve_riemann(g3, u, u);
  CHECK(s.wave1.strength == 0.0);
  CHECK(s.wave2.strength == 0.0);
  CHECK(dist_uh(g3, s.middle, u) <= 1e-13);

  Wave sh = shock_from_left(g3, u, 1, 2.5);
  RiemannSolution one = solve_riemann(g3, u, sh.right);
  CHECK(one.wave1.kind == WaveKind::Shock);
  CHECK(one.wave1.strength == doctest::Approx(sh.strength).epsilon(1e-10));
  CHECK(one.wave2.strength == 0.0);
}

TEST_CASE("riemann round trip in the invariant domain") {
  Domain d{0.1, 4.0};
  Rng rng(2024);
  double worst = 0.0;
  int vacuum = 0;
  for (int i = 0; i < 10000; ++i) {
    State l = sample_state(g3, d, rng, 4.0), r = sample_state(g3, d, rng, 4.0);
    // two rarefactions would open a vacuum
    if (w2_of(g3, l) - w1_of(g3, r) <= 0.0) {
      ++vacuum;
      CHECK_THROWS_AS(solve_riemann(g3, l, r), Error);
      continue;
    }
    RiemannSolution s = solve_riemann(g3, l, r);
    // recompose from the left along the returned curves
    State m = s.wave1.is_zero() ? l
              : s.wave1.strength < 0.0
                  ? shock_from_left(g3, l, 1, l.v / s.middle.v).right
                  : rarefaction_from_left(g3, l, 1, s.wave1.strength).right;
    State e = s.wave2.is_zero() ? m
              : s.wave2.strength < 0.0
                  ? shock_from_left(g3, m, 2, m.v / r.v).right
                  : rarefaction_from_left(g3, m, 2, s.wave2.strength).right;
    worst = std::max(worst, dist_uh(g3, e, r));
    CHECK(s.wave1.kind == (s.wave1.strength < 0.0 ? WaveKind::Shock : WaveKind::Rarefaction));
  }
  CHECK(worst <= 1e-10);
  CHECK(vacuum < 1000);
}

TEST_CASE("amplification factor") {
  double prev = amplification_factor(g3, 1.1);
  for (int k = 2; k <= 6; ++k) {
    double a = amplification_factor(g3, 1.0 + std::pow(10.0, -k));
    CHECK(a >= 1.0);
    CHECK(a <= prev);
    prev = a;
  }
  // a - 1 vanishes like (theta - 1)^3, below rounding once theta - 1 < 1e-5
  double r = (amplification_factor(g3, 1.001) - 1.0) / (amplification_factor(g3, 1.01) - 1.0);
  CHECK(r == doctest::Approx(1e-3).epsilon(0.05));
  CHECK(prev - 1.0 < 1e-5);
  CHECK(std::abs(amplification_factor(g3, 1.0 + 1e-9) - 1.0) < 1e-8);
  CHECK_THROWS_AS(amplification_factor(g3, 1.0), Error);
  // the series branch joins the closed form
  CHECK(amplification_factor(g3, 1.0 + 0.99e-6) ==
        doctest::Approx(amplification_factor(g3, 1.0 + 1.01e-6)).epsilon(1e-9));
  for (double gamma : {1.4, 5.0 / 3.0, 2.0, 3.0}) {
    GasParams g(gamma, 1.0);
    for (double th = 1.01; th <= 1000.0; th *= 1.1) CHECK(amplification_factor(g, th) > 1.0 + 1e-9);
  }
}

TEST_CASE("finite amplification against exact Riemann solves") {
  State l = rho_u(1.0, 0.0);
  Wave sh = shock_from_left(g3, l, 1, 2.0);
  double hl = h_of(g3, l), hr = h_of(g3, sh.right);
  // oracle: move the left state by an impinging 2-wave and re-solve
  auto exact = [&](double eps) {
    State pe = state_from_uh(g3, l.u - eps, hl - eps);
    return hr - h_of(g3, solve_riemann(g3, pe, sh.right).middle);
  };
  CHECK(amplify_finite(g3, sh, 0.0) == 0.0);
  CHECK(exact(1e-4) / 1e-4 == doctest::Approx(amplification_factor(g3, 2.0)).epsilon(1e-3));
  double eta = amplify_finite(g3, sh, 0.1);
  CHECK(std::abs(eta - exact(0.1)) <= 1e-6 * std::abs(eta));
  CHECK(std::abs(eta) > 0.1);
  double tiny = amplify_finite(g3, sh, 1e-7);
  CHECK(tiny / 1e-7 == doctest::Approx(amplification_factor(g3, 2.0)).epsilon(1e-6));
  for (double gamma : {1.4, 2.0}) {
    GasParams g(gamma, 1.0);
    Wave s2 = shock_from_left(g, l, 1, 3.0);
    double h0 = h_of(g, l), h1 = h_of(g, s2.right);
    for (double eps : {0.05, -0.05}) {
      // a compressive impinging wave leaves along the compression curve
      RiemannOptions opt;
      opt.branch2 = NegativeBranch::Compression;
      State pe = state_from_uh(g, l.u - eps, h0 - eps);
      double ex = h1 - h_of(g, solve_riemann(g, pe, s2.right, opt).middle);
      CHECK(amplify_finite(g, s2, eps) == doctest::Approx(ex).epsilon(1e-6));
    }
  }
}

TEST_CASE("crossing moves the far side further") {
  Rng rng(5);
  Domain d{0.2, 3.0};
  for (int i = 0; i < 200; ++i) {
    State l = sample_state(g3, d, rng, 1.2);
    Wave sh = shock_from_left(g3, l, 1, rng.uniform(1.05, 4.0));
    double eps = rng.uniform(1e-3, 0.1) * (rng.coin() ? 1.0 : -1.0);
    State pe = state_from_uh(g3, l.u - eps, h_of(g3, l) - eps);
    RiemannOptions opt;
    opt.branch2 = NegativeBranch::Compression;
    State m = solve_riemann(g3, pe, sh.right, opt).middle;
    CHECK(std::abs(h_of(g3, sh.right) - h_of(g3, m)) > std::abs(h_of(g3, l) - h_of(g3, pe)));
  }
}

TEST_CASE("shock curve slope") {
  State l = rho_u(1.0, 0.0);
  auto fd = [&](const GasParams& g, double th) {
    double d = 1e-6 * (th - 1.0);
    Wave a = shock_from_left(g, l, 1, th - d), b = shock_from_left(g, l, 1, th + d);
    return (h_of(g, b.right) - h_of(g, a.right)) / (b.right.u - a.right.u);
  };
  CHECK(shock_curve_slope(g3, l, 1.0 + 1e-4) == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(shock_curve_slope(g3, l, 1.0 + 1e-4) == doctest::Approx(fd(g3, 1.0 + 1e-4)).epsilon(1e-5));
  for (double gamma : {1.4, 2.0, 3.0}) {
    GasParams g(gamma, 1.0);
    for (double th = 1.001; th <= 50.0; th *= 1.2) {
      double s = shock_curve_slope(g, l, th);
      CHECK(s >= -1.0 - 1e-12);
      CHECK(s < 0.0);
      CHECK(s == doctest::Approx(fd(g, th)).epsilon(1e-5));
    }
  }
  double strong = shock_curve_slope(g3, l, 1e6);
  CHECK(std::isfinite(strong));
  CHECK(strong < 0.0);
  CHECK(strong == doctest::Approx(fd(g3, 1e6)).epsilon(1e-4));
}

TEST_CASE("shock and integral curves have second-order contact") {
  State l = rho_u(1.0, 0.0);
  std::vector<double> xs, ys;
  for (double sigma = 1e-4; sigma <= 1e-1; sigma *= 2.0) {
    // shock of w1-strength -sigma, found by bisection on theta
    double lo = 1.0, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (shock_from_left(g3, l, 1, mid).strength > -sigma ? lo : hi) = mid;
    }
    Wave sh = shock_from_left(g3, l, 1, 0.5 * (lo + hi));
    Wave cp = compression_from_left(g3, l, 1, sh.strength);
    xs.push_back(sigma);
    ys.push_back(dist_uh(g3, sh.right, cp.right));
  }
  CHECK(loglog_slope(xs, ys) >= 2.9);
}

TEST_CASE("interaction estimate") {
  State l = rho_u(1.2, 0.1);
  // sigma'' = 0 gives no interaction
  Wave a = rarefaction_from_left(g3, l, 2, 0.05);
  Wave z = rarefaction_from_left(g3, a.right, 1, 0.0);
  CHECK(verify_interaction_estimate(g3, a, z).defect == 0.0);

  // opposite families: defect vanishes at a cubic rate
  std::vector<double> xs, ys;
  for (double s = 1e-3; s <= 0.1; s *= 2.0) {
    Wave w2 = shock_from_left(g3, l, 2, std::pow(1.0 + s, -1.0));
    Wave w1 = rarefaction_from_left(g3, w2.right, 1, s);
    xs.push_back(s);
    ys.push_back(verify_interaction_estimate(g3, w2, w1).defect);
  }
  CHECK(loglog_slope(xs, ys) >= 2.8);

  // same family: the outgoing 1-wave carries the sum
  Wave s1 = shock_from_left(g3, l, 1, 1.05);
  Wave s2 = shock_from_left(g3, s1.right, 1, 1.03);
  InteractionEstimate e = verify_interaction_estimate(g3, s1, s2);
  CHECK(e.sigma1 == doctest::Approx(s1.strength + s2.strength).epsilon(1e-3));
  CHECK(std::abs(e.sigma2) < 1e-3 * std::abs(e.sigma1));

  Wave r1 = rarefaction_from_left(g3, l, 1, 0.05);
  Wave r2 = rarefaction_from_left(g3, r1.right, 2, 0.05);
  CHECK_THROWS_AS(verify_interaction_estimate(g3, r1, r2), Error);
}

TEST_CASE("interaction ratio is bounded over random approaching pairs") {
  Rng rng(99);
  Domain d{0.3, 4.0};
  double worst = 0.0;
  int n = 0;
  while (n < 10000) {
    State l = sample_state(g3, d, rng, 2.0);
    int fa = rng.coin() ? 1 : 2, fb = rng.coin() ? 1 : 2;
    if (fa == 1 && fb == 2) continue;
    auto make = [&](const State& s, int fam) {
      double sig = rng.uniform(-0.2, 0.2);
      if (sig < 0.0) {
        // shock whose strength is about sig
        double th = std::pow(1.0 + std::abs(sig) / (2.0 * h_of(g3, s)), 2.0);
        return shock_from_left(g3, s, fam, fam == 1 ? th : 1.0 / th);
      }
      return rarefaction_from_left(g3, s, fam, sig);
    };
    Wave a = make(l, fa);
    Wave b = make(a.right, fb);
    if (!approaching(a, b) || a.is_zero() || b.is_zero()) continue;
    if (std::abs(a.strength) > 0.2 || std::abs(b.strength) > 0.2) continue;
    worst = std::max(worst, verify_interaction_estimate(g3, a, b).cubic_bound_ratio);
    ++n;
  }
  CHECK(std::isfinite(worst));
  CHECK(worst < 50.0);
  MESSAGE("largest cubic-bound ratio: " << worst);
}

TEST_CASE("outgoing 2-wave bounds at a large 1-shock") {
  State l = rho_u(1.0, 0.0);
  Wave sh = shock_from_left(g3, l, 1, 2.0);
  Wave none = rarefaction_from_left(g3, sh.right, 1, 0.0);
  CHECK(verify_lemma0(g3, sh, none, Side::Right, 1.0).outgoing2_strength == 0.0);

  Wave rr = rarefaction_from_left(g3, sh.right, 1, 1e-2);
  Lemma0Result r = verify_lemma0(g3, sh, rr, Side::Right, 1.0);
  CHECK(r.outgoing2_strength < 0.0);
  CHECK(std::abs(r.outgoing2_strength) < 1e-2);

  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    State s = rho_u(rng.uniform(0.5, 2.0), rng.uniform(-0.5, 0.5));
    Wave big = shock_from_left(g3, s, 1, rng.uniform(1.2, 6.0));
    double th = rng.uniform(1.0001, 1.2);
    Wave inc = shock_from_left(g3, big.right, 1, th);
    Lemma0Result q = verify_lemma0(g3, big, inc, Side::Right, 1.0);
    CHECK(q.outgoing2_strength >= 0.0);
    CHECK(q.bound_ok);
  }

  double cg = lemma0_left_constant(g3, 0.1, 4.0, 2000, 1);
  CHECK(std::isfinite(cg));
  CHECK(cg > 1.0);
  State pe = state_from_uh(g3, l.u - 0.01, h_of(g3, l) - 0.01);
  Wave imp = wave_between(g3, pe, l, 2, WaveKind::Rarefaction);
  CHECK(verify_lemma0(g3, sh, imp, Side::Left, cg).bound_ok);
}
