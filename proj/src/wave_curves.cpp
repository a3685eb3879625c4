#include "psys/wave_curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psys/domain.hpp"
#include "psys/root_find.hpp"

namespace psys {

const char* kind_name(WaveKind k) {
  switch (k) {
    case WaveKind::Shock: return "shock";
    case WaveKind::Rarefaction: return "rarefaction";
    case WaveKind::Compression: return "compression";
  }
  return "?";
}

namespace {

double strength_between(const GasParams& g, const State& l, const State& r, int family) {
  PhaseCoords pl = to_phase(g, l), pr = to_phase(g, r);
  return family == 1 ? pr.w1 - pl.w1 : pr.w2 - pl.w2;
}

double mean_char_speed(const GasParams& g, const State& l, const State& r, int family) {
  return 0.5 * (characteristic_speed(g, l, family) + characteristic_speed(g, r, family));
}

void check_family(int family) {
  if (family != 1 && family != 2) throw Error(ErrorCode::InvalidParameter, "family must be 1 or 2");
}

// theta from the two heights.
double theta_of(const GasParams& g, double h_left, double h_right) {
  return std::pow(h_right / h_left, 2.0 / (g.gamma() - 1.0));
}

}  // namespace

double shock_jump(const GasParams& g, double h_left, double theta) {
  return h_left / g.B() * std::sqrt(psi(g, theta));
}

ShockParam shock_param(const GasParams&, const State& left, const State& right) {
  ShockParam p;
  p.theta = left.v / right.v;
  p.s = left.u - right.u;
  return p;
}

double rh_speed(const GasParams& g, const State& left, const State& right, int family) {
  double theta = left.v / right.v;
  double d = theta - 1.0;
  if (std::abs(d) < 1e-13) return mean_char_speed(g, left, right, family);
  // (p+ - p-)/(v- - v+) = A v-^(-gamma-1) theta (theta^gamma - 1)/(theta - 1)
  double gm = g.gamma();
  double ratio = std::expm1(gm * std::log1p(d)) / d;
  double lam2 = g.A() * std::pow(left.v, -gm - 1.0) * theta * ratio;
  double lam = std::sqrt(lam2);
  return family == 1 ? -lam : lam;
}

Wave wave_between(const GasParams& g, const State& left, const State& right, int family,
                  WaveKind kind) {
  check_family(family);
  Wave w;
  w.family = family;
  w.kind = kind;
  w.left = left;
  w.right = right;
  w.strength = strength_between(g, left, right, family);
  w.speed = kind == WaveKind::Shock ? rh_speed(g, left, right, family)
                                    : mean_char_speed(g, left, right, family);
  return w;
}

Wave shock_from_left(const GasParams& g, const State& left, int family, double theta) {
  check_family(family);
  if (!(theta > 0.0) || !std::isfinite(theta) || (family == 1 && !(theta > 1.0)) ||
      (family == 2 && !(theta < 1.0)))
    throw Error(ErrorCode::InadmissibleRatio, "density ratio on the wrong side of 1 for the family");
  double h = h_of(g, left);
  double s = shock_jump(g, h, theta);
  State right(left.v / theta, left.u - s);
  return wave_between(g, left, right, family, WaveKind::Shock);
}

Wave integral_curve_from_left(const GasParams& g, const State& left, int family, double strength) {
  check_family(family);
  double h = h_of(g, left);
  double hr = family == 1 ? h - 0.5 * strength : h + 0.5 * strength;
  if (!(hr > 0.0)) throw Error(ErrorCode::VacuumReached, "integral curve reaches h <= 0");
  State right = state_from_uh(g, left.u + 0.5 * strength, hr);
  WaveKind kind = strength >= 0.0 ? WaveKind::Rarefaction : WaveKind::Compression;
  Wave w = wave_between(g, left, right, family, kind);
  return w;
}

Wave rarefaction_from_left(const GasParams& g, const State& left, int family, double strength) {
  if (!(strength >= 0.0)) throw Error(ErrorCode::InvalidParameter, "rarefaction strength must be positive");
  return integral_curve_from_left(g, left, family, strength);
}

Wave compression_from_left(const GasParams& g, const State& left, int family, double strength) {
  if (!(strength <= 0.0)) throw Error(ErrorCode::InvalidParameter, "compression strength must be negative");
  return integral_curve_from_left(g, left, family, strength);
}

double u_forward1(const GasParams& g, const State& left, double h, NegativeBranch br) {
  double hl = h_of(g, left);
  if (h <= hl || br == NegativeBranch::Compression) return left.u + hl - h;
  return left.u - shock_jump(g, hl, theta_of(g, hl, h));
}

double u_backward2(const GasParams& g, const State& right, double h, NegativeBranch br) {
  double hr = h_of(g, right);
  if (h <= hr || br == NegativeBranch::Compression) return right.u - hr + h;
  return right.u + shock_jump(g, h, theta_of(g, h, hr));
}

double u_forward2(const GasParams& g, const State& left, double h, NegativeBranch br) {
  double hl = h_of(g, left);
  if (h >= hl || br == NegativeBranch::Compression) return left.u - hl + h;
  return left.u - shock_jump(g, hl, theta_of(g, hl, h));
}

double u_backward1(const GasParams& g, const State& right, double h, NegativeBranch br) {
  double hr = h_of(g, right);
  if (h >= hr || br == NegativeBranch::Compression) return right.u + hr - h;
  return right.u + shock_jump(g, h, theta_of(g, h, hr));
}

Wave shock_with_strength(const GasParams& g, const State& left, int family, double strength) {
  check_family(family);
  if (!(strength < 0.0)) throw Error(ErrorCode::InvalidParameter, "shock strength must be negative");
  double hl = h_of(g, left);
  PhaseCoords pl = to_phase(g, left);
  double h;
  if (family == 1) {
    // w1 jump is decreasing in h on (hl, inf)
    auto f = [&](double hh) {
      return (u_forward1(g, left, hh, NegativeBranch::Shock) - hh) - pl.w1 - strength;
    };
    h = find_root_in_h(f, hl, 2.0 * hl, 200, "shock_with_strength");
  } else {
    // w2 jump increases with h on (0, hl); reparametrize by hl - h
    auto f = [&](double hh) {
      return strength - ((u_forward2(g, left, hh, NegativeBranch::Shock) + hh) - pl.w2);
    };
    double lo = hl, flo = f(lo);  // = strength < 0
    double hi = 0.5 * hl, fhi = f(hi);
    int guard = 0;
    while (fhi < 0.0 && guard++ < 1100) {
      lo = hi;
      flo = fhi;
      hi *= 0.5;
      fhi = f(hi);
    }
    h = find_root(f, lo, hi, flo, fhi, 200, "shock_with_strength");
  }
  double u = family == 1 ? u_forward1(g, left, h, NegativeBranch::Shock)
                         : u_forward2(g, left, h, NegativeBranch::Shock);
  return wave_between(g, left, state_from_uh(g, u, h), family, WaveKind::Shock);
}

double rh_residual(const GasParams& g, const Wave& w) {
  double dv = w.right.v - w.left.v;
  double du = w.right.u - w.left.u;
  double dp = g.pressure(w.right.v) - g.pressure(w.left.v);
  double scale_v = std::max({std::abs(w.speed * dv), std::abs(du), 1e-300});
  double scale_u = std::max({std::abs(w.speed * du), std::abs(dp), 1e-300});
  return std::max(std::abs(w.speed * dv + du) / scale_v, std::abs(w.speed * du - dp) / scale_u);
}

double curve_residual(const GasParams& g, const Wave& w) {
  double hl = h_of(g, w.left), hr = h_of(g, w.right);
  if (w.kind == WaveKind::Shock) {
    if (w.strength == 0.0) return state_distance(g, w.left, w.right);
    double target = w.family == 1 ? u_forward1(g, w.left, hr, NegativeBranch::Shock)
                                  : u_forward2(g, w.left, hr, NegativeBranch::Shock);
    double lax = w.family == 1 ? (hr > hl ? 0.0 : hl - hr) : (hr < hl ? 0.0 : hr - hl);
    return std::abs(target - w.right.u) + lax;
  }
  PhaseCoords pl = to_phase(g, w.left), pr = to_phase(g, w.right);
  double other = w.family == 1 ? std::abs(pr.w2 - pl.w2) : std::abs(pr.w1 - pl.w1);
  bool sign_ok = w.kind == WaveKind::Rarefaction ? w.strength >= 0.0 : w.strength <= 0.0;
  return other + (sign_ok ? 0.0 : std::abs(w.strength));
}

namespace {

Wave zero_wave(const GasParams& g, const State& s, int family) {
  Wave w;
  w.family = family;
  w.kind = WaveKind::Rarefaction;
  w.left = s;
  w.right = s;
  w.strength = 0.0;
  w.speed = characteristic_speed(g, s, family);
  return w;
}

WaveKind kind_for(double strength, NegativeBranch br) {
  if (strength >= 0.0) return WaveKind::Rarefaction;
  return br == NegativeBranch::Shock ? WaveKind::Shock : WaveKind::Compression;
}

}  // namespace

RiemannSolution solve_riemann(const GasParams& g, const State& left, const State& right,
                              const RiemannOptions& opt) {
  PhaseCoords pl = to_phase(g, left), pr = to_phase(g, right);
  if (!(pl.w2 - pr.w1 > 0.0))
    throw Error(ErrorCode::NoMiddleState, "wave curves meet only at vacuum");
  auto F = [&](double h) {
    return u_forward1(g, left, h, opt.branch1) - u_backward2(g, right, h, opt.branch2);
  };
  double hl = pl.w2 - pl.w1, hr = pr.w2 - pr.w1;  // 2h, used as scale
  double lo = 0.25 * std::min(hl, hr);
  double hi = std::max(hl, hr);
  double m = find_root_in_h(F, lo, hi, opt.max_iter, "solve_riemann");
  double res = std::abs(F(m));
  double scale = std::max({1.0, std::abs(left.u), std::abs(right.u), hl, hr});
  if (!(res <= std::max(opt.tolerance, 64.0 * std::numeric_limits<double>::epsilon() * scale)))
    throw Error(ErrorCode::ConvergenceFailure, "solve_riemann residual too large");

  RiemannSolution sol;
  sol.residual = res;
  State mid = state_from_uh(g, u_forward1(g, left, m, opt.branch1), m);
  double s1 = strength_between(g, left, mid, 1);
  double s2 = strength_between(g, mid, right, 2);
  if (std::abs(s1) < kZeroWave) {
    sol.discarded = std::abs(s1);
    mid = left;
  } else if (std::abs(s2) < kZeroWave) {
    sol.discarded = std::abs(s2);
    mid = right;
  }
  sol.middle = mid;
  s1 = strength_between(g, left, mid, 1);
  s2 = strength_between(g, mid, right, 2);
  sol.wave1 = std::abs(s1) < kZeroWave ? zero_wave(g, left, 1)
                                        : wave_between(g, left, mid, 1, kind_for(s1, opt.branch1));
  sol.wave2 = std::abs(s2) < kZeroWave ? zero_wave(g, right, 2)
                                        : wave_between(g, mid, right, 2, kind_for(s2, opt.branch2));
  if (sol.wave1.is_zero()) sol.wave1.left = sol.wave1.right = mid;
  if (sol.wave2.is_zero()) sol.wave2.left = sol.wave2.right = mid;
  return sol;
}

namespace {

struct PsiTerms {
  double sqrt_psi_over_d;  // sqrt(psi)/d
  double dpsi_over_d;      // psi'/d
  double psi_over_d;       // psi/d
};

// psi and psi' divided by d = theta - 1, from their expansions about theta = 1.
PsiTerms psi_series(const GasParams& g, double d) {
  double ag = g.A() * g.gamma();
  double c = 0.5 * (g.gamma() - 3.0);
  PsiTerms t;
  t.psi_over_d = ag * d * (1.0 + c * d);
  t.sqrt_psi_over_d = std::sqrt(ag) * std::sqrt(1.0 + c * d);
  t.dpsi_over_d = ag * (2.0 + 3.0 * c * d);
  return t;
}

constexpr double kSeriesCutoff = 1e-6;

double amplification_series(const GasParams& g, double theta) {
  double d = theta - 1.0;
  double gm = g.gamma(), B = g.B();
  PsiTerms t = psi_series(g, d);
  double k = 2.0 / (gm - 1.0);
  double num = 2.0 * B * t.sqrt_psi_over_d - 2.0 * t.psi_over_d + k * theta * t.dpsi_over_d;
  double den = 2.0 * B * t.sqrt_psi_over_d + k * std::pow(theta, 0.5 * (3.0 - gm)) * t.dpsi_over_d;
  return num / den;
}

}  // namespace

double amplification_factor(const GasParams& g, double theta) {
  if (!(theta > 1.0)) throw Error(ErrorCode::DegenerateShock, "need theta > 1");
  if (theta - 1.0 < kSeriesCutoff) return amplification_series(g, theta);
  double gm = g.gamma(), B = g.B();
  double p = psi(g, theta), dp = psi_prime(g, theta), sp = std::sqrt(p);
  double k = 2.0 / (gm - 1.0);
  double num = 2.0 * B * sp - 2.0 * p + k * theta * dp;
  double den = 2.0 * B * sp + k * std::pow(theta, 0.5 * (3.0 - gm)) * dp;
  return num / den;
}

double amplify_finite(const GasParams& g, const Wave& left_shock, double eps_bar) {
  if (left_shock.family != 1 || left_shock.kind != WaveKind::Shock || !(left_shock.strength < 0.0))
    throw Error(ErrorCode::InvalidParameter, "amplify_finite needs a 1-shock");
  if (eps_bar == 0.0) return 0.0;
  double hm = h_of(g, left_shock.left), hp = h_of(g, left_shock.right);
  double k = 2.0 / (g.gamma() - 1.0);
  auto rhs = [&](double eps, double eta) {
    double a = hm - eps, b = hp - eta;
    if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::VacuumReached, "crossing reaches h <= 0");
    double theta = std::pow(b / a, k);
    if (!(theta > 1.0)) throw Error(ErrorCode::IntegrationFailure, "shock degenerates during crossing");
    return amplification_factor(g, theta);
  };
  const int n = 1024;
  double step = eps_bar / n;
  double eps = 0.0, eta = 0.0;
  for (int i = 0; i < n; ++i) {
    double k1 = rhs(eps, eta);
    double k2 = rhs(eps + 0.5 * step, eta + 0.5 * step * k1);
    double k3 = rhs(eps + 0.5 * step, eta + 0.5 * step * k2);
    double k4 = rhs(eps + step, eta + step * k3);
    eta += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    eps += step;
  }
  if (!std::isfinite(eta)) throw Error(ErrorCode::IntegrationFailure, "non-finite result");
  return eta;
}

double shock_curve_slope(const GasParams& g, const State& /*left*/, double theta) {
  if (!(theta > 1.0)) throw Error(ErrorCode::DegenerateShock, "need theta > 1");
  double gm = g.gamma();
  double pre = -(gm - 1.0) * g.B() * std::pow(theta, 0.5 * (gm - 3.0));
  double d = theta - 1.0;
  if (d < kSeriesCutoff) {
    PsiTerms t = psi_series(g, d);
    return pre * t.sqrt_psi_over_d / t.dpsi_over_d;
  }
  return pre * std::sqrt(psi(g, theta)) / psi_prime(g, theta);
}

bool approaching(const Wave& a, const Wave& b) {
  if (a.is_zero() || b.is_zero()) return true;
  if (a.family == 2 && b.family == 1) return true;
  if (a.family == b.family) return a.strength < 0.0 || b.strength < 0.0;
  return false;
}

InteractionEstimate verify_interaction_estimate(const GasParams& g, const Wave& a, const Wave& b) {
  InteractionEstimate est;
  if (a.is_zero() || b.is_zero()) {
    const Wave& w = a.is_zero() ? b : a;
    (w.family == 1 ? est.sigma1 : est.sigma2) = w.strength;
    return est;
  }
  if (!approaching(a, b)) throw Error(ErrorCode::NotApproaching, "waves do not interact");
  RiemannSolution sol = solve_riemann(g, a.left, b.right);
  est.sigma1 = sol.wave1.strength;
  est.sigma2 = sol.wave2.strength;
  double e1 = 0.0, e2 = 0.0;
  if (a.family != b.family) {
    e1 = b.strength;
    e2 = a.strength;
  } else if (a.family == 1) {
    e1 = a.strength + b.strength;
  } else {
    e2 = a.strength + b.strength;
  }
  est.defect = std::abs(est.sigma1 - e1) + std::abs(est.sigma2 - e2);
  double denom = std::abs(a.strength * b.strength) * (std::abs(a.strength) + std::abs(b.strength));
  est.cubic_bound_ratio = denom > 0.0 ? est.defect / denom : 0.0;
  return est;
}

Lemma0Result verify_lemma0(const GasParams& g, const Wave& shock, const Wave& imp, Side side,
                           double c_gamma) {
  Lemma0Result r;
  if (imp.is_zero()) return r;
  RiemannSolution sol = side == Side::Right ? solve_riemann(g, shock.left, imp.right)
                                            : solve_riemann(g, imp.left, shock.right);
  r.outgoing2_strength = sol.wave2.strength;
  r.ratio = std::abs(r.outgoing2_strength) / std::abs(imp.strength);
  double bound = side == Side::Right ? 1.0 : c_gamma;
  r.bound_ok = r.ratio <= bound;
  return r;
}

double lemma0_left_constant(const GasParams& g, double a, double b, int samples, std::uint64_t seed) {
  Domain dom{a, b};
  Rng rng(seed);
  double best = 0.0;
  int done = 0, tries = 0;
  while (done < samples && tries < 50 * samples) {
    ++tries;
    State left = sample_state(g, dom, rng, 0.5 * b);
    double hl = h_of(g, left);
    double hr = rng.uniform(hl * 1.01, b);
    double theta = std::pow(hr / hl, 2.0 / (g.gamma() - 1.0));
    Wave sh = shock_from_left(g, left, 1, theta);
    if (!dom.contains(g, sh.right)) continue;
    double eps = rng.uniform(1e-4, 1e-2) * (rng.coin() ? 1.0 : -1.0);
    double hp = hl - eps;
    if (hp <= a) continue;
    State pe = state_from_uh(g, left.u - eps, hp);
    if (!dom.contains(g, pe)) continue;
    Wave imp = wave_between(g, pe, left, 2, eps > 0 ? WaveKind::Rarefaction : WaveKind::Compression);
    RiemannSolution sol = solve_riemann(g, pe, sh.right);
    best = std::max(best, std::abs(sol.wave2.strength) / std::abs(imp.strength));
    ++done;
  }
  return best;
}

}  // namespace psys
