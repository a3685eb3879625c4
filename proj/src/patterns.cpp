#include "psys/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "psys/root_find.hpp"
#include "psys/schedule.hpp"

namespace psys {

namespace {

constexpr NegativeBranch kShock = NegativeBranch::Shock;

// Root of f in (0, hi) when f(hi) and f(0+) differ in sign; lo found by halving.
template <class F>
double root_below(F&& f, double hi, const char* what) {
  double fhi = f(hi);
  double lo = 0.5 * hi, flo = f(lo);
  int guard = 0;
  while ((flo > 0.0) == (fhi > 0.0) && guard++ < 1100) {
    hi = lo;
    fhi = flo;
    lo *= 0.5;
    flo = f(lo);
  }
  return find_root(f, lo, hi, flo, fhi, 200, what);
}

// Root of f near `guess`, bracket widened geometrically (factor 1 +/- w).
template <class F>
double root_near(F&& f, double guess, double w, double h_min, const char* what) {
  for (int i = 0; i < 40; ++i) {
    double lo = std::max(guess * (1.0 - w), h_min), hi = guess * (1.0 + w);
    double flo = f(lo), fhi = f(hi);
    if ((flo > 0.0) != (fhi > 0.0) || flo == 0.0 || fhi == 0.0) return find_root(f, lo, hi, flo, fhi, 200, what);
    w *= 1.5;
    if (w > 0.99) break;
  }
  throw Error(ErrorCode::ConvergenceFailure, std::string(what) + ": no sign change near the reference");
}

State on_line_w1(const GasParams& g, double w1, double h) { return state_from_uh(g, w1 + h, h); }

// State on {u - h = w1target} reached by the backward 1-shock curve into `right`.
State backward1_meets_w1(const GasParams& g, const State& right, double w1target) {
  auto f = [&](double h) { return (u_backward1(g, right, h, kShock) - h) - w1target; };
  double h = root_below(f, h_of(g, right), "backward 1-shock / w1 line");
  return on_line_w1(g, w1target, h);
}

// Left state L on the backward 1-shock curve into P5 whose forward 1-shock
// curve passes through `target` (which has h above h(P5)).
State find_L(const GasParams& g, const State& P5, const State& target, double* blo, double* bhi) {
  double h5 = h_of(g, P5), ht = h_of(g, target);
  auto L_of = [&](double hl) { return state_from_uh(g, u_backward1(g, P5, hl, kShock), hl); };
  auto G = [&](double hl) { return u_forward1(g, L_of(hl), ht, kShock) - target.u; };
  double hi = h5, ghi = G(hi * (1.0 - 1e-12));
  double lo = 0.5 * h5, glo = G(lo);
  int guard = 0;
  while ((glo > 0.0) == (ghi > 0.0) && guard++ < 200) {
    hi = lo;
    ghi = glo;
    lo *= 0.5;
    glo = G(lo);
  }
  if ((glo > 0.0) == (ghi > 0.0)) throw Error(ErrorCode::ConvergenceFailure, "L search found no sign change");
  *blo = lo;
  *bhi = hi;
  double hl = find_root(G, lo, hi, glo, ghi, 200, "L search");
  return L_of(hl);
}

}  // namespace

double lemma2_kappa(const GasParams& g) {
  State half = state_from_uh(g, 0.5, 0.5);
  return h_of(g, backward1_meets_w1(g, half, 1.0));
}

PatternStates build_lemma2(const GasParams& g, double eps) {
  if (!(eps > 0.0) || eps >= 0.5) throw Error(ErrorCode::InvalidParameter, "epsilon must lie in (0, 1/2)");
  PatternStates ps;
  ps.epsilon = eps;
  ps.kappa = lemma2_kappa(g);
  ps.P0 = state_from_uh(g, 0.5 + eps, 0.5 + eps);
  ps.P1 = state_from_uh(g, 1.0 + eps, eps);
  {
    auto f = [&](double h) { return u_forward1(g, ps.P1, h, kShock) - h; };
    double h4 = find_root_in_h(f, eps, 2.0 * eps, 200, "P4");
    ps.P4 = state_from_uh(g, h4, h4);
  }
  {
    double h4 = h_of(g, ps.P4);
    auto f = [&](double h) { return 1.0 - (u_backward2(g, ps.P4, h, kShock) - h); };
    double h2 = find_root_in_h(f, h4, 2.0 * h4, 200, "P2");
    ps.P2 = on_line_w1(g, 1.0, h2);
  }
  ps.eta = h_of(g, ps.P2);
  double half_w2 = 0.5 * w2_of(g, ps.P2);
  ps.P3 = state_from_uh(g, half_w2, half_w2);
  ps.P5 = backward1_meets_w1(g, ps.P3, 1.0);
  if (!(h_of(g, ps.P5) < h_of(g, ps.P0)))
    throw Error(ErrorCode::EpsilonTooLarge, "h(P5) >= h(P0); retry with a smaller epsilon");
  ps.L = find_L(g, ps.P5, ps.P0, &ps.L_bracket_lo, &ps.L_bracket_hi);
  return ps;
}

double find_lemma2_epsilon(const GasParams& g, double margin, double start) {
  double eps = start;
  for (int i = 0; i < 60; ++i, eps *= 0.5) {
    PatternStates ps;
    try {
      ps.P1 = state_from_uh(g, 1.0 + eps, eps);
      auto f = [&](double h) { return u_forward1(g, ps.P1, h, kShock) - h; };
      double h4 = find_root_in_h(f, eps, 2.0 * eps, 200, "P4");
      State P4 = state_from_uh(g, h4, h4);
      auto f2 = [&](double h) { return 1.0 - (u_backward2(g, P4, h, kShock) - h); };
      double h2 = find_root_in_h(f2, h4, 2.0 * h4, 200, "P2");
      double half_w2 = 0.5 * (1.0 + 2.0 * h2);
      State P3 = state_from_uh(g, half_w2, half_w2);
      double h5 = h_of(g, backward1_meets_w1(g, P3, 1.0));
      if (0.5 + eps - h5 >= margin) return eps;
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::EpsilonTooLarge, "no epsilon in the halving search meets the margin");
}

PatternStates build_perturbed_pattern(const GasParams& g, const PatternStates& ps, double split) {
  if (!(split > 0.0) || !(split < 1.0)) throw Error(ErrorCode::SplitInfeasible, "split must lie in (0, 1)");
  PatternStates out = ps;
  out.perturbed = true;
  out.split = split;
  double h1 = h_of(g, ps.P1);
  double h0p = h_of(g, ps.P0) - split * h1;
  if (!(h0p > h_of(g, ps.P5))) throw Error(ErrorCode::SplitInfeasible, "h(P0') <= h(P5)");
  out.P0p = state_from_uh(g, h0p, h0p);
  PhaseCoords p6{w1_of(g, ps.P1), w2_of(g, out.P0p)};
  if (!(p6.w2 > p6.w1)) throw Error(ErrorCode::SplitInfeasible, "P6 would have h <= 0");
  out.P6 = from_phase(g, p6);
  out.Lp = find_L(g, ps.P5, out.P0p, &out.L_bracket_lo, &out.L_bracket_hi);
  return out;
}

std::vector<InteractionCheck> verify_pattern_interactions(const GasParams& g, const PatternStates& ps) {
  using NB = NegativeBranch;
  struct Spec {
    const char* label;
    State left, right, middle;
    NB b1, b2;
    int sign1, sign2;  // expected strength signs (0: zero wave)
  };
  const State& P0 = ps.P0_used();
  const State& P6 = ps.P6_used();
  const State& L = ps.L_used();
  std::vector<Spec> specs = {
      {"(i)", ps.P1, ps.P3, ps.P4, NB::Shock, NB::Shock, -1, +1},
      {"(ii)", ps.P5, ps.P4, ps.P3, NB::Shock, NB::Compression, -1, -1},
      {"(iii)", L, ps.P3, P0, NB::Shock, NB::Shock, -1, +1},
      {"(iv)", ps.P3, ps.P4, ps.P2, NB::Shock, NB::Shock, +1, -1},
      {"(v)", P0, ps.P2, P6, NB::Shock, NB::Shock, +1, +1},
      {"(vi)", L, P6, ps.P5, NB::Shock, NB::Compression, -1, -1},
      {"(vii)", ps.P2, ps.P3, ps.P3, NB::Compression, NB::Shock, -1, 0},
  };
  std::vector<InteractionCheck> out;
  for (const Spec& s : specs) {
    RiemannOptions opt;
    opt.branch1 = s.b1;
    opt.branch2 = s.b2;
    RiemannSolution sol = solve_riemann(g, s.left, s.right, opt);
    InteractionCheck c;
    c.label = s.label;
    c.residual = state_distance(g, sol.middle, s.middle);
    auto sgn = [](double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); };
    double s2 = sol.wave2.strength;
    int sign2 = std::abs(s2) < 1e-10 ? 0 : sgn(s2);
    c.kinds_ok = sgn(sol.wave1.strength) == s.sign1 && sign2 == s.sign2;
    out.push_back(c);
  }
  return out;
}

CycleSequence build_cycle_sequence(const GasParams& g, const PatternStates& ps, double alpha, int K, int anchor) {
  if (K < 1) throw Error(ErrorCode::InvalidParameter, "K must be at least 1");
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidParameter, "alpha must be nonnegative");
  CycleSequence seq;
  seq.k_start = 1;
  seq.k_end = K;
  seq.alpha = alpha;
  seq.has_split = ps.perturbed;
  seq.L = ps.L_used();
  seq.P3_limit = ps.P3;
  seq.reference = ps;
  const int N = std::max(anchor, K + 2);
  const std::size_t n = static_cast<std::size_t>(K) + 2;  // cycles 0..K+1
  std::vector<State> P3k(n), P3hat(n);
  {
    State cur = ps.P3;
    for (int k = N - 1; k >= 1; --k) {
      State next = cur;
      if (alpha > 0.0) {
        try {
          State hat = shock_with_strength(g, next, 2, -alpha / k).right;
          cur = integral_curve_from_left(g, hat, 2, alpha / k).right;
          if (static_cast<std::size_t>(k) < n) P3hat[static_cast<std::size_t>(k)] = hat;
        } catch (const Error& e) {
          throw Error(ErrorCode::AlphaTooLarge, "leftover chain fails at k=" + std::to_string(k) + ": " + e.what());
        }
      } else if (static_cast<std::size_t>(k) < n) {
        P3hat[static_cast<std::size_t>(k)] = cur;
      }
      if (static_cast<std::size_t>(k + 1) < n) P3k[static_cast<std::size_t>(k + 1)] = next;
      if (static_cast<std::size_t>(k) < n) P3k[static_cast<std::size_t>(k)] = cur;
    }
  }
  const State& L = seq.L;
  const double w2P3 = w2_of(g, ps.P3);
  seq.cycles.resize(n);
  auto fail = [](int k, const std::string& what) {
    return Error(ErrorCode::AlphaTooLarge, what + " fails at k=" + std::to_string(k));
  };
  // P5 for k = 1..K+1
  std::vector<State> P5(n);
  for (int k = 1; k <= K + 1; ++k) {
    const State& P3 = P3k[static_cast<std::size_t>(k)];
    auto f = [&](double h) { return u_forward1(g, L, h, kShock) - u_backward1(g, P3, h, kShock); };
    try {
      double h = root_near(f, h_of(g, ps.P5), 0.05, h_of(g, L) * 1.0000001, "P5 of cycle");
      P5[static_cast<std::size_t>(k)] = state_from_uh(g, u_forward1(g, L, h, kShock), h);
    } catch (const Error&) {
      throw fail(k, "P5 intersection");
    }
  }
  for (int k = 1; k <= K + 1; ++k) {
    CycleStates& c = seq.cycles[static_cast<std::size_t>(k)];
    c.P3 = P3k[static_cast<std::size_t>(k)];
    c.P5 = P5[static_cast<std::size_t>(k)];
    c.P3_hat = P3hat[static_cast<std::size_t>(k)];
    c.P3_next = static_cast<std::size_t>(k + 1) < n ? P3k[static_cast<std::size_t>(k + 1)] : c.P3;
  }
  for (int k = 0; k <= K + 1; ++k) {
    CycleStates& c = seq.cycles[static_cast<std::size_t>(k)];
    const State& P3 = P3k[static_cast<std::size_t>(std::max(k, 1))];
    try {
      // P0: forward 1-shock from L meets {w1 = w1(P3^k)}
      double w1t = w1_of(g, P3);
      auto f0 = [&](double h) { return (u_forward1(g, L, h, kShock) - h) - w1t; };
      double h0 = root_near(f0, h_of(g, ps.P0_used()), 0.05, h_of(g, L) * 1.0000001, "P0 of cycle");
      c.P0 = on_line_w1(g, w1t, h0);
      if (k <= K) {
        // P2: (w1(P5^{k+1}), w2(P3))
        c.P2 = from_phase(g, {w1_of(g, P5[static_cast<std::size_t>(k + 1)]), w2P3});
      }
    } catch (const Error&) {
      throw fail(k, "P0/P2 construction");
    }
  }
  for (int k = 1; k <= K + 1; ++k) {
    CycleStates& c = seq.cycles[static_cast<std::size_t>(k)];
    if (k == K + 1) c.P2 = from_phase(g, {w1_of(g, c.P5), w2P3});
    try {
      // P4: forward 2-shock from P2 meets {w1 = w1(P3^k)}
      double w1t = w1_of(g, c.P3);
      auto f4 = [&](double h) { return w1t - (u_forward2(g, c.P2, h, kShock) - h); };
      double h4 = root_below(f4, h_of(g, c.P2), "P4 of cycle");
      c.P4 = on_line_w1(g, w1t, h4);
      // P1: {w1 = w1(P5^k)} meets the backward 1-shock into P4
      c.P1 = backward1_meets_w1(g, c.P4, w1_of(g, c.P5));
    } catch (const Error&) {
      throw fail(k, "P4/P1 construction");
    }
  }
  for (int k = 0; k <= K; ++k) {
    CycleStates& c = seq.cycles[static_cast<std::size_t>(k)];
    const State& P1next = seq.cycles[static_cast<std::size_t>(k + 1)].P1;
    if (!ps.perturbed) {
      c.P6 = P1next;
    } else {
      PhaseCoords p6{w1_of(g, P1next), w2_of(g, c.P0)};
      if (!(p6.w2 > p6.w1)) throw fail(k, "P6 construction");
      c.P6 = from_phase(g, p6);
      if (!(w2_of(g, c.P6) < w2_of(g, P1next))) throw fail(k, "compression between P1 and P6");
    }
  }
  {
    CycleStates& c0 = seq.cycles[0];
    const CycleStates& c1 = seq.cycles[1];
    c0.P1 = c1.P1;
    c0.P3 = c1.P3;
    c0.P4 = c1.P4;
    c0.P5 = c1.P5;
    c0.P3_next = c1.P3;
    c0.P3_hat = c1.P3;
    CycleStates& cl = seq.cycles[static_cast<std::size_t>(K + 1)];
    cl.P6 = cl.P1;
  }
  return seq;
}

double PatternTemplate::strip_min() const {
  double m = t[0] + x[0];
  for (int j = 1; j < 7; ++j) m = std::min(m, t[j] + x[j]);
  return m;
}

double PatternTemplate::strip_max() const {
  double m = t[0] + x[0];
  for (int j = 1; j < 7; ++j) m = std::max(m, t[j] + x[j]);
  return m;
}

double default_pattern_drift(const GasParams& g, const PatternStates& ps) {
  std::vector<std::pair<State, State>> shocks = {
      {ps.L_used(), ps.P5}, {ps.L_used(), ps.P0_used()}, {ps.P5, ps.P3}, {ps.P1, ps.P4}};
  double fastest = 0.0;
  for (const auto& s : shocks) fastest = std::max(fastest, -rh_speed(g, s.first, s.second, 1));
  return 1.1 * fastest;
}

PatternScenario build_periodic_run(const GasParams& g, const PatternStates& ps, const PeriodicRunOptions& opt) {
  if (opt.periods < 1) throw Error(ErrorCode::InvalidParameter, "periods must be at least 1");
  CycleSequence seq = build_cycle_sequence(g, ps, 0.0, opt.periods, opt.periods + 2);
  PatternTemplate tpl;
  double lambda = opt.lambda > 0.0 ? opt.lambda : default_pattern_drift(g, ps);
  double strip = 0.0;
  ScheduleGeometry geo = fit_geometry(tpl, opt.period, lambda, &strip);
  CoordinateMap identity = [](double t, double x) { return std::make_pair(t, x); };
  EngineConfig eng = opt.engine;
  return build_pattern_scenario(g, seq, opt.periods, tpl, geo, identity, tpl.leftover_speed * lambda, eng);
}

namespace {

void dump_state(std::ostringstream& os, const GasParams& g, const char* name, const State& s) {
  PhaseCoords p = to_phase(g, s);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-4s v=%.17g u=%.17g h=%.17g w1=%.17g w2=%.17g\n", name, s.v, s.u, h_of(g, s), p.w1,
                p.w2);
  os << buf;
}

void dump_wave(std::ostringstream& os, const GasParams& g, const char* name, const State& l, const State& r,
               int family, WaveKind kind) {
  Wave w = wave_between(g, l, r, family, kind);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-6s family=%d kind=%s strength=%.17g speed=%.17g\n", name, family,
                kind_name(kind), w.strength, w.speed);
  os << buf;
}

}  // namespace

std::string dump_pattern(const GasParams& g, const PatternStates& ps) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "gamma=%.17g A=%.17g epsilon=%.17g kappa=%.17g eta=%.17g\n", g.gamma(), g.A(),
                ps.epsilon, ps.kappa, ps.eta);
  os << buf;
  os << "[states]\n";
  dump_state(os, g, "L", ps.L);
  dump_state(os, g, "P0", ps.P0);
  dump_state(os, g, "P1", ps.P1);
  dump_state(os, g, "P2", ps.P2);
  dump_state(os, g, "P3", ps.P3);
  dump_state(os, g, "P4", ps.P4);
  dump_state(os, g, "P5", ps.P5);
  if (ps.perturbed) {
    std::snprintf(buf, sizeof buf, "split=%.17g\n", ps.split);
    os << buf;
    dump_state(os, g, "L'", ps.Lp);
    dump_state(os, g, "P0'", ps.P0p);
    dump_state(os, g, "P6", ps.P6);
  }
  const State& L = ps.L_used();
  const State& P0 = ps.P0_used();
  const State& P6 = ps.P6_used();
  using K = WaveKind;
  os << "[waves]\n";
  dump_wave(os, g, "LP5", L, ps.P5, 1, K::Shock);
  dump_wave(os, g, "LP0", L, P0, 1, K::Shock);
  dump_wave(os, g, "P5P1", ps.P5, ps.P1, 2, K::Compression);
  if (ps.perturbed) dump_wave(os, g, "P1P6", ps.P1, P6, 2, K::Compression);
  dump_wave(os, g, "P6P2", P6, ps.P2, 2, K::Rarefaction);
  dump_wave(os, g, "P2P3", ps.P2, ps.P3, 1, K::Compression);
  dump_wave(os, g, "P1P4", ps.P1, ps.P4, 1, K::Shock);
  dump_wave(os, g, "P4P3", ps.P4, ps.P3, 2, K::Rarefaction);
  dump_wave(os, g, "P5P3", ps.P5, ps.P3, 1, K::Shock);
  dump_wave(os, g, "P3P4", ps.P3, ps.P4, 2, K::Compression);
  dump_wave(os, g, "P0P3", P0, ps.P3, 2, K::Rarefaction);
  dump_wave(os, g, "P3P2", ps.P3, ps.P2, 1, K::Rarefaction);
  dump_wave(os, g, "P2P4", ps.P2, ps.P4, 2, K::Shock);
  dump_wave(os, g, "P0P6", P0, P6, 1, K::Rarefaction);
  return os.str();
}

}  // namespace psys

namespace psys {

Domain pattern_domain(const GasParams& g, const CycleSequence& seq) {
  double h_min = h_of(g, seq.L), reach = std::abs(seq.L.u) + h_of(g, seq.L);
  auto take = [&](const State& s) {
    double h = h_of(g, s);
    h_min = std::min(h_min, h);
    reach = std::max(reach, std::abs(s.u) + h);
  };
  for (const CycleStates& c : seq.cycles)
    for (const State* s : {&c.P0, &c.P1, &c.P2, &c.P3, &c.P4, &c.P5, &c.P6, &c.P3_next, &c.P3_hat}) take(*s);
  return Domain{0.5 * h_min, 1.01 * reach};
}

}  // namespace psys
