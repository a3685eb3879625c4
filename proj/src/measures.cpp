#include "psys/measures.hpp"

#include <algorithm>
#include <cmath>

namespace psys {

void Profile::validate(const GasParams& g, const Domain* dom) const {
  if (states.size() != breakpoints.size() + 1)
    throw Error(ErrorCode::InvalidParameter, "profile needs one more state than breakpoints");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw Error(ErrorCode::InvalidParameter, "breakpoints must be strictly increasing");
  for (const State& s : states) {
    if (!(s.v > 0.0)) throw Error(ErrorCode::NonPositiveDensity, "profile state with v <= 0");
    if (dom && !dom->contains(g, s)) throw Error(ErrorCode::InvalidParameter, "profile state outside D_ab");
  }
}

State Profile::state_at(double x) const {
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  return states[static_cast<std::size_t>(it - breakpoints.begin())];
}

WaveMeasures measures_from_atoms(std::vector<Atom> atoms) {
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.position < b.position; });
  WaveMeasures m;
  for (const Atom& a : atoms) {
    if (a.strength == 0.0) continue;
    double& plus = a.family == 1 ? m.mu1_plus : m.mu2_plus;
    double& minus = a.family == 1 ? m.mu1_minus : m.mu2_minus;
    if (a.strength > 0.0) plus += a.strength; else minus -= a.strength;
    m.atoms.push_back(a);
  }
  return m;
}

WaveMeasures wave_measures(const GasParams& g, const Profile& p) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < p.breakpoints.size(); ++i) {
    RiemannSolution sol = solve_riemann(g, p.states[i], p.states[i + 1]);
    atoms.push_back({p.breakpoints[i], 1, sol.wave1.strength});
    atoms.push_back({p.breakpoints[i], 2, sol.wave2.strength});
  }
  return measures_from_atoms(std::move(atoms));
}

double glimm_V(const WaveMeasures& m) { return m.mu1_plus + m.mu1_minus + m.mu2_plus + m.mu2_minus; }

namespace {

double crossing_term(const WaveMeasures& m) {
  // 2-atoms at x < y paired with 1-atoms at y; equal positions do not count.
  double total = 0.0, two_left = 0.0;
  std::size_t i = 0;
  const auto& a = m.atoms;
  while (i < a.size()) {
    std::size_t j = i;
    double two_here = 0.0;
    while (j < a.size() && a[j].position == a[i].position) {
      if (a[j].family == 1) total += two_left * std::abs(a[j].strength);
      else two_here += std::abs(a[j].strength);
      ++j;
    }
    two_left += two_here;
    i = j;
  }
  return total;
}

}  // namespace

double glimm_Q(const WaveMeasures& m) {
  double self1 = (m.mu1_plus + m.mu1_minus) * m.mu1_minus;
  double self2 = (m.mu2_plus + m.mu2_minus) * m.mu2_minus;
  return crossing_term(m) + self1 + self2;
}

double glimm_Q_pairs(const WaveMeasures& m) {
  double diag = 0.0;
  for (const Atom& a : m.atoms)
    if (a.strength < 0.0) diag += a.strength * a.strength;
  return glimm_Q(m) - diag;
}

double monotone_functional(const WaveMeasures& m, double eps0) { return glimm_V(m) + eps0 * glimm_Q(m); }

double weighted_strength(const WaveMeasures& m, double lo, double hi) {
  double w = 0.0;
  for (const Atom& a : m.atoms)
    if (a.position >= lo && a.position <= hi) w += (a.family == 1 ? 2.0 : 1.0) * std::abs(a.strength);
  return w;
}

Lemma3Report check_lemma3(const WaveMeasures& m, double lo, double hi, double b, double delta1) {
  Lemma3Report r;
  double rar = 0.0;
  std::vector<const Atom*> in;
  for (const Atom& a : m.atoms) {
    if (a.position < lo || a.position > hi) continue;
    r.lhs += std::abs(a.strength);
    if (a.strength > 0.0) rar += a.strength;
    in.push_back(&a);
  }
  r.rhs = 2.0 * (b + rar);
  r.ok = r.lhs <= r.rhs;
  // sliding window [x_j, x_j + delta1]
  double sum = 0.0;
  std::size_t k = 0;
  for (std::size_t j = 0; j < in.size(); ++j) {
    while (k < in.size() && in[k]->position <= in[j]->position + delta1) sum += std::abs(in[k++]->strength);
    if (sum > r.max_window_strength) {
      r.max_window_strength = sum;
      r.max_window_start = in[j]->position;
    }
    sum -= std::abs(in[j]->strength);
  }
  r.window_ok = r.max_window_strength <= 2.0 * b;
  return r;
}

Lemma3Report check_lemma3(const GasParams& g, const Profile& p, double lo, double hi, double b,
                          double delta1) {
  return check_lemma3(wave_measures(g, p), lo, hi, b, delta1);
}

double z_functional(const GasParams& g, const Profile& p, double xi1, double xi2) {
  if (!(xi2 > xi1)) return 0.0;
  double z = 0.0;
  double x = xi1;
  auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), xi1);
  std::size_t cell = static_cast<std::size_t>(it - p.breakpoints.begin());
  while (x < xi2) {
    double end = cell < p.breakpoints.size() ? std::min(p.breakpoints[cell], xi2) : xi2;
    z += (end - x) * phi_tilde(g, 2.0 * h_of(g, p.states[cell]));
    x = end;
    ++cell;
  }
  return z;
}

void InteractionLedger::add(double time, double position, double amount) {
  events.push_back({time, position, amount});
  total += amount;
}

}  // namespace psys
