#include "psys/theorem1_diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace psys {

bool ShockCensus::empty() const {
  for (const auto& s : per_snapshot)
    if (!s.empty()) return false;
  for (const CensusPoint& p : points)
    for (int c : p.counts)
      if (c > 0) return false;
  return true;
}

int ShockCensus::max_count(std::size_t radius_index) const {
  int m = 0;
  for (const CensusPoint& p : points)
    if (radius_index < p.counts.size()) m = std::max(m, p.counts[radius_index]);
  return m;
}

namespace {

bool large_shock(const FrontTrace& f, double delta0) {
  return f.wave.kind == WaveKind::Shock && std::abs(f.wave.strength) >= delta0;
}

// Euclidean distance in (t, x) from (t0, x0) to the front's segment.
double distance_to_trace(const FrontTrace& f, double t_end, double t0, double x0) {
  double ta = f.birth, tb = std::min(f.death, t_end);
  if (tb < ta) return kNever;
  auto pos = [&](double t) { return f.anchor_x + f.speed * (t - f.anchor_t); };
  double xa = pos(ta), xb = pos(tb);
  double dt = tb - ta, dx = xb - xa;
  double len2 = dt * dt + dx * dx;
  double s = len2 > 0.0 ? ((t0 - ta) * dt + (x0 - xa) * dx) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(t0 - (ta + s * dt), x0 - (xa + s * dx));
}

}  // namespace

ShockCensus census(const History& h, double delta0, std::vector<double> radii, int flag_count) {
  ShockCensus c;
  c.delta0 = delta0;
  std::sort(radii.begin(), radii.end(), std::greater<>());
  c.radii = radii;
  for (const Snapshot& s : h.snapshots) {
    std::vector<LargeShock> row;
    for (const Front& f : s.fronts)
      if (f.wave.kind == WaveKind::Shock && std::abs(f.wave.strength) >= delta0)
        row.push_back({f.position(s.time), f.wave.strength});
    c.per_snapshot.push_back(row);
  }

  std::vector<const FrontTrace*> shocks;
  for (const FrontTrace& f : h.fronts)
    if (large_shock(f, delta0)) shocks.push_back(&f);
  if (shocks.empty()) return c;

  const double t_end = h.t_end;
  std::vector<double> xs;
  for (const FrontTrace& f : h.fronts)
    if (f.birth <= t_end && f.death >= t_end) xs.push_back(f.anchor_x + f.speed * (t_end - f.anchor_t));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> cand = xs;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) cand.push_back(0.5 * (xs[i] + xs[i + 1]));
  std::sort(cand.begin(), cand.end());

  for (double x : cand) {
    CensusPoint p;
    p.t = t_end;
    p.x = x;
    std::vector<double> dist;
    for (const FrontTrace* f : shocks) dist.push_back(distance_to_trace(*f, t_end, t_end, x));
    for (double r : radii) p.counts.push_back(static_cast<int>(std::count_if(dist.begin(), dist.end(), [r](double d) { return d <= r; })));
    p.flagged = !p.counts.empty() && p.counts.back() >= flag_count;
    c.points.push_back(p);
  }
  return c;
}

FarFieldReport far_field_bound(const History& h, double R0, double eps0, double lambda_hat) {
  FarFieldReport rep;
  rep.lambda_hat = lambda_hat;
  std::vector<double> times{h.t_start};
  for (const EventRecord& e : h.events) times.push_back(e.time);
  times.push_back(h.t_end);
  for (const FrontTrace& f : h.fronts) rep.max_front_speed = std::max(rep.max_front_speed, std::abs(f.speed));
  rep.speed_ok = rep.max_front_speed <= lambda_hat * (1.0 + 1e-12);
  for (std::size_t i = 0; i < times.size(); ++i) {
    double t = times[i];
    double reach = R0 + lambda_hat * (t - h.t_start);
    double total = 0.0;
    for (const FrontTrace& f : h.fronts) {
      bool alive = f.birth <= t && (f.death > t || (i + 1 == times.size() && f.death >= t));
      if (!alive) continue;
      double x = f.anchor_x + f.speed * (t - f.anchor_t);
      if (x < -reach || x > reach) total += std::abs(f.wave.strength);
    }
    if (i == 0) rep.initial_strength = total;
    rep.max_strength = std::max(rep.max_strength, total);
    ++rep.times_checked;
  }
  rep.constant = eps0 > 0.0 ? rep.max_strength / eps0 : 0.0;
  return rep;
}

}  // namespace psys
