#include "psys/domain.hpp"

#include <algorithm>
#include <cmath>

namespace psys {

bool Domain::contains(const GasParams& g, const State& s, double tol) const {
  double h = h_of(g, s);
  double scale = std::max(1.0, b);
  return h >= a * (1.0 - tol) && std::abs(s.u) <= b - h + tol * scale;
}

double Domain::lambda_hat(const GasParams& g) const {
  double gm = g.gamma();
  return g.sqrt_A_gamma() * std::pow(b / g.B(), (gm + 1.0) / (gm - 1.0));
}

State sample_state(const GasParams& g, const Domain& d, Rng& rng, double h_max) {
  double top = std::min(h_max, d.b);
  double h = rng.uniform(d.a, top);
  double umax = d.b - h;
  double u = rng.uniform(-umax, umax);
  return state_from_uh(g, u, h);
}

}  // namespace psys
