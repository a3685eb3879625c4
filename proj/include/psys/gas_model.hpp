#pragma once

#include "psys/errors.hpp"

namespace psys {

// p(v) = A v^-gamma.  B is stored so that it can be compared against a
// recomputation.
class GasParams {
 public:
  GasParams(double gamma = 3.0, double A = 1.0 / 3.0);

  double gamma() const { return gamma_; }
  double A() const { return A_; }
  double B() const { return B_; }
  double sqrt_A_gamma() const { return sqrt_ag_; }
  bool consistent() const;

  double pressure(double v) const;
  double h_of_v(double v) const;
  double v_of_h(double h) const;

 private:
  double gamma_;
  double A_;
  double B_;
  double sqrt_ag_;
};

// Canonical representation: specific volume and velocity.
struct State {
  double v = 1.0;
  double u = 0.0;

  State() = default;
  State(double v_, double u_);
};

struct PhaseCoords {
  double w1 = 0.0;
  double w2 = 0.0;
};

State state_from_uh(const GasParams& g, double u, double h);
double h_of(const GasParams& g, const State& s);
inline double rho_of(const State& s) { return 1.0 / s.v; }

PhaseCoords to_phase(const GasParams& g, const State& s);
State from_phase(const GasParams& g, const PhaseCoords& p);
inline double w1_of(const GasParams& g, const State& s) { return to_phase(g, s).w1; }
inline double w2_of(const GasParams& g, const State& s) { return to_phase(g, s).w2; }

// Lagrangian sound speed sqrt(-p'(v)).
double wave_speed(const GasParams& g, const State& s);
// Same speed written in terms of w2 - w1 = 2h.
double wave_speed_from_phase(const GasParams& g, const PhaseCoords& p);
// Characteristic speed of a family: -c for family 1, +c for family 2.
double characteristic_speed(const GasParams& g, const State& s, int family);

double phi(const GasParams& g, double two_h);
double phi_tilde(const GasParams& g, double two_h);

// A(theta-1)(theta^gamma-1)/theta, evaluated through theta-1 to avoid
// cancellation near theta = 1.
double psi(const GasParams& g, double theta);
double psi_prime(const GasParams& g, double theta);

// Max-norm distance in (u, h).
double state_distance(const GasParams& g, const State& a, const State& b);

}  // namespace psys
