#include "psys/gas_model.hpp"

#include <algorithm>
#include <cmath>

namespace psys {

GasParams::GasParams(double gamma, double A) : gamma_(gamma), A_(A) {
  if (!(gamma > 1.0) || !std::isfinite(gamma) || !(A > 0.0) || !std::isfinite(A))
    throw Error(ErrorCode::InvalidParameter, "need gamma > 1 and A > 0");
  sqrt_ag_ = std::sqrt(A_ * gamma_);
  B_ = 2.0 / (gamma_ - 1.0) * sqrt_ag_;
}

bool GasParams::consistent() const {
  return B_ == 2.0 / (gamma_ - 1.0) * std::sqrt(A_ * gamma_);
}

double GasParams::pressure(double v) const { return A_ * std::pow(v, -gamma_); }

double GasParams::h_of_v(double v) const {
  return B_ * std::pow(v, 0.5 * (1.0 - gamma_));
}

double GasParams::v_of_h(double h) const {
  return std::pow(h / B_, 2.0 / (1.0 - gamma_));
}

State::State(double v_, double u_) : v(v_), u(u_) {
  if (!(v_ > 0.0) || !std::isfinite(v_) || !std::isfinite(u_))
    throw Error(ErrorCode::NonPositiveDensity, "specific volume must be positive and finite");
}

State state_from_uh(const GasParams& g, double u, double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw Error(ErrorCode::NonPositiveDensity, "h must be positive");
  return State(g.v_of_h(h), u);
}

double h_of(const GasParams& g, const State& s) { return g.h_of_v(s.v); }

PhaseCoords to_phase(const GasParams& g, const State& s) {
  double h = h_of(g, s);
  return {s.u - h, s.u + h};
}

State from_phase(const GasParams& g, const PhaseCoords& p) {
  if (!(p.w2 > p.w1))
    throw Error(ErrorCode::NonPositiveDensity, "w2 must exceed w1");
  double gm = g.gamma();
  double v = std::pow((gm - 1.0) * (p.w2 - p.w1) / (4.0 * g.sqrt_A_gamma()), 2.0 / (1.0 - gm));
  return State(v, 0.5 * (p.w1 + p.w2));
}

double wave_speed(const GasParams& g, const State& s) {
  return g.sqrt_A_gamma() * std::pow(s.v, -0.5 * (g.gamma() + 1.0));
}

double wave_speed_from_phase(const GasParams& g, const PhaseCoords& p) {
  double h = 0.5 * (p.w2 - p.w1);
  double gm = g.gamma();
  return g.sqrt_A_gamma() * std::pow(h / g.B(), (gm + 1.0) / (gm - 1.0));
}

double characteristic_speed(const GasParams& g, const State& s, int family) {
  double c = wave_speed(g, s);
  return family == 1 ? -c : c;
}

double phi(const GasParams& g, double two_h) {
  double gm = g.gamma();
  return std::pow(two_h, (gm + 1.0) / (2.0 * gm - 2.0));
}

double phi_tilde(const GasParams& g, double two_h) {
  double gm = g.gamma();
  return std::pow(two_h, -(gm + 1.0) / (2.0 * gm - 2.0));
}

namespace {
// theta^p - 1 computed from d = theta - 1.
double pow_m1(double d, double p) { return std::expm1(p * std::log1p(d)); }
}  // namespace

double psi(const GasParams& g, double theta) {
  double d = theta - 1.0;
  return g.A() * d * pow_m1(d, g.gamma()) / theta;
}

double psi_prime(const GasParams& g, double theta) {
  double d = theta - 1.0;
  double gm = g.gamma();
  double bracket = (1.0 - gm) * pow_m1(d, gm) + gm * pow_m1(d, gm + 1.0);
  return g.A() * bracket / (theta * theta);
}

double state_distance(const GasParams& g, const State& a, const State& b) {
  return std::max(std::abs(a.u - b.u), std::abs(h_of(g, a) - h_of(g, b)));
}

}  // namespace psys
