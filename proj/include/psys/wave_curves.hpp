#pragma once

#include <cstdint>

#include "psys/gas_model.hpp"

namespace psys {

enum class WaveKind { Shock, Rarefaction, Compression };
const char* kind_name(WaveKind k);

// Waves weaker than this are zero waves.
inline constexpr double kZeroWave = 1e-14;

struct Wave {
  int family = 1;
  WaveKind kind = WaveKind::Rarefaction;
  double strength = 0.0;  // jump of w1 (family 1) or w2 (family 2)
  State left;
  State right;
  double speed = 0.0;

  bool is_zero() const { return strength == 0.0; }
};

struct ShockParam {
  double theta = 1.0;  // rho_+ / rho_-
  double s = 0.0;      // u_- - u_+
};

ShockParam shock_param(const GasParams& g, const State& left, const State& right);
double shock_jump(const GasParams& g, double h_left, double theta);

Wave shock_from_left(const GasParams& g, const State& left, int family, double theta);
Wave rarefaction_from_left(const GasParams& g, const State& left, int family, double strength);
Wave compression_from_left(const GasParams& g, const State& left, int family, double strength);
// Rarefaction or compression depending on the sign of the strength.
Wave integral_curve_from_left(const GasParams& g, const State& left, int family, double strength);
// Admissible shock of a prescribed (negative) strength.
Wave shock_with_strength(const GasParams& g, const State& left, int family, double strength);

// Wave object for two given states; the caller asserts they are connected.
Wave wave_between(const GasParams& g, const State& left, const State& right, int family,
                  WaveKind kind);
double rh_speed(const GasParams& g, const State& left, const State& right, int family);
// max(|lambda [v] + [u]|, |lambda [u] - [p]|), relative to the jump sizes.
double rh_residual(const GasParams& g, const Wave& w);
// How far the two states are from lying on the wave curve of the stated kind.
double curve_residual(const GasParams& g, const Wave& w);

enum class NegativeBranch { Shock, Compression };

// u of the state at height h on the 1-curve leaving `left`, and of the state at
// height h on the 2-curve arriving at `right` (and the other two directions).
double u_forward1(const GasParams& g, const State& left, double h, NegativeBranch br);
double u_backward2(const GasParams& g, const State& right, double h, NegativeBranch br);
double u_forward2(const GasParams& g, const State& left, double h, NegativeBranch br);
double u_backward1(const GasParams& g, const State& right, double h, NegativeBranch br);

struct RiemannOptions {
  NegativeBranch branch1 = NegativeBranch::Shock;
  NegativeBranch branch2 = NegativeBranch::Shock;
  double tolerance = 1e-13;
  int max_iter = 200;
};

struct RiemannSolution {
  Wave wave1;
  Wave wave2;
  State middle;
  double residual = 0.0;
  double discarded = 0.0;  // strength of waves snapped to zero
};

RiemannSolution solve_riemann(const GasParams& g, const State& left, const State& right,
                              const RiemannOptions& opt = {});

// Growth factor of an infinitesimal 2-wave crossing a 1-shock with density
// ratio theta > 1.
double amplification_factor(const GasParams& g, double theta);

// Outgoing h-shift eta for an impinging 2-wave that moves the shock's left
// state to (u - eps_bar, h - eps_bar).  Integrates d eta/d eps = a(theta).
double amplify_finite(const GasParams& g, const Wave& left_shock, double eps_bar);

double shock_curve_slope(const GasParams& g, const State& left, double theta);

bool approaching(const Wave& left_wave, const Wave& right_wave);

struct InteractionEstimate {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double defect = 0.0;
  double cubic_bound_ratio = 0.0;
};

// wave_a is immediately left of wave_b (wave_a.right == wave_b.left).
InteractionEstimate verify_interaction_estimate(const GasParams& g, const Wave& wave_a,
                                                const Wave& wave_b);

enum class Side { Left, Right };

struct Lemma0Result {
  double outgoing2_strength = 0.0;
  double ratio = 0.0;
  bool bound_ok = true;
};

// Right side: impinging is a 1-wave starting at shock.right.  Left side:
// impinging ends at shock.left.  c_gamma is the left-side constant.
Lemma0Result verify_lemma0(const GasParams& g, const Wave& shock, const Wave& impinging, Side side,
                           double c_gamma);

// Largest outgoing/incoming 2-strength ratio for small 2-waves hitting 1-shocks
// from the left, sampled in D_ab.
double lemma0_left_constant(const GasParams& g, double a, double b, int samples,
                            std::uint64_t seed);

}  // namespace psys
