#pragma once

#include <cstdint>
#include <random>

#include "psys/gas_model.hpp"

namespace psys {

// D_ab = { |u| <= b - h, h >= a }.
struct Domain {
  double a = 0.1;
  double b = 4.0;

  bool contains(const GasParams& g, const State& s, double tol = 1e-12) const;
  // Largest characteristic speed attained in D_ab.
  double lambda_hat(const GasParams& g) const;
};

// Deterministic uniform generator (bit-stable across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)) % (hi - lo + 1); }
  bool coin() { return (eng_() >> 63) != 0; }

 private:
  std::mt19937_64 eng_;
};

// Uniform in (u, h) over the part of D_ab with h <= h_max.
State sample_state(const GasParams& g, const Domain& d, Rng& rng, double h_max);

}  // namespace psys
