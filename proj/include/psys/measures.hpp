#pragma once

#include <vector>

#include "psys/domain.hpp"
#include "psys/wave_curves.hpp"

namespace psys {

struct Profile {
  std::vector<double> breakpoints;  // strictly increasing
  std::vector<State> states;        // breakpoints.size() + 1 cells

  // Throws InvalidParameter on malformed profiles; domain check optional.
  void validate(const GasParams& g, const Domain* dom = nullptr) const;
  State state_at(double x) const;
};

struct Atom {
  double position = 0.0;
  int family = 1;
  double strength = 0.0;
};

struct WaveMeasures {
  std::vector<Atom> atoms;  // ordered by position; at one position family 1 first
  double mu1_plus = 0.0;
  double mu1_minus = 0.0;
  double mu2_plus = 0.0;
  double mu2_minus = 0.0;
};

WaveMeasures measures_from_atoms(std::vector<Atom> atoms);
WaveMeasures wave_measures(const GasParams& g, const Profile& p);

double glimm_V(const WaveMeasures& m);
// Crossing term over 2-atoms strictly left of 1-atoms, plus the
// |mu_i|(R) mu_i^-(R) terms (each atom paired with itself included).
double glimm_Q(const WaveMeasures& m);
// Same potential restricted to pairs of distinct atoms.
double glimm_Q_pairs(const WaveMeasures& m);
double monotone_functional(const WaveMeasures& m, double eps0);
// (2|mu1| + |mu2|) of the closed window [lo, hi].
double weighted_strength(const WaveMeasures& m, double lo, double hi);

struct Lemma3Report {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = true;
  double max_window_strength = 0.0;  // largest strength on a window of length delta1
  double max_window_start = 0.0;
  bool window_ok = true;
};

Lemma3Report check_lemma3(const WaveMeasures& m, double lo, double hi, double b, double delta1);
Lemma3Report check_lemma3(const GasParams& g, const Profile& p, double lo, double hi, double b,
                          double delta1);

// Integral of phi_tilde(2h(x)) over [xi1, xi2].
double z_functional(const GasParams& g, const Profile& p, double xi1, double xi2);

struct InteractionLedger {
  struct Entry {
    double time;
    double position;
    double amount;
  };
  std::vector<Entry> events;
  double total = 0.0;

  void add(double time, double position, double amount);
};

}  // namespace psys
