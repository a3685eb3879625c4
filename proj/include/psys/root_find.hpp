#pragma once

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "psys/errors.hpp"

namespace psys {

// Root of f on [lo, hi] where f(lo) and f(hi) have opposite signs.
template <class F>
double find_root(F&& f, double lo, double hi, double flo, double fhi, int max_iter = 200,
                 const char* what = "root") {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw Error(ErrorCode::ConvergenceFailure, std::string(what) + ": bracket has no sign change");
  if (lo > hi) {
    std::swap(lo, hi);
    std::swap(flo, fhi);
  }
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
  boost::math::tools::eps_tolerance<double> tol(52);
  std::pair<double, double> r;
  try {
    r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ConvergenceFailure, std::string(what) + ": " + e.what());
  }
  if (iters >= static_cast<std::uintmax_t>(max_iter))
    throw Error(ErrorCode::ConvergenceFailure, std::string(what) + ": iteration cap reached");
  double a = r.first, b = r.second;
  double fa = f(a), fb = f(b);
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

// Root of a function of h > 0 that is positive at `lo` side and negative far
// out.  Expands the bracket [lo, hi] by factors of two as needed.
template <class F>
double find_root_in_h(F&& f, double lo, double hi, int max_iter = 200, const char* what = "root") {
  double flo = f(lo);
  int guard = 0;
  while (flo <= 0.0 && guard++ < 1100) {
    if (flo == 0.0) return lo;
    hi = lo;
    lo *= 0.5;
    flo = f(lo);
  }
  double fhi = f(hi);
  guard = 0;
  while (fhi > 0.0 && guard++ < 1100) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = f(hi);
  }
  if (!(flo > 0.0) || !(fhi <= 0.0))
    throw Error(ErrorCode::ConvergenceFailure, std::string(what) + ": could not bracket");
  return find_root(f, lo, hi, flo, fhi, max_iter, what);
}

}  // namespace psys
