#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "wft/errors.hpp"

namespace wft::detail {

inline constexpr int kMaxRootIterations = 100;

/// Root of f on [lo, hi] where f(lo) and f(hi) have opposite signs (or one is zero).
/// Returns the bracket end closest to a zero after TOMS 748 refinement.
/// Relative tolerance of 2^-50 or an absolute bracket width `abs_tol`, whichever is larger.
struct RootTolerance {
  double abs_tol = 0.0;
  bool operator()(double a, double b) const {
    const double w = std::abs(a - b);
    return w <= abs_tol || w <= 0x1p-50 * std::min(std::abs(a), std::abs(b));
  }
};

template <class F>
double bracketed_root(F&& f, double lo, double hi, double flo, double fhi, const char* what, double abs_tol = 0.0) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw SolverError(std::string(what) + ": root not bracketed");
  }
  std::uintmax_t iters = kMaxRootIterations;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, RootTolerance{abs_tol}, iters);
  if (iters >= static_cast<std::uintmax_t>(kMaxRootIterations)) {
    throw SolverError(std::string(what) + ": no convergence within iteration cap");
  }
  const double fa = f(a);
  const double fb = f(b);
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

template <class F>
double bracketed_root(F&& f, double lo, double hi, const char* what) {
  return bracketed_root(f, lo, hi, f(lo), f(hi), what);
}

}  // namespace wft::detail
