#pragma once

#include <cstdint>
#include <functional>

#include "mmrkit/errors.hpp"

namespace mmrkit {

// Root bracket [lo, hi]; the function values at the ends must straddle zero,
// which find_root checks at entry.
struct Bracket {
  double lo;
  double hi;
};

struct Tolerances {
  double abs_x;   // absolute tolerance on the argument
  double abs_f;   // absolute tolerance on the function value
  int max_iter;   // >= 1

  // abs_x = 1e-10 * max(1, |hi - lo|), abs_f = 1e-12, max_iter = 200.
  static Tolerances for_interval(double lo, double hi);
};

// Standard normal cdf Phi(z), absolute error below 1e-12 on [-8, 8] and
// relatively accurate far into the tails. Clamped to [0, 1].
double std_normal_cdf(double z);

// Standard normal density phi(z) = exp(-z^2/2) / sqrt(2 pi).
double std_normal_pdf(double z);

// Brent-style bracketed root finding: bisection with secant / inverse
// quadratic acceleration. Succeeds when |f(x)| <= abs_f or the bracket has
// shrunk to abs_x (or to machine precision). Throws BracketError when the
// bracket has no sign change and ConvergenceError (carrying the best iterate)
// when max_iter is exhausted first.
double find_root(const std::function<double(double)>& f, Bracket bracket,
                 const Tolerances& tol);

struct MaxResult {
  double argmax;
  double max;
};

// Coarse scan of grid_n points on [lo, hi] followed by golden-section
// refinement around the best grid point. The returned max is never below the
// grid max; grid ties resolve to the smallest argmax.
MaxResult maximize_1d(const std::function<double(double)>& f, double lo,
                      double hi, int grid_n, const Tolerances& tol);

// Counter-based uniform draw on [0, 1): a pure function of (seed, index), so
// streams are reproducible and order-independent.
double uniform_draw(std::uint64_t seed, std::uint64_t index);

}  // namespace mmrkit
