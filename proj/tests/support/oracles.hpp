#pragma once

// Independent reference implementations used only by the test suite. Each
// oracle deliberately takes a different numerical route than the library
// (series/continued fractions instead of erfc, bisection instead of Brent,
// quadrature and Monte Carlo instead of closed forms) so that agreement is
// evidence rather than tautology.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace oracles {

// Phi(z) via the Taylor series of the error function for small |z| and the
// Lentz continued fraction for erfc in the tails, in long double arithmetic.
double phi_reference(double z);

// Standard normal quantile via bisection on phi_reference.
double quantile_reference(double p);

// Unique strictly positive root of g(t) = t/(2k) - 1/2 + Phi(-t/sigma) by
// plain bisection. Finds its own bracket by scanning for a sign change on
// (0, k]; no analytic minimizer is used.
double kstar_bisection(double k, double sigma);

// Adaptive Simpson integral of f on [lo, hi] to absolute tolerance tol.
double simpson(const std::function<double(double)>& f, double lo, double hi,
               double tol);

// Dense-grid maximizer: n equally spaced points, ties to the smallest x.
std::pair<double, double> grid_max(const std::function<double(double)>& f,
                                   double lo, double hi, int n);

// Monte Carlo estimate of E[d(mu_hat)] for the piecewise-linear rule that is
// 0 below lo, affine on [lo, hi], 1 above, with mu_hat ~ N(mu, sigma).
// Returns (estimate, standard error). Evaluation is hand-inlined rather than
// routed through the library.
std::pair<double, double> pwl_mc(double lo, double hi, double mu, double sigma,
                                 int draws, std::uint64_t seed);

// A random monotone step rule: n strictly increasing thresholds in
// [-span, span] with Dirichlet-ish positive weights summing to 1.
struct StepRule {
  std::vector<double> thresholds;
  std::vector<double> weights;
};
StepRule random_step_rule(double span, int n, std::uint64_t seed);

}  // namespace oracles
