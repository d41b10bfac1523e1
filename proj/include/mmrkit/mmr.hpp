#pragma once

#include <utility>
#include <vector>

#include "mmrkit/model.hpp"
#include "mmrkit/rule.hpp"

namespace mmrkit {

enum class Regime { ThresholdOptimal, RandomizedOptimal };

const char* to_string(Regime r);

// ThresholdOptimal iff k <= sigma * sqrt(pi/2) (boundary inclusive).
Regime regime(const Model& model);

// Randomization half-width: the unique strictly positive root of
//   g(t) = t/(2k) - 1/2 + Phi(-t/sigma).
// Defined only in the randomized regime k > sigma*sqrt(pi/2); throws
// RegimeError otherwise. The bracket is [t_min, k] where
// t_min = sigma*sqrt(2 ln(2k/(sigma*sqrt(2 pi)))) is the analytic minimizer
// of g; g(t_min) < 0 and g(k) = Phi(-k/sigma) > 0 pin the root.
double kstar(const Model& model);

// The defining function g above; exposed for tests and diagnostics.
double kstar_residual(const Model& model, double t);

// The minimax-regret rule: Threshold{0} when k <= sigma*sqrt(pi/2), else the
// piecewise-linear rule on [-kstar, +kstar].
DecisionRule mmr_rule(const Model& model);

// E[d(mu_hat)] for mu_hat ~ N(mu, sigma), in closed form for every variant.
double expected_treatment(const DecisionRule& rule, double mu, double sigma);

// Expected regret mu_star * (1{mu_star > 0} - E[d(mu_hat)]) at a state.
double regret(const DecisionRule& rule, const NatureState& state, double sigma);

struct RegretReport {
  double worst_regret;
  NatureState argmax_state;
  std::vector<std::pair<double, double>> trace;  // (mu, max-over-mu_star regret)
};

// Nature's best response: for fixed mu the inner maximum over mu_star sits at
// mu+k, mu-k or 0, so the outer search reduces to a 1D maximization of the
// candidate envelope over mu in [-(k + w*sigma), k + w*sigma].
RegretReport nature_best_response(const DecisionRule& rule, const Model& model,
                                  int grid_n = 801, double window_sigmas = 8.0);

}  // namespace mmrkit
