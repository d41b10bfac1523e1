#pragma once

#include <Eigen/Core>
#include <vector>

#include "mmrkit/mmr.hpp"
#include "mmrkit/model.hpp"
#include "mmrkit/rule.hpp"

namespace mmrkit {

// Discretized zero-sum statistical game: the decision maker mixes over the
// pure threshold rules 1{mu_hat > t} on threshold_grid, nature answers with
// states found by a best-response search.
struct GameConfig {
  Model model;
  Eigen::VectorXd threshold_grid;  // strictly increasing, spans [-(k+4s), k+4s]
  double learning_rate;            // > 0
  int iterations;                  // >= 1
  int br_grid_n;                   // nature best-response grid (>= 3)

  // Uniform grid of n points on [-(k + 4 sigma), k + 4 sigma].
  static Eigen::VectorXd default_grid(const Model& model, int n = 401);

  // Standard multiplicative-weights rate sqrt(8 ln G / T) / R with payoff
  // range bound R = k + 8 sigma.
  static double default_learning_rate(const Model& model, int grid_size,
                                      int iterations);

  void validate() const;  // throws DomainError on violation
};

struct GameCheckpoint {
  int iteration;
  double lower;
  double upper;
  double gap;
  bool increased;  // upper rose by more than 1e-6 since the last checkpoint
};

struct GameSolution {
  DecisionRule rule;  // time-averaged mixture over the threshold grid
  double lower_bound;
  double upper_bound;
  int iterations_run;
  std::vector<GameCheckpoint> history;
};

// Regret of the pure strategy 1{mu_hat > threshold} at a state.
double payoff(double threshold, const NatureState& state, double sigma);

// Multiplicative-weights / fictitious-play hybrid: nature best-responds to the
// current mixture each round, the mixture is reweighted downward in its regret
// against that state, and the uniform time-average of the iterates is
// returned together with certified lower/upper bounds on the game value.
GameSolution solve(const GameConfig& config);

// Max over grid of |a(x) - b(x)|.
double rule_distance(const DecisionRule& a, const DecisionRule& b,
                     const Eigen::Ref<const Eigen::VectorXd>& grid);

}  // namespace mmrkit
