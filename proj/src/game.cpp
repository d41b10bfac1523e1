#include "mmrkit/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "mmrkit/errors.hpp"
#include "mmrkit/numerics.hpp"
#include "mmrkit/parallel.hpp"

namespace mmrkit {

Eigen::VectorXd GameConfig::default_grid(const Model& model, int n) {
  if (n < 2) {
    throw DomainError("GameConfig::default_grid: need at least two points");
  }
  const double half = model.k + 4.0 * model.sigma;
  return Eigen::VectorXd::LinSpaced(n, -half, half);
}

double GameConfig::default_learning_rate(const Model& model, int grid_size,
                                         int iterations) {
  if (grid_size < 1 || iterations < 1) {
    throw DomainError(
        "GameConfig::default_learning_rate: need grid_size >= 1 and "
        "iterations >= 1");
  }
  const double range = model.k + 8.0 * model.sigma;
  return std::sqrt(8.0 * std::log(static_cast<double>(std::max(grid_size, 2))) /
                   iterations) /
         range;
}

void GameConfig::validate() const {
  const auto n = threshold_grid.size();
  if (n == 0) {
    throw DomainError("GameConfig: threshold_grid is empty");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(threshold_grid[i])) {
      throw DomainError("GameConfig: threshold_grid has a non-finite entry");
    }
    if (i > 0 && !(threshold_grid[i] > threshold_grid[i - 1])) {
      throw DomainError("GameConfig: threshold_grid must be strictly increasing");
    }
  }
  // A single threshold is the degenerate one-pure-strategy game and is
  // exempt from the span requirement; richer grids must cover the window in
  // which the exact rule and nature's serious states live.
  if (n >= 2) {
    const double half = model.k + 4.0 * model.sigma;
    const double slack = 1e-9 * std::max(1.0, half);
    if (threshold_grid[0] > -half + slack ||
        threshold_grid[n - 1] < half - slack) {
      throw DomainError(
          "GameConfig: threshold_grid must span [-(k+4*sigma), k+4*sigma]");
    }
  }
  if (!std::isfinite(learning_rate) || learning_rate <= 0.0) {
    throw DomainError("GameConfig: learning_rate must be positive");
  }
  if (iterations < 1) {
    throw DomainError("GameConfig: iterations must be >= 1");
  }
  if (br_grid_n < 2) {
    throw DomainError("GameConfig: br_grid_n must be >= 2");
  }
}

double payoff(double threshold, const NatureState& state, double sigma) {
  if (!(sigma > 0.0)) {
    throw DomainError("payoff: sigma must be positive");
  }
  const double expected = std_normal_cdf((state.mu - threshold) / sigma);
  return state.mu_star * ((state.mu_star > 0.0 ? 1.0 : 0.0) - expected);
}

GameSolution solve(const GameConfig& config) {
  config.validate();
  const Model& model = config.model;
  const double k = model.k;
  const Eigen::VectorXd& grid = config.threshold_grid;
  const auto n_thresholds = grid.size();
  const int n_states = config.br_grid_n;
  const double range = k + 8.0 * model.sigma;  // payoff cap and state window

  // Expected treatment of every pure threshold rule at every candidate mu:
  // response(j, i) = Phi((mu_j - t_i) / sigma). A single matrix-vector
  // product per iteration then prices the whole state grid against the
  // current mixture.
  const Eigen::VectorXd mu_grid =
      Eigen::VectorXd::LinSpaced(n_states, -range, range);
  Eigen::MatrixXd response(n_states, n_thresholds);
  parallel_for(static_cast<std::size_t>(n_states), [&](std::size_t j) {
    const auto row = static_cast<Eigen::Index>(j);
    for (Eigen::Index i = 0; i < n_thresholds; ++i) {
      response(row, i) =
          std_normal_cdf((mu_grid[row] - grid[i]) / model.sigma);
    }
  });

  Eigen::VectorXd weights =
      Eigen::VectorXd::Constant(n_thresholds, 1.0 / static_cast<double>(n_thresholds));
  Eigen::VectorXd weight_sum = Eigen::VectorXd::Zero(n_thresholds);
  Eigen::VectorXd payoff_sum = Eigen::VectorXd::Zero(n_thresholds);

  const auto averaged_rule = [&](int t) {
    return DecisionRule(
        MixedThreshold(grid, weight_sum / static_cast<double>(t)));
  };
  const auto upper_bound_of = [&](const DecisionRule& rule) {
    return nature_best_response(rule, model, n_states).worst_regret;
  };

  std::vector<GameCheckpoint> history;
  double last_upper = std::numeric_limits<double>::infinity();
  const auto checkpoint = [&](int t) {
    const double lower = payoff_sum.minCoeff() / t;
    const double upper = upper_bound_of(averaged_rule(t));
    history.push_back(
        {t, lower, upper, upper - lower, upper > last_upper + 1e-6});
    last_upper = upper;
  };

  for (int t = 1; t <= config.iterations; ++t) {
    weight_sum += weights;

    // Nature's best response on the state grid: for each mu the inner max
    // over mu_star sits at mu+k, mu-k or 0.
    const Eigen::VectorXd expected = response * weights;
    Eigen::Index best_j = 0;
    double best_regret = -1.0;
    double best_mu_star = 0.0;
    for (Eigen::Index j = 0; j < n_states; ++j) {
      const double mu = mu_grid[j];
      double r = 0.0;
      double mu_star = std::clamp(0.0, mu - k, mu + k);
      if (mu + k > 0.0) {
        const double cand = (mu + k) * (1.0 - expected[j]);
        if (cand > r) {
          r = cand;
          mu_star = mu + k;
        }
      }
      if (mu - k < 0.0) {
        const double cand = -(mu - k) * expected[j];
        if (cand > r) {
          r = cand;
          mu_star = mu - k;
        }
      }
      if (r > best_regret) {
        best_regret = r;
        best_j = j;
        best_mu_star = mu_star;
      }
    }

    // Regret of every pure threshold against the chosen state, clipped to
    // the range bound before exponentiation.
    const double mu_star = best_mu_star;
    Eigen::ArrayXd payoffs =
        mu_star * ((mu_star > 0.0 ? 1.0 : 0.0) -
                   response.row(best_j).transpose().array());
    payoffs = payoffs.cwiseMax(0.0).cwiseMin(range);
    payoff_sum += payoffs.matrix();

    weights =
        (weights.array() * (-config.learning_rate * payoffs).exp()).matrix();
    weights /= weights.sum();

    if (t % 100 == 0) {
      checkpoint(t);
    }
  }

  if (history.empty() || history.back().iteration != config.iterations) {
    checkpoint(config.iterations);
  }
  return GameSolution{averaged_rule(config.iterations), history.back().lower,
                      history.back().upper, config.iterations,
                      std::move(history)};
}

double rule_distance(const DecisionRule& a, const DecisionRule& b,
                     const Eigen::Ref<const Eigen::VectorXd>& grid) {
  if (grid.size() == 0) {
    throw DomainError("rule_distance: grid is empty");
  }
  double dist = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    dist = std::max(dist, std::abs(a(grid[i]) - b(grid[i])));
  }
  return dist;
}

}  // namespace mmrkit
