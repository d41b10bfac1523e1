#include "mmrkit/rule.hpp"

#include <algorithm>
#include <cmath>

#include "mmrkit/errors.hpp"

namespace mmrkit {

MixedThreshold::MixedThreshold(Eigen::VectorXd thresholds,
                               Eigen::VectorXd weights)
    : thresholds_(std::move(thresholds)), weights_(std::move(weights)) {
  const auto n = thresholds_.size();
  if (n == 0 || weights_.size() != n) {
    throw DomainError("MixedThreshold: need matching nonempty threshold/weight lists");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(thresholds_[i]) || !std::isfinite(weights_[i]) ||
        weights_[i] < 0.0) {
      throw DomainError("MixedThreshold: weights must be finite and >= 0");
    }
    if (i > 0 && !(thresholds_[i - 1] < thresholds_[i])) {
      throw DomainError("MixedThreshold: thresholds must be strictly increasing");
    }
  }
  const double total = weights_.sum();
  if (std::abs(total - 1.0) > 1e-9) {
    throw DomainError("MixedThreshold: weights must sum to 1 within 1e-9");
  }
  weights_ /= total;
  prefix_.resize(n + 1);
  prefix_[0] = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) prefix_[i + 1] = prefix_[i] + weights_[i];
}

double MixedThreshold::evaluate(double mu_hat) const {
  const double* begin = thresholds_.data();
  const double* end = begin + thresholds_.size();
  const auto below = std::lower_bound(begin, end, mu_hat) - begin;  // t >= mu_hat
  const auto at_or_below = std::upper_bound(begin, end, mu_hat) - begin;
  // Thresholds strictly below mu_hat contribute fully, one exactly at mu_hat
  // contributes half.
  const double d = prefix_[below] + 0.5 * (prefix_[at_or_below] - prefix_[below]);
  return std::clamp(d, 0.0, 1.0);
}

DecisionRule::DecisionRule(Threshold t) : variant_(t) {
  if (!std::isfinite(t.t)) throw DomainError("Threshold: non-finite threshold");
}

DecisionRule::DecisionRule(PiecewiseLinear pl) : variant_(pl) {
  if (!std::isfinite(pl.lo) || !std::isfinite(pl.hi) || !(pl.lo < pl.hi)) {
    throw DomainError("PiecewiseLinear: need finite lo < hi");
  }
}

DecisionRule::DecisionRule(MixedThreshold mt) : variant_(std::move(mt)) {}

double DecisionRule::evaluate(double mu_hat) const {
  return std::visit(
      [mu_hat](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Threshold>) {
          if (mu_hat > r.t) return 1.0;
          if (mu_hat < r.t) return 0.0;
          return 0.5;
        } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
          return std::clamp((mu_hat - r.lo) / (r.hi - r.lo), 0.0, 1.0);
        } else {
          return r.evaluate(mu_hat);
        }
      },
      variant_);
}

double evaluate_rule(const DecisionRule& rule, double mu_hat) {
  if (!std::isfinite(mu_hat)) throw DomainError("evaluate_rule: non-finite signal");
  return rule.evaluate(mu_hat);
}

}  // namespace mmrkit
