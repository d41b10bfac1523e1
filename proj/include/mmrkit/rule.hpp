#pragma once

#include <Eigen/Core>
#include <variant>

namespace mmrkit {

// Nonrandomized rule 1{mu_hat > t}; evaluates to 0.5 exactly at the threshold
// so that the symmetric rules below satisfy d(-x) = 1 - d(x) everywhere.
struct Threshold {
  double t;
};

// 0 below lo, affine from 0 to 1 on [lo, hi], 1 above. Requires lo < hi.
struct PiecewiseLinear {
  double lo;
  double hi;
};

// Probability mixture of threshold rules. Thresholds strictly increasing,
// weights nonnegative and summing to 1 within 1e-9 (stored renormalized).
class MixedThreshold {
 public:
  MixedThreshold(Eigen::VectorXd thresholds, Eigen::VectorXd weights);

  const Eigen::VectorXd& thresholds() const noexcept { return thresholds_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  double evaluate(double mu_hat) const;

 private:
  Eigen::VectorXd thresholds_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd prefix_;  // prefix_[i] = sum of weights_[0..i-1]
};

// A treatment rule: a nondecreasing mapping from the signal to a treatment
// probability in [0, 1].
class DecisionRule {
 public:
  using Variant = std::variant<Threshold, PiecewiseLinear, MixedThreshold>;

  DecisionRule(Threshold t);                  // NOLINT(google-explicit-constructor)
  DecisionRule(PiecewiseLinear pl);           // NOLINT(google-explicit-constructor)
  DecisionRule(MixedThreshold mt);            // NOLINT(google-explicit-constructor)

  double operator()(double mu_hat) const { return evaluate(mu_hat); }
  double evaluate(double mu_hat) const;

  const Variant& variant() const noexcept { return variant_; }
  template <typename T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&variant_);
  }

 private:
  Variant variant_;
};

// Treatment probability of `rule` at the observed signal.
double evaluate_rule(const DecisionRule& rule, double mu_hat);

}  // namespace mmrkit
