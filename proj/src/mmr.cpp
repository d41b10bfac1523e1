#include "mmrkit/mmr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mmrkit/numerics.hpp"

namespace mmrkit {

namespace {

const double kSqrtPiOver2 = std::sqrt(std::numbers::pi / 2.0);
const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

// Inner maximum over mu_star in [mu-k, mu+k] at fixed mu. Regret is piecewise
// linear in mu_star with a kink at 0, so only the endpoints and the kink can
// attain it.
struct InnerMax {
  double value;
  double mu_star;
};

InnerMax inner_max(double mu, double k, double expected) {
  InnerMax best{0.0, std::clamp(0.0, mu - k, mu + k)};
  const double up = mu + k;
  if (up > 0.0) {
    const double r = up * (1.0 - expected);
    if (r > best.value) best = {r, up};
  }
  const double down = mu - k;
  if (down < 0.0) {
    const double r = -down * expected;
    if (r > best.value) best = {r, down};
  }
  return best;
}

}  // namespace

const char* to_string(Regime r) {
  return r == Regime::ThresholdOptimal ? "ThresholdOptimal" : "RandomizedOptimal";
}

Regime regime(const Model& model) {
  return model.k <= model.sigma * kSqrtPiOver2 ? Regime::ThresholdOptimal
                                               : Regime::RandomizedOptimal;
}

double kstar_residual(const Model& model, double t) {
  return t / (2.0 * model.k) - 0.5 + std_normal_cdf(-t / model.sigma);
}

double kstar(const Model& model) {
  if (regime(model) != Regime::RandomizedOptimal) {
    throw RegimeError(
        "kstar: k <= sigma*sqrt(pi/2); the threshold rule is optimal and "
        "kstar is undefined");
  }
  const double k = model.k;
  const double sigma = model.sigma;
  // Analytic minimizer of g; well defined exactly in this regime, and needed
  // because g also has a root at 0.
  const double log_arg = std::max(std::log(2.0 * k / (sigma * kSqrt2Pi)), 0.0);
  double t_min = sigma * std::sqrt(2.0 * log_arg);
  if (!(t_min > 0.0)) t_min = sigma * 1e-8;  // k at the regime boundary up to rounding
  const auto g = [&](double t) { return kstar_residual(model, t); };
  const Tolerances tol{std::numeric_limits<double>::epsilon() * k, 1e-16, 200};
  return find_root(g, {t_min, k}, tol);
}

DecisionRule mmr_rule(const Model& model) {
  if (regime(model) == Regime::ThresholdOptimal) {
    return Threshold{0.0};
  }
  const double ks = kstar(model);
  return PiecewiseLinear{-ks, ks};
}

double expected_treatment(const DecisionRule& rule, double mu, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma)) {
    throw DomainError("expected_treatment: need finite mu and sigma > 0");
  }
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Threshold>) {
          return std_normal_cdf((mu - r.t) / sigma);
        } else if constexpr (std::is_same_v<T, MixedThreshold>) {
          double e = 0.0;
          for (Eigen::Index i = 0; i < r.thresholds().size(); ++i) {
            e += r.weights()[i] * std_normal_cdf((mu - r.thresholds()[i]) / sigma);
          }
          return std::clamp(e, 0.0, 1.0);
        } else {
          // Integrate the affine segment against the Gaussian density:
          //   E[d] = [(mu-lo)(Phi(b)-Phi(a)) + sigma(phi(a)-phi(b))]/(hi-lo)
          //          + 1 - Phi(b),
          // with a = (lo-mu)/sigma, b = (hi-mu)/sigma.
          const double a = (r.lo - mu) / sigma;
          const double b = (r.hi - mu) / sigma;
          const double ramp = (mu - r.lo) * (std_normal_cdf(b) - std_normal_cdf(a)) +
                              sigma * (std_normal_pdf(a) - std_normal_pdf(b));
          const double e = ramp / (r.hi - r.lo) + 1.0 - std_normal_cdf(b);
          return std::clamp(e, 0.0, 1.0);
        }
      },
      rule.variant());
}

double regret(const DecisionRule& rule, const NatureState& state, double sigma) {
  const double e = expected_treatment(rule, state.mu, sigma);
  const double oracle = state.mu_star > 0.0 ? 1.0 : 0.0;
  return state.mu_star * (oracle - e);
}

RegretReport nature_best_response(const DecisionRule& rule, const Model& model,
                                  int grid_n, double window_sigmas) {
  if (grid_n < 3) throw DomainError("nature_best_response: grid_n must be >= 3");
  if (!(window_sigmas > 0.0)) {
    throw DomainError("nature_best_response: window_sigmas must be > 0");
  }
  const double w = model.k + window_sigmas * model.sigma;

  const auto profile = [&](double mu) {
    const double e = expected_treatment(rule, mu, model.sigma);
    return inner_max(mu, model.k, e).value;
  };

  std::vector<std::pair<double, double>> trace;
  trace.reserve(static_cast<std::size_t>(grid_n));
  const double step = 2.0 * w / static_cast<double>(grid_n - 1);
  for (int i = 0; i < grid_n; ++i) {
    const double mu = (i == grid_n - 1) ? w : -w + step * i;
    trace.emplace_back(mu, profile(mu));
  }

  const auto best = maximize_1d(profile, -w, w, grid_n,
                                Tolerances::for_interval(-w, w));
  const double e_best = expected_treatment(rule, best.argmax, model.sigma);
  const InnerMax inner = inner_max(best.argmax, model.k, e_best);
  return RegretReport{inner.value,
                      NatureState{best.argmax, inner.mu_star, model},
                      std::move(trace)};
}

}  // namespace mmrkit
