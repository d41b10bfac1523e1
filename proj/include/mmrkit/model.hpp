#pragma once

#include <cmath>

#include "mmrkit/errors.hpp"

namespace mmrkit {

// The statistical game's primitives: identification half-width k and signal
// standard deviation sigma, both in welfare units.
struct Model {
  double k;
  double sigma;

  Model(double k_, double sigma_) : k(k_), sigma(sigma_) {
    if (!std::isfinite(k) || !std::isfinite(sigma) || k < 0.0 || sigma <= 0.0) {
      throw DomainError("Model: need finite k >= 0 and sigma > 0");
    }
  }
};

// Nature's pure strategy: identified effect mu and true effect mu_star with
// |mu_star - mu| <= k for the ambient model.
struct NatureState {
  double mu;
  double mu_star;

  NatureState(double mu_, double mu_star_, const Model& model)
      : mu(mu_), mu_star(mu_star_) {
    if (!std::isfinite(mu) || !std::isfinite(mu_star)) {
      throw DomainError("NatureState: non-finite state");
    }
    const double slack =
        1e-12 * std::max({1.0, std::abs(mu), std::abs(mu_star), model.k});
    if (std::abs(mu_star - mu) > model.k + slack) {
      throw DomainError("NatureState: |mu_star - mu| exceeds the model's k");
    }
  }
};

}  // namespace mmrkit
