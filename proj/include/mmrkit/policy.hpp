#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmrkit/mmr.hpp"
#include "mmrkit/model.hpp"

namespace mmrkit {

// One covariate cell of the population losing eligibility: recentred ability
// x1 in [0, delta), recentred wealth x2 >= 0, its empirical mass, and the
// estimated probability-scale effect at the boundary projection (0, x2).
struct Unit {
  double x1;
  double x2;
  double weight;
  double tau_hat_proj;
};

// Point-identified effect estimate on the eligibility boundary.
struct BoundaryAnchor {
  double x2;
  double tau_hat;
};

// Distance used when extending boundary estimates into the region.
enum class Norm { Euclidean, Max, OneNorm };

const char* to_string(Norm norm);
Norm parse_norm(const std::string& text);  // "euclidean" | "max" | "one"

// Full problem data: covariate cells plus the scalar parameters — threshold
// increase delta, per-assignment cost c and benefit b (currency), Lipschitz
// constant C of the effect in ability distance, and signal variance V.
struct PolicyInput {
  std::vector<Unit> units;
  double delta;
  double c;
  double b;
  double C;
  double V;

  void validate() const;  // throws DomainError / ConstraintError
};

// Scalar parameters as they arrive from a config file or CLI flags, any
// subset present; merge CLI over config, then require completeness.
struct PolicyScalars {
  std::optional<double> delta;
  std::optional<double> c;
  std::optional<double> b;
  std::optional<double> C;
  std::optional<double> V;
  std::optional<double> mu_hat_override;
  std::optional<std::string> anchors_path;
  std::optional<Norm> norm;

  // Fields set in `overrides` win; unset fields fall back to *this.
  PolicyScalars merged_with(const PolicyScalars& overrides) const;
  // Throws MissingParameterError unless delta, c, b, C and V are all set.
  void require_complete() const;
};

struct PolicyAssessment {
  double mu_hat;  // identified effect (currency)
  double k;       // identification half-width (currency)
  double sigma;   // sqrt(V)
  double action;  // treatment probability of the optimal rule at mu_hat
  Regime regime;
  std::optional<double> kstar;     // randomized regime only
  std::optional<double> tight_lo;  // filled by callers that ran tight_bounds
  std::optional<double> tight_hi;
};

// c - b * weighted mean of tau_hat_proj.
double identified_effect(const PolicyInput& input);

// b * C * weighted mean of x1 (= distance to the boundary projection).
double identification_width(const PolicyInput& input);

// sigma = sqrt(V), mu_hat from the data (or the override), k from the data;
// regime and action from the optimal rule. Cross-checks the data-level
// non-randomization inequality b*C*mean(x1) <= sqrt(V*pi/2) against regime.
PolicyAssessment assess(const PolicyInput& input,
                        std::optional<double> mu_hat_override = std::nullopt);

// Effect bounds from extremal Lipschitz extensions of the anchor estimates:
// per unit, tau_upper(x) = min(1, min over anchors of tau_hat + C*dist) and
// tau_lower(x) = max(-1, max over anchors of tau_hat - C*dist); returns
// (c - b*avg(tau_upper), c - b*avg(tau_lower)). Throws ConstraintError when
// the anchors are mutually inconsistent with the Lipschitz constant.
std::pair<double, double> tight_bounds(const PolicyInput& input,
                                       const std::vector<BoundaryAnchor>& anchors,
                                       Norm norm = Norm::Euclidean);

// Data file: header `x1,x2,weight,tau_hat_proj`, comma-separated, one unit
// per row. Scalars must be complete. Rows violating the region or sign
// constraints are rejected with their file line number.
PolicyInput ingest(const std::string& data_path, const PolicyScalars& scalars);

// Config file: `key = value` lines, `#` comments. Keys: delta, c, b, C, V,
// mu_hat (alias mu_hat_override), anchors (file path), norm.
PolicyScalars load_config(const std::string& path);

// Anchors file: header `x2,tau_hat`, comma-separated; x2 values distinct.
std::vector<BoundaryAnchor> load_anchors(const std::string& path);

}  // namespace mmrkit
