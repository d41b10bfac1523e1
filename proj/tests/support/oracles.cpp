#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace oracles {
namespace {

// erf(z) for |z| <= 3 by its Taylor series, in long double.
long double erf_series(long double z) {
  const long double z2 = z * z;
  long double term = z;
  long double sum = z;
  for (int n = 1; n < 200; ++n) {
    term *= -z2 / n;
    const long double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(add) < 1e-22L * std::fabs(sum)) break;
  }
  return sum * 2.0L / std::sqrt(3.14159265358979323846264338327950288L);
}

// erfc(z) for z >= 3 by the Lentz continued fraction
//   erfc(z) = exp(-z^2)/(z*sqrt(pi)) * 1/(1+ 1/(2z^2)/(1+ 2/(2z^2)/(1+ ...)))
long double erfc_cf(long double z) {
  const long double tiny = 1e-30L;
  long double f = tiny, c = f, d = 0.0L;
  const long double two_z2 = 2.0L * z * z;
  for (int n = 0; n < 400; ++n) {
    const long double a = n == 0 ? 1.0L : n / two_z2;
    const long double b = 1.0L;
    d = b + a * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0L / d;
    const long double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0L) < 1e-20L) break;
  }
  const long double pi = 3.14159265358979323846264338327950288L;
  return std::exp(-z * z) / (z * std::sqrt(pi)) * f;
}

}  // namespace

double phi_reference(double z) {
  // Phi(z) = (1 + erf(z/sqrt(2)))/2; pick the stable route per region.
  const long double x = static_cast<long double>(z) / std::sqrt(2.0L);
  if (x >= 3.0L) return static_cast<double>(1.0L - 0.5L * erfc_cf(x));
  if (x <= -3.0L) return static_cast<double>(0.5L * erfc_cf(-x));
  return static_cast<double>(0.5L + 0.5L * erf_series(x));
}

double quantile_reference(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: p in (0,1)");
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi_reference(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double kstar_bisection(double k, double sigma) {
  const auto g = [&](double t) {
    return t / (2.0 * k) - 0.5 + phi_reference(-t / sigma);
  };
  // Scan inward from k for the sign change; g(k) > 0 and g crosses zero
  // once on (0, k) in the randomized regime.
  double hi = k;
  double lo = k;
  const int steps = 4096;
  for (int i = 1; i <= steps; ++i) {
    const double t = k * (1.0 - static_cast<double>(i) / steps);
    if (t <= 0.0) break;
    if (g(t) < 0.0) {
      lo = t;
      break;
    }
    hi = t;
  }
  if (g(lo) >= 0.0) throw std::runtime_error("kstar_bisection: no sign change");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

double simpson_rule(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double fa,
                   double b, double fb, double m, double fm, double whole,
                   double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_rule(a, fa, m, fm, flm);
  const double right = simpson_rule(m, fm, b, fb, frm);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

double simpson(const std::function<double(double)>& f, double lo, double hi,
               double tol) {
  const double m = 0.5 * (lo + hi);
  const double flo = f(lo), fhi = f(hi), fm = f(m);
  const double whole = simpson_rule(lo, flo, hi, fhi, fm);
  return simpson_rec(f, lo, flo, hi, fhi, m, fm, whole, tol, 48);
}

std::pair<double, double> grid_max(const std::function<double(double)>& f,
                                   double lo, double hi, int n) {
  double best_x = lo, best = f(lo);
  for (int i = 1; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return {best_x, best};
}

std::pair<double, double> pwl_mc(double lo, double hi, double mu, double sigma,
                                 int draws, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(mu, sigma);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = noise(gen);
    double d;
    if (x <= lo) {
      d = 0.0;
    } else if (x >= hi) {
      d = 1.0;
    } else {
      d = (x - lo) / (hi - lo);
    }
    sum += d;
    sum_sq += d * d;
  }
  const double mean = sum / draws;
  const double var = (sum_sq / draws - mean * mean) / (draws - 1);
  return {mean, std::sqrt(std::max(var, 0.0))};
}

StepRule random_step_rule(double span, int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  StepRule rule;
  rule.thresholds.resize(n);
  rule.weights.resize(n);
  // Strictly increasing thresholds: sorted uniforms plus a spacing floor.
  std::vector<double> raw(n);
  for (double& r : raw) r = (2.0 * unit(gen) - 1.0) * span;
  std::sort(raw.begin(), raw.end());
  for (int i = 0; i < n; ++i) {
    rule.thresholds[i] = raw[i] + i * 1e-9 * std::max(1.0, span);
  }
  double total = 0.0;
  for (double& w : rule.weights) {
    w = -std::log(1.0 - unit(gen));  // exponential, so all weights positive
    total += w;
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

}  // namespace oracles
