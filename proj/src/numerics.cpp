#include "mmrkit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mmrkit {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_tolerances(const Tolerances& tol) {
  if (!(tol.abs_x > 0.0) || !(tol.abs_f > 0.0) || tol.max_iter < 1) {
    throw DomainError("Tolerances: need abs_x > 0, abs_f > 0, max_iter >= 1");
  }
}

}  // namespace

Tolerances Tolerances::for_interval(double lo, double hi) {
  return {1e-10 * std::max(1.0, std::abs(hi - lo)), 1e-12, 200};
}

double std_normal_cdf(double z) {
  if (!std::isfinite(z)) {
    throw DomainError("std_normal_cdf: non-finite input");
  }
  return std::clamp(0.5 * std::erfc(-z * kInvSqrt2), 0.0, 1.0);
}

double std_normal_pdf(double z) {
  if (!std::isfinite(z)) {
    throw DomainError("std_normal_pdf: non-finite input");
  }
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double find_root(const std::function<double(double)>& f, Bracket bracket,
                 const Tolerances& tol) {
  check_tolerances(tol);
  double a = bracket.lo;
  double b = bracket.hi;
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw DomainError("find_root: bracket requires finite lo < hi");
  }
  double fa = f(a);
  double fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) {
    throw DomainError("find_root: f is non-finite at a bracket end");
  }
  if (std::abs(fa) <= tol.abs_f) return a;
  if (std::abs(fb) <= tol.abs_f) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw BracketError("find_root: no sign change across bracket");
  }

  // Brent's method (van Wijngaarden-Dekker-Brent): b is the current best
  // iterate, [b, c] always brackets the root.
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol.abs_x;
    const double xm = 0.5 * (c - b);
    if (std::abs(fb) <= tol.abs_f || std::abs(xm) <= tol1) {
      return b;
    }
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Secant (two points) or inverse quadratic (three) step.
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    if (std::abs(d) > tol1) {
      b += d;
    } else {
      b += (xm >= 0.0 ? tol1 : -tol1);
    }
    fb = f(b);
    if (!std::isfinite(fb)) {
      throw DomainError("find_root: f is non-finite inside the bracket");
    }
  }
  const double best = std::abs(fb) <= std::abs(fc) ? b : c;
  const double fbest = std::abs(fb) <= std::abs(fc) ? fb : fc;
  throw ConvergenceError("find_root: max_iter exceeded", best, fbest);
}

MaxResult maximize_1d(const std::function<double(double)>& f, double lo,
                      double hi, int grid_n, const Tolerances& tol) {
  check_tolerances(tol);
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw DomainError("maximize_1d: degenerate interval (need lo < hi)");
  }
  if (grid_n < 3) {
    throw DomainError("maximize_1d: grid_n must be >= 3");
  }

  const double step = (hi - lo) / static_cast<double>(grid_n - 1);
  int best_i = 0;
  double best_x = lo;
  double best_f = f(lo);
  for (int i = 1; i < grid_n; ++i) {
    const double x = (i == grid_n - 1) ? hi : lo + step * i;
    const double fx = f(x);
    if (fx > best_f) {  // strict: ties keep the smallest argmax
      best_i = i;
      best_x = x;
      best_f = fx;
    }
  }
  const MaxResult grid_best{best_x, best_f};

  // Golden-section refinement on the two grid cells around the best point.
  double a = (best_i == 0) ? lo : lo + step * (best_i - 1);
  double b = (best_i == grid_n - 1) ? hi : lo + step * (best_i + 1);
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  MaxResult refined = grid_best;
  auto consider = [&refined](double x, double fx) {
    if (fx > refined.max) refined = {x, fx};
  };
  consider(x1, f1);
  consider(x2, f2);
  for (int iter = 0; iter < tol.max_iter && (b - a) > tol.abs_x; ++iter) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
      consider(x2, f2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
      consider(x1, f1);
    }
  }
  return refined;
}

double uniform_draw(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer on the counter stream seed + (index+1)*gamma.
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace mmrkit
