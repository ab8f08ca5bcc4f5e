#include "flatten/lambert_w.hpp"

#include <cmath>
#include <stdexcept>

// Halley iteration on f(w) = w*exp(w) - a, started from a branch-specific
// initial guess: the series in p = sqrt(2(e*a + 1)) near the branch point
// (Corless et al. 4.22), and log-based asymptotics elsewhere. Cubic
// convergence brings every start below 1e-15 relative step within a handful
// of iterations.

namespace flatten {
namespace {

constexpr int kMaxIter = 50;
constexpr double kRelStep = 1e-15;

double halley(double a, double w) {
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - a;
    if (f == 0.0) return w;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - f * (w + 2.0) / (2.0 * wp1);
    if (denom == 0.0) return w;
    const double next = w - f / denom;
    if (std::abs(next - w) <= kRelStep * std::abs(next)) return next;
    w = next;
  }
  return w;
}

// Expansion around the branch point; p > 0 selects the principal branch,
// p < 0 the -1 branch.
double branch_point_series(double p) {
  return -1.0 +
         p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
}

double guess_principal(double a) {
  if (a < -0.25) {
    return branch_point_series(std::sqrt(2.0 * (std::exp(1.0) * a + 1.0)));
  }
  if (a < 3.0) return std::log1p(a);
  const double l1 = std::log(a);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

double guess_minus_one(double a) {
  if (a < -0.27) {
    return branch_point_series(-std::sqrt(2.0 * (std::exp(1.0) * a + 1.0)));
  }
  // De Bruijn asymptotics toward 0^-.
  const double l1 = std::log(-a);
  const double l2 = std::log(-l1);
  return l1 - l2 + l2 / l1 + l2 * (l2 - 2.0) / (2.0 * l1 * l1);
}

}  // namespace

double lambert_w(WBranch branch, double a) {
  if (std::isnan(a)) throw std::domain_error("lambert_w: argument is NaN");
  if (branch == WBranch::principal) {
    if (a < -kInvE) {
      throw std::domain_error("lambert_w: principal branch needs a >= -1/e");
    }
    if (a == -kInvE) return -1.0;
    if (a == 0.0) return 0.0;
    return halley(a, guess_principal(a));
  }
  if (a < -kInvE || a >= 0.0) {
    throw std::domain_error("lambert_w: -1 branch needs -1/e <= a < 0");
  }
  if (a == -kInvE) return -1.0;
  if (a > -1e-300) {
    throw std::domain_error("lambert_w: -1 branch argument underflows near 0");
  }
  return halley(a, guess_minus_one(a));
}

}  // namespace flatten
