#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "flatten/lambert_w.hpp"
#include "oracles.hpp"

using flatten::kInvE;
using flatten::lambert_w;
using flatten::WBranch;

TEST_SUITE("lambert_w") {

TEST_CASE("branch point returns exactly -1 on both branches") {
  CHECK(lambert_w(WBranch::principal, -kInvE) == -1.0);
  CHECK(lambert_w(WBranch::minus_one, -kInvE) == -1.0);
}

TEST_CASE("principal branch at zero") {
  CHECK(lambert_w(WBranch::principal, 0.0) == 0.0);
}

TEST_CASE("spot value on the -1 branch against the bisection oracle") {
  const double a = -0.35968;
  const double w = lambert_w(WBranch::minus_one, a);
  const double oracle = oracles::lambert_minus_one_bisect(a);
  CHECK(w == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(w == doctest::Approx(-1.228).epsilon(1e-3));
}

TEST_CASE("round trip over both branch domains") {
  const int n = 10000;
  // -1 branch: arguments swept across [-1/e, 0), denser near both ends via a
  // mix of linear and log spacing.
  for (int k = 0; k < n; ++k) {
    const double frac = (k + 0.5) / n;
    const double a_lin = -kInvE + frac * (kInvE - 1e-9);
    const double w = lambert_w(WBranch::minus_one, a_lin);
    CHECK(w <= -1.0);
    CHECK(std::abs(w * std::exp(w) - a_lin) <= 1e-10);

    const double a_log = -kInvE * std::pow(10.0, -12.0 * frac);
    const double wl = lambert_w(WBranch::minus_one, a_log);
    CHECK(std::abs(wl * std::exp(wl) - a_log) <= 1e-10);
  }
  // principal branch over [-1/e, 20].
  for (int k = 0; k < n; ++k) {
    const double a = -kInvE + (k + 0.5) / n * (20.0 + kInvE);
    const double w = lambert_w(WBranch::principal, a);
    CHECK(w >= -1.0);
    CHECK(std::abs(w * std::exp(w) - a) <= 1e-10);
  }
}

TEST_CASE("relative residual for large principal arguments") {
  for (double a : {1e2, 1e4, 1e6, 1e8, 1e10}) {
    const double w = lambert_w(WBranch::principal, a);
    CHECK(std::abs(w * std::exp(w) - a) <= 1e-12 * a);
  }
}

TEST_CASE("branch ordering on (-1/e, 0)") {
  for (int k = 1; k < 500; ++k) {
    const double a = -kInvE + k / 500.0 * (kInvE - 1e-6);
    CHECK(lambert_w(WBranch::principal, a) > lambert_w(WBranch::minus_one, a));
  }
}

TEST_CASE("-1 branch is strictly decreasing on (-1/e, 0)") {
  double prev = lambert_w(WBranch::minus_one, -kInvE + 1e-9);
  for (int k = 1; k < 2000; ++k) {
    const double a = -kInvE + k / 2000.0 * (kInvE - 1e-9);
    const double w = lambert_w(WBranch::minus_one, a);
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(lambert_w(WBranch::principal, -kInvE - 1e-6),
                  std::domain_error);
  CHECK_THROWS_AS(lambert_w(WBranch::minus_one, -kInvE - 1e-6),
                  std::domain_error);
  CHECK_THROWS_AS(lambert_w(WBranch::minus_one, 0.0), std::domain_error);
  CHECK_THROWS_AS(lambert_w(WBranch::minus_one, 0.1), std::domain_error);
  CHECK_THROWS_AS(lambert_w(WBranch::minus_one, -1e-301), std::domain_error);
}

}  // TEST_SUITE
