#pragma once

namespace flatten {

// Real branches of the Lambert W function, the inverse of w -> w*exp(w).
enum class WBranch {
  principal,  // W_0:  defined for a >= -1/e, value >= -1
  minus_one,  // W_-1: defined for -1/e <= a < 0, value <= -1
};

inline constexpr double kInvE = 0.36787944117144232160;  // 1/e

// Evaluates the requested branch at `a`. The residual |w*exp(w) - a| is kept
// below 1e-12 * max(1, |a|). Both branches return exactly -1 at the branch
// point a = -1/e. Throws std::domain_error outside the branch domain; on the
// -1 branch, arguments within 1e-300 of zero are rejected as well (the value
// there is a near-infinite magnitude no caller legitimately needs).
double lambert_w(WBranch branch, double a);

}  // namespace flatten
