#pragma once

// Independent oracles used by the unit and acceptance suites. Everything in
// this header recomputes expected values from first principles and stays off
// the code paths it is used to check.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace oracles {

// --- Lambert W by bisection on w*exp(w) = a ------------------------------

inline double lambert_minus_one_bisect(double a) {
  // w*exp(w) is decreasing from 0^- to -1/e on (-inf, -1].
  double lo = -800.0, hi = -1.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) > a) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15 * std::abs(hi)) break;
  }
  return 0.5 * (lo + hi);
}

inline double lambert_principal_bisect(double a) {
  double lo = -1.0, hi = 700.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) < a) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

// --- SIR peak and optimal beta, on a private integrator ------------------

// Max infected fraction of the constant-parameter SIR flow from
// (1 - i0, i0); local RK4, independent of the library integrator.
inline double sir_peak(double i0, double beta, double gamma,
                              double dt = 0.005) {
  double s = 1.0 - i0, i = i0;
  double max_i = i;
  const double s_turn = gamma / beta;
  if (s <= s_turn) return i0;
  double t = 0.0;
  while (s > s_turn && i > 1e-14 && t < 1e6) {
    auto f = [beta, gamma](double sv, double iv) {
      return std::array<double, 2>{-beta * iv * sv, beta * iv * sv - gamma * iv};
    };
    const auto k1 = f(s, i);
    const auto k2 = f(s + 0.5 * dt * k1[0], i + 0.5 * dt * k1[1]);
    const auto k3 = f(s + 0.5 * dt * k2[0], i + 0.5 * dt * k2[1]);
    const auto k4 = f(s + dt * k3[0], i + dt * k3[1]);
    s += dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    i += dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    max_i = std::max(max_i, i);
    t += dt;
  }
  return max_i;
}

// Largest constant beta whose peak stays at i_th, found by bisection over
// the integrated peak.
inline double optimal_beta_bisect(double i0, double i_th, double gamma) {
  double lo = gamma / (1.0 - i_th);  // peak at t = 0, value i0 <= i_th
  double hi = lo;
  while (sir_peak(i0, hi, gamma) < i_th) hi *= 2.0;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (sir_peak(i0, mid, gamma) < i_th) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// --- PD-form tracking law through the coordinate change ------------------

// The same control action written in (x, xdot) coordinates with
// x = -(i + s)/gamma, evaluated with PD gains (alpha_p, alpha_d). The
// reference acceleration comes from the transformed dynamics
// xdd = -(gamma x + xd) xd beta - gamma xd.
inline double pd_form_beta(double s, double i, double s_ref, double i_ref,
                           double beta_bar, double gamma, double alpha_p,
                           double alpha_d) {
  const double x = -(i + s) / gamma;
  const double xd = i;
  const double xr = -(i_ref + s_ref) / gamma;
  const double xrd = i_ref;
  const double xrdd = -(gamma * xr + xrd) * xrd * beta_bar - gamma * xrd;
  return -(gamma * xrd + xrdd) / ((gamma * x + xd) * xd) + alpha_p * (xr - x) +
         alpha_d * (xrd - xd);
}

// --- Mean-field SEIRD ODE -------------------------------------------------

struct MeanFieldPeak {
  double peak_i = 0.0;
  double time = 0.0;
};

// Deterministic SEIRD at the population level with beta = beta_link * <k>.
inline MeanFieldPeak seird_mean_field_peak(double beta, double gamma_e,
                                           double gamma_i, double s0, double i0,
                                           double t_final, double dt = 0.01) {
  double s = s0, e = 0.0, i = i0;
  MeanFieldPeak out{i, 0.0};
  auto deriv = [&](double sv, double ev, double iv) {
    const double inc = beta * iv * sv;
    return std::array<double, 3>{-inc, inc - gamma_e * ev,
                                 gamma_e * ev - gamma_i * iv};
  };
  for (double t = 0.0; t < t_final; t += dt) {
    const auto k1 = deriv(s, e, i);
    const auto k2 = deriv(s + 0.5 * dt * k1[0], e + 0.5 * dt * k1[1],
                          i + 0.5 * dt * k1[2]);
    const auto k3 = deriv(s + 0.5 * dt * k2[0], e + 0.5 * dt * k2[1],
                          i + 0.5 * dt * k2[2]);
    const auto k4 = deriv(s + dt * k3[0], e + dt * k3[1], i + dt * k3[2]);
    s += dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    e += dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    i += dt / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
    if (i > out.peak_i) out = {i, t + dt};
  }
  return out;
}

// --- Chi-squared tail probability -----------------------------------------

// Regularized upper incomplete gamma Q(a, x) by series / continued fraction.
inline double gammq(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gammq: bad arguments");
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    // lower series
    double ap = a, sum = 1.0 / a, del = sum;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-14) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
  }
  // upper continued fraction (Lentz)
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int n = 1; n < 500; ++n) {
    const double an = -n * (n - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-14) break;
  }
  return std::exp(-x + a * std::log(x) - gln) * h;
}

// Chi-squared survival p-value with k degrees of freedom.
inline double chi2_pvalue(double stat, int dof) {
  return gammq(0.5 * dof, 0.5 * stat);
}

// --- Exact absorption distribution of a tiny SEIRD chain ------------------

// Node codes: 0 = S, 1 = E, 2 = I, 3 = R, 4 = D. Absorption probabilities of
// the jump chain over a monotone state space, by memoized recursion. Death
// splits per the prevalence rule evaluated before the transition.
struct TinyChainParams {
  double beta_link;
  double gamma_e;
  double gamma_i;
  double p_death_low;
  double p_death_high;
  double capacity;  // prevalence threshold, fraction of n
};

using TinyState = std::vector<std::uint8_t>;

inline std::map<TinyState, double> ctmc_absorption(
    const std::vector<std::pair<int, int>>& edges, const TinyState& state,
    const TinyChainParams& p,
    std::map<TinyState, std::map<TinyState, double>>& memo) {
  if (auto it = memo.find(state); it != memo.end()) return it->second;

  struct Move {
    TinyState next;
    double weight;
  };
  std::vector<Move> moves;
  double total = 0.0;
  const int n = static_cast<int>(state.size());
  int infectious = 0;
  for (int v = 0; v < n; ++v) infectious += state[v] == 2;

  for (const auto& [u, v] : edges) {
    int s_node = -1;
    if (state[u] == 0 && state[v] == 2) s_node = u;
    if (state[v] == 0 && state[u] == 2) s_node = v;
    if (s_node < 0) continue;
    TinyState next = state;
    next[s_node] = 1;
    moves.push_back({std::move(next), p.beta_link});
    total += p.beta_link;
  }
  for (int v = 0; v < n; ++v) {
    if (state[v] == 1) {
      TinyState next = state;
      next[v] = 2;
      moves.push_back({std::move(next), p.gamma_e});
      total += p.gamma_e;
    } else if (state[v] == 2) {
      const double prevalence = static_cast<double>(infectious) / n;
      const double p_death =
          prevalence <= p.capacity ? p.p_death_low : p.p_death_high;
      TinyState dies = state, recovers = state;
      dies[v] = 4;
      recovers[v] = 3;
      moves.push_back({std::move(dies), p.gamma_i * p_death});
      moves.push_back({std::move(recovers), p.gamma_i * (1.0 - p_death)});
      total += p.gamma_i;
    }
  }

  std::map<TinyState, double> result;
  if (total == 0.0) {
    result[state] = 1.0;
  } else {
    for (const Move& mv : moves) {
      if (mv.weight == 0.0) continue;
      const auto sub = ctmc_absorption(edges, mv.next, p, memo);
      for (const auto& [cfg, prob] : sub) {
        result[cfg] += mv.weight / total * prob;
      }
    }
  }
  memo[state] = result;
  return result;
}

}  // namespace oracles
