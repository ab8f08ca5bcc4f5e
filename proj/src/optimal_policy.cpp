#include "flatten/optimal_policy.hpp"

#include <stdexcept>

#include "flatten/lambert_w.hpp"

namespace flatten {

void validate(const FlatteningProblem& prob) {
  if (!(prob.i0 > 0.0)) {
    throw std::invalid_argument("flattening problem: i0 must be > 0");
  }
  if (!(prob.i0 <= prob.i_th)) {
    throw std::invalid_argument(
        "flattening problem: infeasible, i0 exceeds the capacity i_th");
  }
  if (!(prob.i_th < 1.0)) {
    throw std::invalid_argument("flattening problem: i_th must be < 1");
  }
  if (!(prob.gamma > 0.0)) {
    throw std::invalid_argument("flattening problem: gamma must be > 0");
  }
}

double lambert_argument(const FlatteningProblem& prob) {
  return -kInvE * (1.0 - prob.i_th) / (1.0 - prob.i0);
}

double optimal_beta(const FlatteningProblem& prob) {
  validate(prob);
  if (prob.i0 == prob.i_th) {
    // Branch point W_{-1}(-1/e) = -1; peak sits at t = 0.
    return prob.gamma / (1.0 - prob.i_th);
  }
  const double w = lambert_w(WBranch::minus_one, lambert_argument(prob));
  return -prob.gamma / (1.0 - prob.i_th) * w;
}

bool verify_optimality(const FlatteningProblem& prob, double beta, double eps,
                       double dt) {
  if (!(beta > 0.0)) {
    throw std::invalid_argument("verify_optimality: beta must be > 0");
  }
  if (!(eps > 0.0)) {
    throw std::invalid_argument("verify_optimality: eps must be > 0");
  }
  const EpidemicState x0{1.0 - prob.i0, prob.i0};
  constexpr double kIntegratorSlack = 1e-9;
  const double peak = peak_infected(x0, {beta, prob.gamma}, dt);
  if (peak < prob.i_th - eps || peak > prob.i_th + kIntegratorSlack) {
    return false;
  }
  const double inflated =
      peak_infected(x0, {beta * (1.0 + eps), prob.gamma}, dt);
  return inflated > prob.i_th;
}

}  // namespace flatten
