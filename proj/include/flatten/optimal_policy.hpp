#pragma once

#include "flatten/sir_model.hpp"

namespace flatten {

// Data of the curve-flattening problem: the largest constant transmission
// rate whose infection peak still fits under the health-care capacity.
struct FlatteningProblem {
  double i0 = 0.0;     // initial infected fraction, 0 < i0 <= i_th
  double i_th = 0.0;   // capacity as an infected fraction, < 1
  double gamma = 0.0;  // recovery rate, > 0
};

// Throws std::invalid_argument when the problem is infeasible
// (i0 > i_th, i_th >= 1, non-positive entries).
void validate(const FlatteningProblem& prob);

// Argument handed to the -1 branch of Lambert W; lies in [-1/e, 0) for any
// feasible problem.
double lambert_argument(const FlatteningProblem& prob);

// Closed-form optimum: -gamma / (1 - i_th) * W_{-1}(lambert_argument).
// The i0 == i_th edge is returned exactly as gamma / (1 - i_th) (branch
// point) instead of going through the iterative solver.
double optimal_beta(const FlatteningProblem& prob);

// True iff the integrated peak under `beta` lands in [i_th - eps, i_th] and
// inflating beta by (1 + eps) pushes the peak beyond i_th.
bool verify_optimality(const FlatteningProblem& prob, double beta, double eps,
                       double dt = kDefaultDt);

}  // namespace flatten
