#pragma once

#include <span>

#include "edsl/loss.hpp"
#include "edsl/types.hpp"

namespace edsl {

// The shifted l1-regularized subproblem
//   min_beta  L(beta) + <shift, beta> + lambda * ||beta||_1
// where L is the empirical loss over `shards` treated as one concatenated
// sample. Zero shift recovers the plain lasso / l1-logistic objective.
// Non-owning: shards must outlive the problem.
struct ShiftedProblem {
  LossSpec spec;
  std::span<const Shard> shards;
  Vector shift;  // length p
  double lambda = 0.0;

  std::size_t dim() const { return shift.size(); }
};

struct SolverOptions {
  double tol = 1e-8;        // KKT l-inf residual
  int max_iter = 10000;
  double backtrack_shrink = 0.5;
  int power_iters = 5;      // spectral-norm estimate for the initial step
};

struct SolverReport {
  Vector beta_hat;
  int iterations = 0;
  double kkt_residual = 0.0;
  double objective = 0.0;
  bool converged = false;
};

// sign(z) * max(|z| - t, 0); exactly 0 at |z| == t.
double soft_threshold(double z, double t);

// Smooth part L(beta) + <shift, beta> and its gradient.
double smooth_value(const ShiftedProblem& problem, const Vector& beta);
Vector smooth_gradient(const ShiftedProblem& problem, const Vector& beta);

// Composite objective including the l1 term.
double objective_value(const ShiftedProblem& problem, const Vector& beta);

// l-inf violation of the first-order optimality conditions at beta:
// with g = grad L(beta) + shift, per coordinate
//   |g_i + lambda * sign(beta_i)|  when beta_i != 0
//   max(|g_i| - lambda, 0)         when beta_i == 0
double kkt_residual(const ShiftedProblem& problem, const Vector& beta);

// Accelerated proximal gradient (monotone variant with adaptive restarts,
// backtracking line search), warm-started from init. Returns the iterate
// with the smallest KKT residual seen; converged=false when the budget ran
// out first. Throws NumericError (carrying the last finite iterate) if the
// objective turns non-finite.
SolverReport solve(const ShiftedProblem& problem, const Vector& init,
                   const SolverOptions& opts = {});

}  // namespace edsl
