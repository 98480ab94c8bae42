#include "edsl/prox.hpp"

#include <cmath>

namespace edsl {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

namespace {

void check_problem(const ShiftedProblem& problem, const Vector& beta) {
  if (problem.shards.empty()) throw DimensionError("solve: problem has no shards");
  const std::size_t p = problem.shards.front().dim();
  if (problem.shift.size() != p) {
    throw DimensionError("solve: shift length " + std::to_string(problem.shift.size()) +
                         " != p=" + std::to_string(p));
  }
  if (beta.size() != p) {
    throw DimensionError("solve: beta length " + std::to_string(beta.size()) +
                         " != p=" + std::to_string(p));
  }
  if (problem.lambda < 0.0) throw ConfigError("solve: lambda must be nonnegative");
}

}  // namespace

double smooth_value(const ShiftedProblem& problem, const Vector& beta) {
  return concat_loss_value(problem.spec, problem.shards, beta) + dot(problem.shift, beta);
}

Vector smooth_gradient(const ShiftedProblem& problem, const Vector& beta) {
  Vector g = concat_loss_gradient(problem.spec, problem.shards, beta);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] += problem.shift[k];
  return g;
}

double objective_value(const ShiftedProblem& problem, const Vector& beta) {
  return smooth_value(problem, beta) + problem.lambda * l1_norm(beta);
}

double kkt_residual(const ShiftedProblem& problem, const Vector& beta) {
  check_problem(problem, beta);
  const Vector g = smooth_gradient(problem, beta);
  double worst = 0.0;
  for (std::size_t k = 0; k < beta.size(); ++k) {
    double viol;
    if (beta[k] > 0.0) {
      viol = std::fabs(g[k] + problem.lambda);
    } else if (beta[k] < 0.0) {
      viol = std::fabs(g[k] - problem.lambda);
    } else {
      viol = std::max(std::fabs(g[k]) - problem.lambda, 0.0);
    }
    worst = std::max(worst, viol);
  }
  return worst;
}

SolverReport solve(const ShiftedProblem& problem, const Vector& init, const SolverOptions& opts) {
  check_problem(problem, init);
  if (opts.tol <= 0.0) throw ConfigError("solve: tol must be positive");
  if (opts.max_iter < 1) throw ConfigError("solve: max_iter must be >= 1");
  const std::size_t p = init.size();
  const double lambda = problem.lambda;

  if (!all_finite(init)) throw NumericError("solve: non-finite initial iterate");

  // Warm-start shortcut: already optimal.
  {
    const double r0 = kkt_residual(problem, init);
    if (r0 <= opts.tol) {
      return {init, 0, r0, objective_value(problem, init), true};
    }
  }

  const double lip = estimate_lipschitz(problem.spec, problem.shards, init, opts.power_iters);
  double step = 1.0 / std::max(lip, 1e-12);

  Vector x = init;          // accepted (monotone) iterate
  Vector y = init;          // extrapolated point
  double fx = objective_value(problem, x);
  if (!std::isfinite(fx)) throw NumericError("solve: objective non-finite at initial iterate");

  Vector best = x;
  double best_kkt = kkt_residual(problem, x);
  double best_obj = fx;

  double t_k = 1.0;
  Vector cand(p), g_y(p);

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    g_y = smooth_gradient(problem, y);
    const double f_y = smooth_value(problem, y);
    if (!std::isfinite(f_y) || !all_finite(g_y)) {
      throw NumericError("solve: non-finite smooth value at extrapolated point", best);
    }

    // Backtracking: shrink until the quadratic upper bound at y holds.
    double f_cand = 0.0;
    for (int bt = 0;; ++bt) {
      for (std::size_t k = 0; k < p; ++k) {
        cand[k] = soft_threshold(y[k] - step * g_y[k], step * lambda);
      }
      f_cand = smooth_value(problem, cand);
      double inner = 0.0, sq = 0.0;
      for (std::size_t k = 0; k < p; ++k) {
        const double d = cand[k] - y[k];
        inner += g_y[k] * d;
        sq += d * d;
      }
      const double bound = f_y + inner + sq / (2.0 * step);
      if (std::isfinite(f_cand) && f_cand <= bound + 1e-15 * (1.0 + std::fabs(f_y))) break;
      if (!std::isfinite(f_cand) && bt > 80) {
        throw NumericError("solve: objective non-finite, line search exhausted", best);
      }
      if (bt > 200) break;  // step underflow; accept and let the KKT check decide
      step *= opts.backtrack_shrink;
    }

    const double obj_cand = f_cand + lambda * l1_norm(cand);
    if (!std::isfinite(obj_cand)) {
      throw NumericError("solve: composite objective non-finite", best);
    }

    const double r_cand = kkt_residual(problem, cand);
    if (r_cand < best_kkt) {
      best_kkt = r_cand;
      best = cand;
      best_obj = obj_cand;
    }
    if (r_cand <= opts.tol) {
      return {cand, iter, r_cand, obj_cand, true};
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_k * t_k));
    if (obj_cand <= fx) {
      // Monotone accept with momentum against the previous accepted iterate.
      for (std::size_t k = 0; k < p; ++k) {
        y[k] = cand[k] + ((t_k - 1.0) / t_next) * (cand[k] - x[k]);
      }
      x = cand;
      fx = obj_cand;
      t_k = t_next;
    } else {
      // No progress past the current iterate: restart momentum at x.
      y = x;
      t_k = 1.0;
    }
  }

  return {best, opts.max_iter, best_kkt, best_obj, false};
}

}  // namespace edsl
