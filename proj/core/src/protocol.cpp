#include "edsl/protocol.hpp"

#include <chrono>
#include <cmath>
#include <future>

#include "edsl/loss.hpp"
#include "edsl/wire.hpp"

namespace edsl {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  const auto d = std::chrono::steady_clock::now() - start;
  return std::chrono::duration<double, std::milli>(d).count();
}

// std-dev of the master's residuals at beta (regression noise estimate).
double residual_stddev(const Shard& shard, const Vector& beta) {
  double acc = 0.0;
  for (std::size_t i = 0; i < shard.rows(); ++i) {
    double u = 0.0;
    const auto x = shard.xs.row(i);
    for (std::size_t k = 0; k < x.size(); ++k) u += x[k] * beta[k];
    const double r = shard.ys[i] - u;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(shard.rows()));
}

void attach_errors(RoundRecord& rec, const GroundTruth* truth) {
  if (!truth) return;
  double l1 = 0.0, l2 = 0.0;
  for (std::size_t k = 0; k < rec.beta.size(); ++k) {
    const double d = rec.beta[k] - truth->beta_star[k];
    l1 += std::fabs(d);
    l2 += d * d;
  }
  rec.l1_error = l1;
  rec.l2_error = std::sqrt(l2);
}

}  // namespace

double lambda_at(const LambdaSchedule& schedule, int t, const ScheduleContext& ctx) {
  switch (schedule.mode) {
    case ScheduleMode::fixed:
      if (schedule.fixed_value <= 0.0) throw ConfigError("fixed lambda must be positive");
      return schedule.fixed_value;
    case ScheduleMode::practical: {
      const double c = ctx.c > 0.0 ? ctx.c : schedule.c;
      if (c <= 0.0) throw ConfigError("practical schedule: constant c not resolved");
      const double logp = std::log(static_cast<double>(ctx.p));
      const double n = static_cast<double>(ctx.n);
      const double mn = n * static_cast<double>(ctx.m);
      const double floor_value = c * std::sqrt(logp / mn);
      const double start_value = c * std::sqrt(logp / n);
      return std::max(floor_value, start_value * std::pow(schedule.gamma, t));
    }
    case ScheduleMode::theoretical: {
      if (!ctx.truth) {
        throw ConfigError("theoretical schedule requires ground truth context");
      }
      // Distance of the previous iterate from beta*; the init round is
      // anchored at the zero vector.
      double dist_l1 = 0.0;
      for (std::size_t k = 0; k < ctx.truth->beta_star.size(); ++k) {
        const double prev = ctx.prev_iterate ? (*ctx.prev_iterate)[k] : 0.0;
        dist_l1 += std::fabs(ctx.truth->beta_star[k] - prev);
      }
      const double x_inf = ctx.max_x_inf;
      const double tail = std::sqrt(std::log(2.0 * static_cast<double>(ctx.p) / schedule.delta) /
                                    static_cast<double>(ctx.n));
      return 2.0 * ctx.avg_grad_at_star_inf +
             2.0 * ctx.spec.smoothness_L * (x_inf * x_inf) * dist_l1 * tail +
             2.0 * ctx.spec.third_deriv_M * (x_inf * x_inf * x_inf) * (dist_l1 * dist_l1);
    }
  }
  throw ConfigError("unknown schedule mode");
}

InProcessPool::InProcessPool(std::span<const Shard> worker_shards, LossSpec spec)
    : shards_(worker_shards), spec_(spec) {}

std::vector<Vector> InProcessPool::exchange(std::uint32_t, const Vector& beta) {
  std::vector<Vector> grads(shards_.size());
  std::vector<std::future<Vector>> jobs;
  jobs.reserve(shards_.size());
  for (std::size_t w = 0; w < shards_.size(); ++w) {
    jobs.push_back(std::async(std::launch::async, [this, w, &beta] {
      return loss_gradient(spec_, shards_[w], beta);
    }));
  }
  for (std::size_t w = 0; w < shards_.size(); ++w) grads[w] = jobs[w].get();
  return grads;
}

std::uint64_t round_header_bytes(std::size_t m) {
  return static_cast<std::uint64_t>(2) * (m - 1) * kWireHeaderBytes;
}

EdslState make_edsl_state(const Shard& master_shard, std::size_t m, LossSpec spec,
                          LambdaSchedule schedule, SolverOptions solver, WorkerPool& pool) {
  if (m < 1) throw ConfigError("edsl: m must be >= 1");
  if (pool.worker_count() != m - 1) {
    throw ConfigError("edsl: pool has " + std::to_string(pool.worker_count()) +
                      " workers, expected " + std::to_string(m - 1));
  }
  EdslState state;
  state.master_shard = &master_shard;
  state.m = m;
  state.spec = spec;
  state.schedule = schedule;
  state.solver = solver;
  state.pool = &pool;
  state.sched_ctx.p = master_shard.dim();
  state.sched_ctx.n = master_shard.rows();
  state.sched_ctx.m = m;
  state.sched_ctx.spec = spec;
  state.beta.assign(master_shard.dim(), 0.0);
  return state;
}

RoundRecord edsl_init(EdslState& state) {
  const auto start = std::chrono::steady_clock::now();
  const Shard& master = *state.master_shard;
  const std::size_t p = master.dim();

  // Provisional noise scale for lambda_0: residuals at the zero iterate.
  if (state.schedule.mode == ScheduleMode::practical && state.schedule.c <= 0.0) {
    state.sched_ctx.c = state.spec.family == LossFamily::squared
                            ? 2.0 * residual_stddev(master, Vector(p, 0.0))
                            : 1.0;
  }
  const double lambda0 = lambda_at(state.schedule, 0, state.sched_ctx);

  ShiftedProblem problem{state.spec, {state.master_shard, 1}, Vector(p, 0.0), lambda0};
  SolverReport report = solve(problem, Vector(p, 0.0), state.solver);
  state.beta = report.beta_hat;

  // Final practical constant: noise scale re-estimated at beta_0.
  if (state.schedule.mode == ScheduleMode::practical && state.schedule.c <= 0.0) {
    state.sched_ctx.c = state.spec.family == LossFamily::squared
                            ? std::max(2.0 * residual_stddev(master, state.beta), 1e-8)
                            : 1.0;
  }

  RoundRecord rec;
  rec.round = 0;
  rec.lambda = lambda0;
  rec.beta = state.beta;
  rec.solver_iterations = report.iterations;
  rec.solver_kkt = report.kkt_residual;
  rec.objective = report.objective;
  rec.solver_converged = report.converged;
  rec.payload_bytes = 0;
  rec.cumulative_payload_bytes = 0;
  rec.header_bytes = 0;
  rec.wall_ms = elapsed_ms(start);
  state.next_round = 1;
  return rec;
}

RoundRecord edsl_round(EdslState& state) {
  const auto start = std::chrono::steady_clock::now();
  if (state.next_round < 1) throw ConfigError("edsl_round: call edsl_init first");
  const Shard& master = *state.master_shard;
  const std::size_t p = master.dim();
  const int t = state.next_round;

  const Vector g_master = loss_gradient(state.spec, master, state.beta);
  const std::vector<Vector> worker_grads =
      state.pool->exchange(static_cast<std::uint32_t>(t), state.beta);

  // Mean over machines in ascending machine_id order (master is machine 0).
  Vector avg = g_master;
  for (const Vector& g : worker_grads) {
    if (g.size() != p) throw TransportError("gradient report has wrong dimension");
    for (std::size_t k = 0; k < p; ++k) avg[k] += g[k];
  }
  const double inv_m = 1.0 / static_cast<double>(state.m);
  for (double& v : avg) v *= inv_m;

  Vector shift(p);
  for (std::size_t k = 0; k < p; ++k) shift[k] = avg[k] - g_master[k];

  state.sched_ctx.prev_iterate = &state.beta;
  const double lambda_t = lambda_at(state.schedule, t, state.sched_ctx);
  state.sched_ctx.prev_iterate = nullptr;

  ShiftedProblem problem{state.spec, {state.master_shard, 1}, std::move(shift), lambda_t};
  SolverReport report = solve(problem, state.beta, state.solver);
  state.beta = report.beta_hat;

  RoundRecord rec;
  rec.round = t;
  rec.lambda = lambda_t;
  rec.beta = state.beta;
  rec.solver_iterations = report.iterations;
  rec.solver_kkt = report.kkt_residual;
  rec.objective = report.objective;
  rec.solver_converged = report.converged;
  rec.payload_bytes = round_payload_bytes(state.m, p);
  rec.header_bytes = round_header_bytes(state.m);
  state.cumulative_payload += rec.payload_bytes;
  state.cumulative_header += rec.header_bytes;
  rec.cumulative_payload_bytes = state.cumulative_payload;
  rec.wall_ms = elapsed_ms(start);
  state.next_round = t + 1;
  return rec;
}

RunTrace run_edsl_with_pool(const Shard& master_shard, std::size_t m, Task task,
                            const LossSpec& spec, const LambdaSchedule& schedule, int rounds,
                            const SolverOptions& solver, WorkerPool& pool,
                            const GroundTruth* truth) {
  (void)task;
  if (rounds < 0) throw ConfigError("edsl: rounds must be >= 0");
  if (schedule.mode == ScheduleMode::theoretical && !truth) {
    throw ConfigError("theoretical schedule requires ground truth");
  }
  EdslState state = make_edsl_state(master_shard, m, spec, schedule, solver, pool);
  if (truth) state.sched_ctx.truth = truth;

  RunTrace trace;
  trace.rounds.reserve(static_cast<std::size_t>(rounds) + 1);
  RoundRecord rec = edsl_init(state);
  attach_errors(rec, truth);
  trace.rounds.push_back(std::move(rec));
  for (int t = 1; t <= rounds; ++t) {
    RoundRecord r = edsl_round(state);
    attach_errors(r, truth);
    trace.rounds.push_back(std::move(r));
  }
  pool.shutdown(static_cast<std::uint32_t>(rounds + 1));
  return trace;
}

RunTrace run_edsl(const Dataset& data, const LossSpec& spec, const LambdaSchedule& schedule,
                  int rounds, const SolverOptions& solver, const GroundTruth* truth) {
  validate_dataset(data);
  InProcessPool pool({data.shards.data() + 1, data.shards.size() - 1}, spec);
  EdslState state =
      make_edsl_state(data.shards.front(), data.machines(), spec, schedule, solver, pool);
  if (schedule.mode == ScheduleMode::theoretical) {
    if (!truth) throw ConfigError("theoretical schedule requires ground truth");
    state.sched_ctx.truth = truth;
    state.sched_ctx.avg_grad_at_star_inf =
        linf_norm(average_gradient(spec, data.shards, truth->beta_star));
    double x_inf = 0.0;
    for (const Shard& shard : data.shards) {
      for (double v : shard.xs.data) x_inf = std::max(x_inf, std::fabs(v));
    }
    state.sched_ctx.max_x_inf = x_inf;
  } else if (truth) {
    state.sched_ctx.truth = truth;
  }

  RunTrace trace;
  trace.rounds.reserve(static_cast<std::size_t>(rounds) + 1);
  RoundRecord rec = edsl_init(state);
  attach_errors(rec, truth);
  trace.rounds.push_back(std::move(rec));
  for (int t = 1; t <= rounds; ++t) {
    RoundRecord r = edsl_round(state);
    attach_errors(r, truth);
    trace.rounds.push_back(std::move(r));
  }
  return trace;
}

RecursiveBound bound_rhs(int t, double a_n, double b_n, double s, double kappa, double grad_inf,
                         double err0_l1) {
  if (t < 0) throw ConfigError("bound_rhs: t must be >= 0");
  if (a_n < 0.0 || s <= 0.0 || kappa <= 0.0) {
    throw ConfigError("bound_rhs: a_n must be >= 0 and s, kappa positive");
  }
  // Geometric partial sum 1 + a + ... + a^t, stable for a near or above 1.
  double series = 0.0, a_pow_t = 1.0;
  for (int i = 0; i < t; ++i) {
    series += a_pow_t;
    a_pow_t *= a_n;
  }
  series += a_pow_t;               // now sum over a^0..a^t; a_pow_t = a^t
  const double a_pow_t1 = a_pow_t * a_n;  // a^{t+1}

  RecursiveBound out;
  out.vacuous = a_n >= 1.0;
  out.l1 = series * (48.0 * s / kappa) * grad_inf + a_pow_t1 * err0_l1;
  out.l2 = series * (12.0 * std::sqrt(s) / kappa) * grad_inf + a_pow_t * b_n * err0_l1;
  return out;
}

}  // namespace edsl
