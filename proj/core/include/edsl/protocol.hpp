#pragma once

#include <cstdint>
#include <limits>
#include <memory>

#include "edsl/prox.hpp"
#include "edsl/types.hpp"

namespace edsl {

enum class ScheduleMode { theoretical, practical, fixed };

// Regularization schedule. practical: lambda_t = max(floor, start * gamma^t)
// with floor = c sqrt(log p / (m n)) and start = c sqrt(log p / n);
// theoretical: the two-term bound driven by the ground truth (validation
// only); fixed: a constant.
struct LambdaSchedule {
  ScheduleMode mode = ScheduleMode::practical;
  double c = 0.0;          // practical scale; 0 = calibrate from data at init
  double gamma = 0.5;      // practical decay per round
  double fixed_value = 0.1;
  double delta = 0.05;     // theoretical confidence level
};

struct ScheduleContext {
  std::size_t p = 0;
  std::size_t n = 0;  // rows per machine
  std::size_t m = 1;
  LossSpec spec;
  double c = 0.0;  // resolved practical constant (after calibration)
  // theoretical mode only:
  const GroundTruth* truth = nullptr;
  double avg_grad_at_star_inf = 0.0;  // ||(1/m) sum_j grad_j(beta*)||_inf
  double max_x_inf = 0.0;             // max over all rows of ||x||_inf
  const Vector* prev_iterate = nullptr;  // beta_{t-1}; null means the zero vector
};

// lambda for round t (t = 0 is the local init solve).
double lambda_at(const LambdaSchedule& schedule, int t, const ScheduleContext& ctx);

struct RoundRecord {
  int round = 0;
  double lambda = 0.0;
  Vector beta;
  int solver_iterations = 0;
  double solver_kkt = 0.0;
  double objective = 0.0;
  bool solver_converged = false;
  std::uint64_t payload_bytes = 0;             // this round
  std::uint64_t cumulative_payload_bytes = 0;  // rounds 0..t
  std::uint64_t header_bytes = 0;              // framing overhead, tracked apart
  double wall_ms = 0.0;
  double l1_error = std::numeric_limits<double>::quiet_NaN();
  double l2_error = std::numeric_limits<double>::quiet_NaN();
};

struct RunTrace {
  std::vector<RoundRecord> rounds;  // rounds[t] is round t
};

// One synchronous exchange with the non-master machines: broadcast beta,
// collect their local gradients ordered by ascending machine_id.
class WorkerPool {
 public:
  virtual ~WorkerPool() = default;
  virtual std::size_t worker_count() const = 0;  // m - 1
  virtual std::vector<Vector> exchange(std::uint32_t round, const Vector& beta) = 0;
  virtual void shutdown(std::uint32_t round) {}
};

// Pool over in-memory shards; gradients are computed concurrently but
// returned in machine order.
class InProcessPool : public WorkerPool {
 public:
  InProcessPool(std::span<const Shard> worker_shards, LossSpec spec);
  std::size_t worker_count() const override { return shards_.size(); }
  std::vector<Vector> exchange(std::uint32_t round, const Vector& beta) override;

 private:
  std::span<const Shard> shards_;
  LossSpec spec_;
};

// Payload bytes exchanged in one round: one p-vector down and one up per
// non-master worker, 8 bytes a value.
inline std::uint64_t round_payload_bytes(std::size_t m, std::size_t p) {
  return static_cast<std::uint64_t>(2) * (m - 1) * p * 8;
}
std::uint64_t round_header_bytes(std::size_t m);

// Master-side protocol state. The master holds only its own shard; remote
// data is reached through the pool.
struct EdslState {
  const Shard* master_shard = nullptr;
  std::size_t m = 1;
  LossSpec spec;
  LambdaSchedule schedule;
  SolverOptions solver;
  WorkerPool* pool = nullptr;
  ScheduleContext sched_ctx;
  Vector beta;
  std::uint64_t cumulative_payload = 0;
  std::uint64_t cumulative_header = 0;
  int next_round = 0;
};

EdslState make_edsl_state(const Shard& master_shard, std::size_t m, LossSpec spec,
                          LambdaSchedule schedule, SolverOptions solver, WorkerPool& pool);

// Round 0: solve the master's local l1 problem at lambda_0. No communication.
RoundRecord edsl_init(EdslState& state);

// Round t >= 1: broadcast, collect gradients, assemble the shift, solve the
// shifted problem warm-started at the current iterate.
RoundRecord edsl_round(EdslState& state);

// Convenience driver over in-process shards; records estimation errors when
// ground truth is supplied. Theoretical schedules require `truth`.
RunTrace run_edsl(const Dataset& data, const LossSpec& spec, const LambdaSchedule& schedule,
                  int rounds, const SolverOptions& solver = {},
                  const GroundTruth* truth = nullptr);

// Same protocol with an externally supplied pool (e.g. TCP).
RunTrace run_edsl_with_pool(const Shard& master_shard, std::size_t m, Task task,
                            const LossSpec& spec, const LambdaSchedule& schedule, int rounds,
                            const SolverOptions& solver, WorkerPool& pool,
                            const GroundTruth* truth = nullptr);

struct RecursiveBound {
  double l1 = 0.0;
  double l2 = 0.0;
  bool vacuous = false;  // contraction factor >= 1: bound carries no content
};

// Right-hand side of the recursive estimation-error bounds after t+1 rounds,
// given contraction factor a_n, companion factor b_n, sparsity s, restricted
// curvature kappa, ||avg gradient at beta*||_inf and the round-0 l1 error.
RecursiveBound bound_rhs(int t, double a_n, double b_n, double s, double kappa, double grad_inf,
                         double err0_l1);

}  // namespace edsl
