#pragma once

#include <span>

#include "edsl/types.hpp"

namespace edsl {

// log(1 + exp(z)) without overflow for large |z|.
double log1pexp(double z);
// 1 / (1 + exp(-z)), evaluated on the stable branch.
double sigmoid(double z);

// Pointwise loss l(y, u) and its derivative in u.
//   squared:  l = (y - u)^2 / 2,          l' = u - y
//   logistic: l = log(1 + exp(-y u)),     l' = -y sigmoid(-y u)
double pointwise_loss(const LossSpec& spec, double y, double u);
double pointwise_loss_derivative(const LossSpec& spec, double y, double u);
// Second derivative in u (1 for squared, sigma(u)(1-sigma(u)) for logistic).
double pointwise_loss_curvature(const LossSpec& spec, double y, double u);

// Empirical loss over one shard: (1/n) sum_i l(y_i, <x_i, beta>), rows in order.
double loss_value(const LossSpec& spec, const Shard& shard, const Vector& beta);
Vector loss_gradient(const LossSpec& spec, const Shard& shard, const Vector& beta);

// Several shards treated as one empirical loss over the concatenated rows:
// (1/N) sum over all rows, shards in order, rows in order.
double concat_loss_value(const LossSpec& spec, std::span<const Shard> shards, const Vector& beta);
Vector concat_loss_gradient(const LossSpec& spec, std::span<const Shard> shards,
                            const Vector& beta);

// Coordinatewise mean of per-shard gradients, summed in ascending machine_id
// order (shards must already be sorted by machine_id).
Vector average_gradient(const LossSpec& spec, std::span<const Shard> shards, const Vector& beta);

// Hessian-vector product of the concatenated empirical loss at beta.
Vector hessian_vec(const LossSpec& spec, std::span<const Shard> shards, const Vector& beta,
                   const Vector& v);

// Power-iteration estimate of the concatenated Hessian's spectral norm at
// beta (deterministic start vector, `iters` iterations).
double estimate_lipschitz(const LossSpec& spec, std::span<const Shard> shards, const Vector& beta,
                          int iters = 5);

}  // namespace edsl
