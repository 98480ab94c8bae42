#include "edsl/loss.hpp"

#include <cmath>

namespace edsl {

double log1pexp(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double pointwise_loss(const LossSpec& spec, double y, double u) {
  if (spec.family == LossFamily::squared) {
    const double r = y - u;
    return 0.5 * r * r;
  }
  return log1pexp(-y * u);
}

double pointwise_loss_derivative(const LossSpec& spec, double y, double u) {
  if (spec.family == LossFamily::squared) return u - y;
  return -y * sigmoid(-y * u);
}

double pointwise_loss_curvature(const LossSpec& spec, double y, double u) {
  if (spec.family == LossFamily::squared) return 1.0;
  const double s = sigmoid(y * u);  // sigma(z)(1-sigma(z)) is even in z
  return s * (1.0 - s);
}

namespace {

inline double row_dot(std::span<const double> x, const Vector& beta) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += x[k] * beta[k];
  return acc;
}

void check_dim(const Shard& shard, const Vector& beta) {
  if (beta.size() != shard.dim()) {
    throw DimensionError("loss: beta length " + std::to_string(beta.size()) +
                         " != shard dimension " + std::to_string(shard.dim()));
  }
}

}  // namespace

double loss_value(const LossSpec& spec, const Shard& shard, const Vector& beta) {
  check_dim(shard, beta);
  double acc = 0.0;
  for (std::size_t i = 0; i < shard.rows(); ++i) {
    acc += pointwise_loss(spec, shard.ys[i], row_dot(shard.xs.row(i), beta));
  }
  return acc / static_cast<double>(shard.rows());
}

Vector loss_gradient(const LossSpec& spec, const Shard& shard, const Vector& beta) {
  check_dim(shard, beta);
  Vector grad(beta.size(), 0.0);
  for (std::size_t i = 0; i < shard.rows(); ++i) {
    const auto x = shard.xs.row(i);
    const double d = pointwise_loss_derivative(spec, shard.ys[i], row_dot(x, beta));
    for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += x[k] * d;
  }
  const double inv_n = 1.0 / static_cast<double>(shard.rows());
  for (double& g : grad) g *= inv_n;
  return grad;
}

double concat_loss_value(const LossSpec& spec, std::span<const Shard> shards, const Vector& beta) {
  if (shards.empty()) throw DimensionError("concat_loss_value: empty shard list");
  double acc = 0.0;
  std::size_t total = 0;
  for (const Shard& shard : shards) {
    check_dim(shard, beta);
    for (std::size_t i = 0; i < shard.rows(); ++i) {
      acc += pointwise_loss(spec, shard.ys[i], row_dot(shard.xs.row(i), beta));
    }
    total += shard.rows();
  }
  return acc / static_cast<double>(total);
}

Vector concat_loss_gradient(const LossSpec& spec, std::span<const Shard> shards,
                            const Vector& beta) {
  if (shards.empty()) throw DimensionError("concat_loss_gradient: empty shard list");
  Vector grad(beta.size(), 0.0);
  std::size_t total = 0;
  for (const Shard& shard : shards) {
    check_dim(shard, beta);
    for (std::size_t i = 0; i < shard.rows(); ++i) {
      const auto x = shard.xs.row(i);
      const double d = pointwise_loss_derivative(spec, shard.ys[i], row_dot(x, beta));
      for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += x[k] * d;
    }
    total += shard.rows();
  }
  const double inv_n = 1.0 / static_cast<double>(total);
  for (double& g : grad) g *= inv_n;
  return grad;
}

Vector average_gradient(const LossSpec& spec, std::span<const Shard> shards, const Vector& beta) {
  if (shards.empty()) throw DimensionError("average_gradient: empty shard list");
  Vector acc(beta.size(), 0.0);
  for (const Shard& shard : shards) {
    const Vector g = loss_gradient(spec, shard, beta);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += g[k];
  }
  const double inv_m = 1.0 / static_cast<double>(shards.size());
  for (double& g : acc) g *= inv_m;
  return acc;
}

Vector hessian_vec(const LossSpec& spec, std::span<const Shard> shards, const Vector& beta,
                   const Vector& v) {
  Vector out(v.size(), 0.0);
  std::size_t total = 0;
  for (const Shard& shard : shards) {
    check_dim(shard, beta);
    for (std::size_t i = 0; i < shard.rows(); ++i) {
      const auto x = shard.xs.row(i);
      const double u = row_dot(x, beta);
      const double w = pointwise_loss_curvature(spec, shard.ys[i], u) * row_dot(x, v);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += x[k] * w;
    }
    total += shard.rows();
  }
  const double inv_n = 1.0 / static_cast<double>(total);
  for (double& g : out) g *= inv_n;
  return out;
}

double estimate_lipschitz(const LossSpec& spec, std::span<const Shard> shards, const Vector& beta,
                          int iters) {
  const std::size_t p = beta.size();
  Vector v(p, 1.0 / std::sqrt(static_cast<double>(p)));
  double estimate = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vector hv = hessian_vec(spec, shards, beta, v);
    const double norm = l2_norm(hv);
    if (norm <= 1e-300) return 1.0;  // zero curvature: fall back to unit step
    estimate = norm;
    for (std::size_t k = 0; k < p; ++k) v[k] = hv[k] / norm;
  }
  return estimate;
}

}  // namespace edsl
