#include "edsl/types.hpp"

#include <cmath>
#include <cstdio>

namespace edsl {

GroundTruth make_ground_truth(Vector beta_star) {
  GroundTruth truth;
  truth.beta_star = std::move(beta_star);
  for (std::size_t i = 0; i < truth.beta_star.size(); ++i) {
    if (truth.beta_star[i] != 0.0) truth.support.push_back(i);
  }
  return truth;
}

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot: length mismatch " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double l1_norm(const Vector& a) {
  double acc = 0.0;
  for (double x : a) acc += std::fabs(x);
  return acc;
}

double l2_norm(const Vector& a) {
  double acc = 0.0;
  for (double x : a) acc += x * x;
  return std::sqrt(acc);
}

double linf_norm(const Vector& a) {
  if (a.empty()) throw DimensionError("linf_norm: empty vector");
  double mx = 0.0;
  for (double x : a) mx = std::max(mx, std::fabs(x));
  return mx;
}

void validate_dataset(const Dataset& data) {
  if (data.shards.empty()) throw DataError("dataset has no shards");
  const std::size_t n = data.shards.front().rows();
  for (std::size_t j = 0; j < data.shards.size(); ++j) {
    const Shard& s = data.shards[j];
    if (s.machine_id != static_cast<int>(j)) {
      throw DataError("shard " + std::to_string(j) + " has machine_id " +
                      std::to_string(s.machine_id));
    }
    if (s.dim() != data.p) {
      throw DimensionError("shard " + std::to_string(j) + " has p=" + std::to_string(s.dim()) +
                           ", dataset p=" + std::to_string(data.p));
    }
    if (s.rows() != n) {
      throw DataError("shard " + std::to_string(j) + " has n=" + std::to_string(s.rows()) +
                      ", expected n=" + std::to_string(n));
    }
    if (s.ys.size() != s.rows()) {
      throw DimensionError("shard " + std::to_string(j) + ": xs rows " + std::to_string(s.rows()) +
                           " != ys length " + std::to_string(s.ys.size()));
    }
    if (!all_finite(s.xs.data)) {
      throw DataError("shard " + std::to_string(j) + " has non-finite design entries");
    }
    if (!all_finite(s.ys)) {
      throw DataError("shard " + std::to_string(j) + " has non-finite responses");
    }
    if (data.task == Task::classification) {
      for (std::size_t i = 0; i < s.ys.size(); ++i) {
        if (s.ys[i] != 1.0 && s.ys[i] != -1.0) {
          throw DataError("shard " + std::to_string(j) + " row " + std::to_string(i) +
                          ": classification label must be -1 or +1, got " +
                          std::to_string(s.ys[i]));
        }
      }
    }
  }
}

std::string task_name(Task task) {
  return task == Task::regression ? "regression" : "classification";
}

}  // namespace edsl
