#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "edsl/error.hpp"

namespace edsl {

// All numerics are 64-bit doubles. Vectors are dense, length p.
using Vector = std::vector<double>;

enum class Task { regression, classification };

// Dense row-major matrix; rows are observations.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
};

// One machine's local observations {x_i, y_i}.
struct Shard {
  int machine_id = 0;
  Matrix xs;  // n x p
  Vector ys;  // n

  std::size_t rows() const { return xs.rows; }
  std::size_t dim() const { return xs.cols; }
};

struct Dataset {
  std::vector<Shard> shards;  // machine_id = 0..m-1, equal n and p
  std::size_t p = 0;
  Task task = Task::regression;

  std::size_t machines() const { return shards.size(); }
  std::size_t rows_per_machine() const { return shards.empty() ? 0 : shards.front().rows(); }
};

enum class LossFamily { squared, logistic };

// Exact maximum of the logistic loss third derivative in its second
// argument, attained at sigma = (3 - sqrt(3))/6.
inline constexpr double kLogisticThirdDerivBound = 0.09622504486493763;

// Loss family plus smoothness constants: |l'(a,b) - l'(a,c)| <= L|b-c|
// and |l'''(a,b)| <= M.
struct LossSpec {
  LossFamily family = LossFamily::squared;
  double smoothness_L = 1.0;
  double third_deriv_M = 0.0;
};

inline LossSpec squared_loss() { return {LossFamily::squared, 1.0, 0.0}; }
inline LossSpec logistic_loss(double third_deriv_M = kLogisticThirdDerivBound) {
  return {LossFamily::logistic, 0.25, third_deriv_M};
}

struct GroundTruth {
  Vector beta_star;
  std::vector<std::size_t> support;  // indices of nonzero coordinates

  std::size_t sparsity() const { return support.size(); }
};

GroundTruth make_ground_truth(Vector beta_star);

bool all_finite(std::span<const double> v);

// Sum a_i * b_i accumulated strictly left to right.
double dot(const Vector& a, const Vector& b);
double l1_norm(const Vector& a);
double l2_norm(const Vector& a);
// Max |a_i|; throws DimensionError on an empty vector.
double linf_norm(const Vector& a);

// Checks every Dataset/Shard invariant; throws DataError with the first
// violation found.
void validate_dataset(const Dataset& data);

std::string task_name(Task task);

}  // namespace edsl
