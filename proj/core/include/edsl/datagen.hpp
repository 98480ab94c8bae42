#pragma once

#include <cstdint>
#include <utility>

#include "edsl/rng.hpp"
#include "edsl/types.hpp"

namespace edsl {

enum class Conditioning { well, ill };

struct SynthConfig {
  std::size_t n_per_machine = 200;
  std::size_t p = 400;
  std::size_t m = 10;
  std::size_t s = 5;
  Conditioning conditioning = Conditioning::well;
  Task task = Task::regression;
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;
};

// Toeplitz covariance: Sigma_ij = 0.5^|i-j| (well) or 0.5^{|i-j|/5} (ill).
Matrix toeplitz_cov(std::size_t p, Conditioning conditioning);

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
// Throws ConfigError when the input is not positive definite.
Matrix cholesky_lower(const Matrix& a);

// s-sparse truth: coordinates 0..s-1 uniform in [0,1], the rest exactly 0.
GroundTruth sample_beta_star(std::size_t p, std::size_t s, const CounterRng& rng);

// Synthetic dataset per the configured model. Rows are keyed by global row
// index (machine * n + i), so machine j's shard does not depend on m and
// concatenating shards reproduces the single-machine stream.
std::pair<Dataset, GroundTruth> generate(const SynthConfig& config);

Conditioning conditioning_from_name(const std::string& name);
std::string conditioning_name(Conditioning conditioning);

}  // namespace edsl
