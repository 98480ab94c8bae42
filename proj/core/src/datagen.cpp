#include "edsl/datagen.hpp"

#include <cmath>

#include "edsl/loss.hpp"

namespace edsl {

Matrix toeplitz_cov(std::size_t p, Conditioning conditioning) {
  if (p < 1) throw ConfigError("toeplitz_cov: p must be >= 1");
  const double decay = conditioning == Conditioning::well ? 1.0 : 0.2;
  Matrix cov(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const double d = static_cast<double>(i > j ? i - j : j - i);
      cov.at(i, j) = std::pow(0.5, d * decay);
    }
  }
  return cov;
}

Matrix cholesky_lower(const Matrix& a) {
  if (a.rows != a.cols) throw ConfigError("cholesky: matrix not square");
  if (a.rows > 10000) throw ConfigError("cholesky: p capped at 10000");
  const std::size_t p = a.rows;
  Matrix lower(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a.at(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= lower.at(i, k) * lower.at(j, k);
      if (i == j) {
        if (sum <= 0.0) throw ConfigError("cholesky: matrix not positive definite");
        lower.at(i, i) = std::sqrt(sum);
      } else {
        lower.at(i, j) = sum / lower.at(j, j);
      }
    }
  }
  return lower;
}

GroundTruth sample_beta_star(std::size_t p, std::size_t s, const CounterRng& rng) {
  if (s > p) throw ConfigError("sample_beta_star: s > p");
  Vector beta(p, 0.0);
  for (std::size_t k = 0; k < s; ++k) {
    beta[k] = rng.uniform(StreamTag::beta_star, k);
  }
  return make_ground_truth(std::move(beta));
}

namespace {

// Standard-normal row z, keyed by global row index; two normals per block.
void fill_normal_row(const CounterRng& rng, StreamTag tag, std::uint64_t row_index,
                     std::span<double> out) {
  for (std::size_t b = 0; 2 * b < out.size(); ++b) {
    const auto pair = rng.normal2(tag, row_index, static_cast<std::uint32_t>(b));
    out[2 * b] = pair[0];
    if (2 * b + 1 < out.size()) out[2 * b + 1] = pair[1];
  }
}

}  // namespace

std::pair<Dataset, GroundTruth> generate(const SynthConfig& config) {
  if (config.m < 1) throw ConfigError("generate: m must be >= 1");
  if (config.n_per_machine < 1) throw ConfigError("generate: n must be >= 1");
  if (config.noise_sigma <= 0.0) throw ConfigError("generate: noise_sigma must be positive");
  const std::size_t p = config.p;
  const CounterRng rng(config.seed);
  GroundTruth truth = sample_beta_star(p, config.s, rng);

  const Matrix lower = cholesky_lower(toeplitz_cov(p, config.conditioning));

  Dataset data;
  data.p = p;
  data.task = config.task;
  data.shards.reserve(config.m);

  Vector z(p);
  for (std::size_t j = 0; j < config.m; ++j) {
    Shard shard;
    shard.machine_id = static_cast<int>(j);
    shard.xs = Matrix(config.n_per_machine, p);
    shard.ys.resize(config.n_per_machine);
    for (std::size_t i = 0; i < config.n_per_machine; ++i) {
      const std::uint64_t global_row = j * config.n_per_machine + i;
      fill_normal_row(rng, StreamTag::design, global_row, {z.data(), p});
      auto x = shard.xs.row(i);
      for (std::size_t r = 0; r < p; ++r) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= r; ++k) acc += lower.at(r, k) * z[k];
        x[r] = acc;
      }
      double signal = 0.0;
      for (std::size_t k : truth.support) signal += x[k] * truth.beta_star[k];
      if (config.task == Task::regression) {
        const double eps = rng.normal2(StreamTag::noise, global_row, 0)[0] * config.noise_sigma;
        shard.ys[i] = signal + eps;
      } else {
        const double u = rng.uniform(StreamTag::label, global_row);
        shard.ys[i] = u < sigmoid(signal) ? 1.0 : -1.0;
      }
    }
    data.shards.push_back(std::move(shard));
  }
  return {std::move(data), std::move(truth)};
}

Conditioning conditioning_from_name(const std::string& name) {
  if (name == "well") return Conditioning::well;
  if (name == "ill") return Conditioning::ill;
  throw ConfigError("unknown conditioning '" + name + "' (expected well|ill)");
}

std::string conditioning_name(Conditioning conditioning) {
  return conditioning == Conditioning::well ? "well" : "ill";
}

}  // namespace edsl
