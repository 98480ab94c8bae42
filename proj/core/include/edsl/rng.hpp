#pragma once

#include <array>
#include <cstdint>

namespace edsl {

// Philox4x32-10 counter-based generator. Any (key, counter) block can be
// evaluated independently, so shard generation is order-free and a given
// machine's data never depends on how many other machines exist.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

// Stream tags keep the draws for different purposes disjoint.
enum class StreamTag : std::uint32_t {
  design = 0,       // standard-normal entries of the design rows
  noise = 1,        // regression noise
  label = 2,        // classification coin flips
  beta_star = 3,    // ground-truth coefficients
  shuffle = 4,      // permutations for partitioning / splits
};

// One keyed counter block: (seed; tag, index, block) -> 4 x u32.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  std::array<std::uint32_t, 4> block(StreamTag tag, std::uint64_t index,
                                     std::uint32_t block_idx) const {
    return philox4x32({static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index),
                       static_cast<std::uint32_t>(index >> 32), block_idx},
                      key_);
  }

  // Two uniforms in [0,1) per block.
  std::array<double, 2> uniform2(StreamTag tag, std::uint64_t index, std::uint32_t block_idx) const;

  // Two standard normals per block (Box-Muller; exactly one block consumed).
  std::array<double, 2> normal2(StreamTag tag, std::uint64_t index, std::uint32_t block_idx) const;

  // Single uniform in [0,1).
  double uniform(StreamTag tag, std::uint64_t index, std::uint32_t block_idx = 0) const {
    return uniform2(tag, index, block_idx)[0];
  }

 private:
  std::array<std::uint32_t, 2> key_;
};

}  // namespace edsl
