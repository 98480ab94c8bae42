#pragma once

#include <cstdint>
#include <string>

#include "edsl/types.hpp"

namespace edsl {

enum class TextFormat { libsvm, csv };

// Parse a whole file into a single-shard dataset. libsvm: "label i:v ..."
// with 1-indexed features; csv: header "y,x1,...,xp" then one row per line.
// Classification labels are mapped to {-1,+1} by sign (y > 0 -> +1).
// Malformed input throws DataError naming the line number.
Dataset load_text(const std::string& path, TextFormat format, Task task,
                  std::size_t dimension_hint = 0);

enum class PartitionPolicy { contiguous, shuffled };

// Split one shard's rows across m machines. Rows beyond the largest multiple
// of m are dropped (the count is reported through `dropped_rows` when given).
Dataset partition(const Dataset& single, std::size_t m, PartitionPolicy policy,
                  std::uint64_t seed = 0, std::size_t* dropped_rows = nullptr);

struct DataSplit {
  Dataset train;
  Dataset validation;
  Dataset test;
};

// Deterministic shuffled 60/20/20 split of a single-shard dataset.
DataSplit split_60_20_20(const Dataset& single, std::uint64_t seed);

TextFormat text_format_from_name(const std::string& name);

}  // namespace edsl
