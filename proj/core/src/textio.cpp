#include "edsl/textio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "edsl/rng.hpp"

namespace edsl {

namespace {

struct RawRow {
  double y = 0.0;
  std::vector<std::pair<std::size_t, double>> features;  // 0-indexed
};

double parse_double(const std::string& token, std::size_t line_no, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') {
    throw DataError("line " + std::to_string(line_no) + ": bad " + what + " '" + token + "'");
  }
  return v;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

double map_label(double y, Task task, std::size_t line_no) {
  if (task == Task::regression) return y;
  if (y == 1.0 || y == -1.0) return y;
  if (y == 0.0) return -1.0;
  if (y > 0.0) return 1.0;
  if (y < 0.0) return -1.0;
  throw DataError("line " + std::to_string(line_no) + ": label outside expected set");
}

std::vector<RawRow> parse_libsvm(std::istream& in, Task task, std::size_t& max_index) {
  std::vector<RawRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string token;
    if (!(ss >> token)) continue;
    RawRow row;
    row.y = map_label(parse_double(token, line_no, "label"), task, line_no);
    while (ss >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        throw DataError("line " + std::to_string(line_no) + ": expected index:value, got '" +
                        token + "'");
      }
      const double idx = parse_double(token.substr(0, colon), line_no, "feature index");
      if (idx < 1.0 || idx != std::floor(idx)) {
        throw DataError("line " + std::to_string(line_no) + ": feature index must be >= 1");
      }
      const double val = parse_double(token.substr(colon + 1), line_no, "feature value");
      const auto index0 = static_cast<std::size_t>(idx) - 1;
      row.features.emplace_back(index0, val);
      max_index = std::max(max_index, index0 + 1);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RawRow> parse_csv(std::istream& in, Task task, std::size_t& max_index) {
  std::vector<RawRow> rows;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DataError("csv: empty file");
  ++line_no;
  line = strip_cr(line);
  std::size_t header_cols = 1;
  for (char c : line) header_cols += (c == ',');
  if (header_cols < 2) throw DataError("csv: header must be y,x1,...,xp");
  const std::size_t p = header_cols - 1;
  max_index = std::max(max_index, p);
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string token;
    RawRow row;
    std::size_t col = 0;
    while (std::getline(ss, token, ',')) {
      const double v = parse_double(token, line_no, "value");
      if (col == 0) {
        row.y = map_label(v, task, line_no);
      } else {
        if (v != 0.0) row.features.emplace_back(col - 1, v);
      }
      ++col;
    }
    if (col != header_cols) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header_cols) + " fields, got " + std::to_string(col));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Dataset rows_to_dataset(const std::vector<RawRow>& rows, std::size_t p, Task task) {
  if (rows.empty()) throw DataError("no data rows parsed");
  Dataset data;
  data.p = p;
  data.task = task;
  Shard shard;
  shard.machine_id = 0;
  shard.xs = Matrix(rows.size(), p);
  shard.ys.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    shard.ys[i] = rows[i].y;
    auto x = shard.xs.row(i);
    for (const auto& [idx, val] : rows[i].features) x[idx] = val;
  }
  data.shards.push_back(std::move(shard));
  validate_dataset(data);
  return data;
}

Dataset select_rows(const Dataset& single, const std::vector<std::size_t>& indices) {
  const Shard& src = single.shards.front();
  Dataset out;
  out.p = single.p;
  out.task = single.task;
  Shard shard;
  shard.machine_id = 0;
  shard.xs = Matrix(indices.size(), single.p);
  shard.ys.resize(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto r = src.xs.row(indices[i]);
    std::copy(r.begin(), r.end(), shard.xs.row(i).begin());
    shard.ys[i] = src.ys[indices[i]];
  }
  out.shards.push_back(std::move(shard));
  return out;
}

// Fisher-Yates driven by the counter stream; deterministic per seed.
std::vector<std::size_t> shuffled_indices(std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  const CounterRng rng(seed);
  for (std::size_t i = count; i > 1; --i) {
    const double u = rng.uniform(StreamTag::shuffle, i - 1);
    const auto j = static_cast<std::size_t>(u * static_cast<double>(i));
    std::swap(idx[i - 1], idx[std::min(j, i - 1)]);
  }
  return idx;
}

}  // namespace

Dataset load_text(const std::string& path, TextFormat format, Task task,
                  std::size_t dimension_hint) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::size_t max_index = dimension_hint;
  const auto rows = format == TextFormat::libsvm ? parse_libsvm(in, task, max_index)
                                                 : parse_csv(in, task, max_index);
  return rows_to_dataset(rows, max_index, task);
}

Dataset partition(const Dataset& single, std::size_t m, PartitionPolicy policy,
                  std::uint64_t seed, std::size_t* dropped_rows) {
  if (single.shards.size() != 1) throw DataError("partition: expected a single-shard dataset");
  if (m < 1) throw ConfigError("partition: m must be >= 1");
  const std::size_t total = single.shards.front().rows();
  const std::size_t n = total / m;
  if (n == 0) throw DataError("partition: fewer rows than machines");
  if (dropped_rows) *dropped_rows = total - n * m;

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  if (policy == PartitionPolicy::shuffled) order = shuffled_indices(total, seed);

  const Shard& src = single.shards.front();
  Dataset out;
  out.p = single.p;
  out.task = single.task;
  out.shards.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    Shard shard;
    shard.machine_id = static_cast<int>(j);
    shard.xs = Matrix(n, single.p);
    shard.ys.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = order[j * n + i];
      const auto row = src.xs.row(r);
      std::copy(row.begin(), row.end(), shard.xs.row(i).begin());
      shard.ys[i] = src.ys[r];
    }
    out.shards.push_back(std::move(shard));
  }
  return out;
}

DataSplit split_60_20_20(const Dataset& single, std::uint64_t seed) {
  if (single.shards.size() != 1) throw DataError("split: expected a single-shard dataset");
  const std::size_t total = single.shards.front().rows();
  if (total < 5) throw DataError("split: need at least 5 rows");
  const auto order = shuffled_indices(total, seed);
  const std::size_t n_train = (total * 6) / 10;
  const std::size_t n_val = (total * 2) / 10;
  std::vector<std::size_t> train(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> val(order.begin() + n_train, order.begin() + n_train + n_val);
  std::vector<std::size_t> test(order.begin() + n_train + n_val, order.end());
  return {select_rows(single, train), select_rows(single, val), select_rows(single, test)};
}

TextFormat text_format_from_name(const std::string& name) {
  if (name == "libsvm") return TextFormat::libsvm;
  if (name == "csv") return TextFormat::csv;
  throw ConfigError("unknown format '" + name + "' (expected libsvm|csv)");
}

}  // namespace edsl
