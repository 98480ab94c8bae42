#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace edsl {

// Process exit codes used by the CLI. Library code throws typed errors;
// the CLI maps them back to these codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitDataError = 3,
  kExitNumericError = 4,
  kExitTransportError = 5,
};

class Error : public std::runtime_error {
 public:
  Error(std::string msg, int code) : std::runtime_error(std::move(msg)), exit_code_(code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::string msg) : Error(std::move(msg), kExitConfigError) {}
};

class DataError : public Error {
 public:
  explicit DataError(std::string msg) : Error(std::move(msg), kExitDataError) {}
};

// Length/shape mismatch between vectors, shards, or problems.
class DimensionError : public DataError {
 public:
  explicit DimensionError(std::string msg) : DataError(std::move(msg)) {}
};

// Non-finite value encountered mid-computation. Carries the last finite
// iterate so callers can salvage a partial result.
class NumericError : public Error {
 public:
  explicit NumericError(std::string msg, std::vector<double> last_finite = {})
      : Error(std::move(msg), kExitNumericError), last_finite_(std::move(last_finite)) {}
  const std::vector<double>& last_finite_iterate() const { return last_finite_; }

 private:
  std::vector<double> last_finite_;
};

class TransportError : public Error {
 public:
  explicit TransportError(std::string msg, std::vector<int> missing = {})
      : Error(std::move(msg), kExitTransportError), missing_(std::move(missing)) {}
  // machine_ids that failed to report within the round deadline, if any
  const std::vector<int>& missing_workers() const { return missing_; }

 private:
  std::vector<int> missing_;
};

}  // namespace edsl
