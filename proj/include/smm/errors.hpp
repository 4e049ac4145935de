#pragma once

#include <stdexcept>
#include <string>

namespace smm {

// Exit-code contract: 0 success, 2 config, 3 data, 4 numerical/estimation.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
  static constexpr int exit_code = 2;
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
  static constexpr int exit_code = 3;
};

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
  static constexpr int exit_code = 4;
};

// Caller violated a documented precondition (bad index, mismatched grids, ...).
struct UsageError : ConfigError {
  explicit UsageError(const std::string& msg) : ConfigError(msg) {}
};

}  // namespace smm
