#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bpiree {

// Raised when an iterate or objective value stops being finite.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, std::int64_t iteration = -1,
                   std::ptrdiff_t block = -1, double objective = 0.0)
      : std::runtime_error(what),
        iteration_(iteration),
        block_(block),
        objective_(objective) {}

  std::int64_t iteration() const noexcept { return iteration_; }
  std::ptrdiff_t block() const noexcept { return block_; }
  double objective() const noexcept { return objective_; }

 private:
  std::int64_t iteration_;
  std::ptrdiff_t block_;
  double objective_;
};

class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed configuration or instance document; the message names the field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bpiree
