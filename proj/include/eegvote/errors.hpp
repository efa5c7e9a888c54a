#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eegvote {

// Malformed or unusable input data: parse failures, I/O, fold construction.
class DatasetError : public std::runtime_error {
 public:
  explicit DatasetError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  // 1-based source line, 0 when not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Classifier spec string that does not parse or names invalid settings.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fitted-model compatibility problems: arity mismatch, bad model file.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant did not hold.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace eegvote
