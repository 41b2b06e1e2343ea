#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace compactvis {

/// Argument outside its permitted range (step index, curve distance, quadrant).
class RangeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Inconsistent or missing configuration (bands/slices, palette, quadrants).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Sequences whose lengths must agree do not.
class ShapeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Rejection sampling ran out of attempts.
class GenerationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class FileError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised by the scorer; carries one message per offending record.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "validation failed:";
    for (const auto& item : items) {
      out += "\n  ";
      out += item;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

}  // namespace compactvis
