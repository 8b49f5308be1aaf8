#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace secmarkov {

// Malformed input: bad vector strings, schema violations, bad dates, bad flags.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structurally well-formed attack graph that breaks a model invariant.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "attack graph failed validation";
    for (const auto& item : items) {
      out += "\n  - ";
      out += item;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

// Linear algebra or normalization failure (singular I - Q, zero row mass).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace secmarkov
