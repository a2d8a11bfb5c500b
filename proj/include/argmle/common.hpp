#pragma once

#include <stdexcept>
#include <string>

namespace argmle {

/// Raised when an input violates a documented precondition (bad parameter
/// range, length mismatch, malformed configuration).
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a computation fails for numerical reasons (loss of positive
/// definiteness, singular normal equations, ambiguous eigenvalue split).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace argmle
