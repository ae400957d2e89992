#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sphmax {

/// Argument outside the mathematical domain of an operation (d <= 0, p <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dimension outside the range a deterministic rule supports.
class UnsupportedDimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A rule's measure convention does not match what the computation expects.
class ConventionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid or over-budget configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation at the origin of a singular test function.
class SingularPointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Integrand returned a non-finite value at a quadrature node.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(std::size_t node, const std::string& what)
      : std::runtime_error(what), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

}  // namespace sphmax
