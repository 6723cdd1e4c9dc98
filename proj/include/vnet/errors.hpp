#pragma once

#include <stdexcept>
#include <string>

namespace vnet {

// Malformed input document (bad JSON, missing fields, bad edge-list line).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input that violates a model invariant. The message
// names the violated invariant.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Terminals cannot be connected in the (possibly pruned) graph.
class DisconnectedError : public std::runtime_error {
 public:
  explicit DisconnectedError(const std::string& what) : std::runtime_error(what) {}
};

// An exhaustive enumeration would exceed its configured budget.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Simplex pivot cap exceeded or a comparable numerical breakdown.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vnet
