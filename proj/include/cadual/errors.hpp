#pragma once

#include <stdexcept>
#include <string>

namespace cadual {

// Raised when an argument violates an operation's precondition
// (dimension mismatch, non-bijective rule, budget overflow, ...).
class InvalidInput : public std::invalid_argument {
public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a numerical routine fails to produce a result that meets
// its own post-condition, e.g. an eigen-solver that does not converge.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cadual
