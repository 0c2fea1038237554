#pragma once

#include <stdexcept>
#include <string>

namespace skg {

// Malformed or inconsistent input: bad PMF, mismatched sizes, parse failure.
class SpecError : public std::invalid_argument {
 public:
  explicit SpecError(const std::string& what) : std::invalid_argument(what) {}
};

// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A computation would exceed a configured memory or enumeration budget.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Marginal estimation found no class with finite likelihood.
class NoAdmissibleClass : public std::runtime_error {
 public:
  NoAdmissibleClass() : std::runtime_error("no admissible class") {}
};

}  // namespace skg
