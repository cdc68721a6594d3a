#pragma once

#include <stdexcept>
#include <string>

namespace tensormp {

/// Invalid argument or violated precondition.
class DomainError : public std::invalid_argument {
  public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A configured resource cap refused the request (exit code 3 at the CLI).
class BudgetError : public std::runtime_error {
  public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown: residue checks, negative eigenvalues beyond tolerance.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tensormp
