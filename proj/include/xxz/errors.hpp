#pragma once

#include <stdexcept>
#include <string>

namespace xxz {

/// A numerical procedure could not reach the requested accuracy. Carries the
/// best error estimate it did achieve.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Input outside the mathematical domain of an operation (non-finite
/// coupling, unphysical state, non-unit direction, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested computation exceeds a configured resource budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EigensolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xxz
