#pragma once

#include <stdexcept>
#include <string>

namespace sqg {

// Bad arguments or violated preconditions. The CLI maps these to exit status 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation left the domain where it is defined (Λ⁻¹ of a constant,
// zero-area curvature plane, flow map outside the admissible set, ...).
// The CLI maps these to exit status 3.
class NumericalDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class MetricDegeneracyError : public NumericalDomainError {
 public:
  using NumericalDomainError::NumericalDomainError;
};

class UndefinedCurvatureError : public NumericalDomainError {
 public:
  using NumericalDomainError::NumericalDomainError;
};

class MembershipError : public NumericalDomainError {
 public:
  MembershipError(const std::string& criterion, const std::string& what)
      : NumericalDomainError(what), criterion_(criterion) {}
  const std::string& criterion() const { return criterion_; }

 private:
  std::string criterion_;
};

}  // namespace sqg
