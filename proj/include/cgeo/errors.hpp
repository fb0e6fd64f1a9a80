#pragma once

#include <stdexcept>
#include <string>

namespace cgeo {

// Point outside a chart's validity region.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A precondition on the input object failed (e.g. a "form" that is not
// antisymmetric, a structure that is not of the required class).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Singular or non-finite linear algebra.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid scalar parameter (e.g. a non-positive deformation constant).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is valid but outside what the operation supports.
class UnsupportedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two independent computations of the same object disagree.
class InternalConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model failed one of its registration assertions.
class ModelBuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cgeo
