#pragma once

#include <stdexcept>
#include <string>

namespace percept {

// Root of every domain error raised by the library. The CLI maps all of
// these to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input is well-formed but violates a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Input document does not match the expected schema. `path` is a JSON
// pointer to the offending value.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& reason)
      : Error(path + ": " + reason), path_(std::move(path)), reason_(reason) {}
  const std::string& path() const noexcept { return path_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string path_;
  std::string reason_;
};

#define PERCEPT_DEFINE_ERROR(Name, Base) \
  class Name : public Base {             \
   public:                               \
    using Base::Base;                    \
  }

PERCEPT_DEFINE_ERROR(CycleError, ValidationError);
PERCEPT_DEFINE_ERROR(DuplicateNode, ValidationError);
PERCEPT_DEFINE_ERROR(UnknownEndpoint, ValidationError);
PERCEPT_DEFINE_ERROR(UnknownNode, ValidationError);
PERCEPT_DEFINE_ERROR(OverlappingSets, ValidationError);
PERCEPT_DEFINE_ERROR(DuplicateTarget, ValidationError);
PERCEPT_DEFINE_ERROR(NonFiniteValue, ValidationError);
PERCEPT_DEFINE_ERROR(UnknownTarget, ValidationError);
PERCEPT_DEFINE_ERROR(UnknownVariable, ValidationError);
PERCEPT_DEFINE_ERROR(VariableMismatch, ValidationError);
PERCEPT_DEFINE_ERROR(DimensionMismatch, ValidationError);
PERCEPT_DEFINE_ERROR(MissingDescriptors, ValidationError);
PERCEPT_DEFINE_ERROR(OutOfRangeProbability, ValidationError);
PERCEPT_DEFINE_ERROR(SingularCovariance, Error);
PERCEPT_DEFINE_ERROR(TooFewRows, Error);
PERCEPT_DEFINE_ERROR(NoSharedVariables, Error);
PERCEPT_DEFINE_ERROR(EmptyMatchedSet, Error);

#undef PERCEPT_DEFINE_ERROR

}  // namespace percept
