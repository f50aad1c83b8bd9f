#pragma once

#include <stdexcept>
#include <string>

namespace ite {

// Validation errors map to CLI exit code 2, numerical failures to 3.
enum class ErrorClass { Validation, Numerical };

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what, ErrorClass cls)
      : std::runtime_error(what), kind_(std::move(kind)), class_(cls) {}

  const std::string& kind() const noexcept { return kind_; }
  ErrorClass error_class() const noexcept { return class_; }

 private:
  std::string kind_;
  ErrorClass class_;
};

#define ITE_DEFINE_ERROR(Name, Class)                                  \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what)                             \
        : Error(#Name, what, ErrorClass::Class) {}                     \
  };

ITE_DEFINE_ERROR(InvalidProfile, Validation)
ITE_DEFINE_ERROR(DomainError, Validation)
ITE_DEFINE_ERROR(ParseError, Validation)
ITE_DEFINE_ERROR(UsageError, Validation)
ITE_DEFINE_ERROR(RegionTooSmall, Validation)
ITE_DEFINE_ERROR(QuadratureFailure, Numerical)
ITE_DEFINE_ERROR(StepUnderflow, Numerical)
ITE_DEFINE_ERROR(NotAnEigenvalue, Numerical)
ITE_DEFINE_ERROR(BoundaryZero, Numerical)
ITE_DEFINE_ERROR(Unresolved, Numerical)
ITE_DEFINE_ERROR(NoConvergence, Numerical)
ITE_DEFINE_ERROR(DegenerateProfile, Numerical)
ITE_DEFINE_ERROR(InsufficientData, Numerical)

#undef ITE_DEFINE_ERROR

}  // namespace ite
