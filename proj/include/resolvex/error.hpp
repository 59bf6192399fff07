#pragma once

#include <stdexcept>
#include <string>

namespace resolvex {

enum class ErrorKind {
  Syntax,
  DuplicateState,
  UnknownSymbol,
  UnknownState,
  NotStochastic,
  AlphabetMismatch,
  DegreeCapExceeded,
  StateBudgetExceeded,
  NotUnambiguous,
  NotPositivelyResolvable,
  InfiniteAmbiguity,
  AmbiguityUnknown,
  NotUnary,
  PeriodTooLarge,
  Parameter,
  NonSimple,
  NonUniversal,
  NonDeterministic,
  NumericalFailure,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace resolvex
