#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cubetopo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (dimension mismatch,
/// unknown vertex, cube not in space, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An exact computation would exceed a hard size cap.
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// A bounded search ran out of states before reaching a verdict.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A contractible transformation was requested whose simplicity
/// certificate does not hold. Carries the offending rim.
class CertificateError : public Error {
 public:
  CertificateError(const std::string& what, std::vector<std::string> rim)
      : Error(what), rim_(std::move(rim)) {}

  const std::vector<std::string>& rim() const { return rim_; }

 private:
  std::vector<std::string> rim_;
};

}  // namespace cubetopo
