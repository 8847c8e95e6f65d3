#pragma once

#include <stdexcept>
#include <string>

namespace posespace {

enum class ErrorKind
{
  InvalidInput,
  DegenerateMesh,
  SymmetryMismatch,
  NotAGroup,
  NoUniqueProjection,
  NoConsistentTuple,
  GuardExceeded,
  EmptyInput,
  Io,
};

const char*
to_string(ErrorKind kind);

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message)
    , kind_(kind)
  {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Raised when a point of the ambient space has no unique closest pose.
/// `residual` is the quantity that fell below the uniqueness threshold
/// (norm of the axis block, or the second singular value).
class ProjectionError : public Error
{
public:
  ProjectionError(const std::string& message, double residual)
    : Error(ErrorKind::NoUniqueProjection, message)
    , residual_(residual)
  {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

[[noreturn]] inline void
fail(ErrorKind kind, const std::string& message)
{
  throw Error(kind, message);
}

} // namespace posespace
