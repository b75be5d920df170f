#pragma once

#include <stdexcept>
#include <string>

namespace fellkit {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class InvalidDescriptorError : public Error {
 public:
  using Error::Error;
};

class CompositionError : public Error {
 public:
  using Error::Error;
};

class EnumerationCapError : public Error {
 public:
  using Error::Error;
};

class LocalTrivialityError : public Error {
 public:
  using Error::Error;
};

class FrameError : public Error {
 public:
  using Error::Error;
};

class CovarianceError : public Error {
 public:
  using Error::Error;
};

class NotATwistError : public Error {
 public:
  using Error::Error;
};

class SupportError : public Error {
 public:
  using Error::Error;
};

class ContractViolation : public Error {
 public:
  using Error::Error;
};

class NonOrientableError : public Error {
 public:
  using Error::Error;
};

class IncompleteSupportError : public Error {
 public:
  using Error::Error;
};

class InvalidBundleError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Bad command-line configuration (unknown preset, conflicting inputs).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Wraps an error raised inside a multi-stage pipeline with the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace fellkit
