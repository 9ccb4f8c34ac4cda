#pragma once

#include <stdexcept>
#include <string>

namespace qgauss {

// Root of every error raised by the library.  Each subclass names one
// failure mode so callers (and the CLI) can map them to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotAnImmersion : public Error {
 public:
  using Error::Error;
};

class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

class NotOnStiefel : public Error {
 public:
  using Error::Error;
};

class BaseMismatch : public Error {
 public:
  using Error::Error;
};

class FrameNotAdapted : public Error {
 public:
  using Error::Error;
};

class UndefinedCot : public Error {
 public:
  using Error::Error;
};

class InvariantUndefined : public Error {
 public:
  using Error::Error;
};

// Loop integral of the connection form too large: the input is either not
// Lagrangian or sampled too coarsely.
class NotLagrangian : public Error {
 public:
  using Error::Error;
};

class DegenerateParameter : public Error {
 public:
  using Error::Error;
};

class DepthExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class StepUnderflow : public Error {
 public:
  using Error::Error;
};

class EmptyGrid : public Error {
 public:
  using Error::Error;
};

}  // namespace qgauss
