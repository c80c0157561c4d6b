#pragma once

#include <stdexcept>
#include <string>

namespace corona {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed group tables, irreps, symbols or configs.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class WindowOverflow : public Error {
 public:
  using Error::Error;
};

class DivergentProbe : public Error {
 public:
  using Error::Error;
};

class UnsupportedAlgebraPattern : public Error {
 public:
  using Error::Error;
};

class NotSlowlyOscillating : public Error {
 public:
  using Error::Error;
};

class TermCapExceeded : public Error {
 public:
  using Error::Error;
};

class MarginTooSmall : public Error {
 public:
  using Error::Error;
};

class NonAbelianGroup : public Error {
 public:
  using Error::Error;
};

class UnsupportedLimitKernel : public Error {
 public:
  using Error::Error;
};

class IncommensurablePeriods : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class EmptyRegion : public Error {
 public:
  using Error::Error;
};

}  // namespace corona
