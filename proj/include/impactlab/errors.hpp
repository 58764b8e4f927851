#pragma once

#include <stdexcept>
#include <string>

namespace impactlab {

// Base class for every error raised by the library. The CLI maps ConfigError
// to exit code 2 and everything else derived from Error to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// f(x) left the representable range (x^rho overflow or NaN).
class KernelOverflow : public Error {
 public:
  using Error::Error;
};

// Some impact I_n <= 0; friction would be undefined.
class PositivityViolation : public Error {
 public:
  using Error::Error;
};

// Friction tail mean is not in (0, 1], so no finite index can be read off.
class NonEquilibrium : public Error {
 public:
  using Error::Error;
};

// Requested relaxation level is at or below the long-run level alpha.
class NoFairPricing : public Error {
 public:
  using Error::Error;
};

class DegenerateWindow : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace impactlab
