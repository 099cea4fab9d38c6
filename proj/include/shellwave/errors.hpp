#pragma once

#include <stdexcept>
#include <string>

namespace shellwave {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input violated a documented precondition (bad window, eps out of range...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

// clifford / coupling
class ConfinementCase : public Error {
public:
  using Error::Error;
};
class ExcludedInput : public Error {
public:
  using Error::Error;
};
class NoPreimage : public Error {
public:
  using Error::Error;
};
class Overflow : public Error {
public:
  using Error::Error;
};

// geometry
class DegenerateChart : public Error {
public:
  using Error::Error;
};
class TubeExceeded : public Error {
public:
  using Error::Error;
};
class OutsideTube : public Error {
public:
  using Error::Error;
};
class NonConvergence : public Error {
public:
  using Error::Error;
};

// mollifier / shell_field
class EvaluationAtZero : public Error {
public:
  using Error::Error;
};
class OnSurface : public Error {
public:
  using Error::Error;
};

// radial / convergence
class StepUnderflow : public Error {
public:
  using Error::Error;
};
class NotAnEigenvalue : public Error {
public:
  using Error::Error;
};
class NoEigenpair : public Error {
public:
  using Error::Error;
};
class DegenerateFit : public Error {
public:
  using Error::Error;
};

// cli
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace shellwave
