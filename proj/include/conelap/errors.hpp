#pragma once

#include <stdexcept>
#include <string>

namespace conelap {

// Bad arguments or out-of-domain requests. The CLI maps these to exit code 1.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical breakdown on otherwise valid input. The CLI maps these to exit code 2.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Indicial equation has a (near) double root; the power-series basis degenerates.
class DegenerateRootError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

// A recursion denominator (m+2)(2nu+m+n) vanished.
class SingularDenominatorError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

// Adaptive integrator step collapsed below 1e-14 * span.
class StepUnderflowError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace conelap
