#pragma once

#include <stdexcept>
#include <string>

namespace fvklab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its mathematical domain.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Parameters are in range but violate a standing hypothesis
/// (r_h <= r0/3, or the stiffness bound at beta = 2).
class AssumptionError : public Error {
 public:
  using Error::Error;
};

/// Radial resolution is insufficient or fields live on mismatched grids.
class GridError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A required Fourier mode exceeds the configured angular cutoff.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Inputs handed to a lemma checker do not satisfy the lemma's hypotheses.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace fvklab
