#pragma once

#include <stdexcept>
#include <string>

namespace torsion {

// Base of every error raised by the library. The CLI maps the subclasses onto
// exit codes: InvalidArgument -> usage error, everything else -> numerical
// failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidDomain : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

class DegeneratePolygon : public Error {
 public:
  using Error::Error;
};

class EmptyLevelSet : public Error {
 public:
  using Error::Error;
};

class LevelSetTouchesBoundary : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class TooCloseToBoundary : public Error {
 public:
  using Error::Error;
};

class EmptySampleSet : public Error {
 public:
  using Error::Error;
};

class InconsistentBracket : public Error {
 public:
  using Error::Error;
};

class FitRejected : public Error {
 public:
  using Error::Error;
};

class SignChange : public FitRejected {
 public:
  using FitRejected::FitRejected;
};

class BelowNoiseFloor : public FitRejected {
 public:
  using FitRejected::FitRejected;
};

}  // namespace torsion
