#pragma once

#include <stdexcept>
#include <string>

namespace lifisim {

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coincident endpoints or otherwise unusable geometry.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A numeric argument outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An invalid modulation scheme configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A waveform whose length is not a whole number of symbols.
class FramingError : public Error {
 public:
  using Error::Error;
};

/// The anchor link has zero gain, so no noise level can reproduce it.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// A scenario that violates its own invariants or the requested strategy.
class ScenarioError : public Error {
 public:
  using Error::Error;
};

/// No assignment satisfies the strategy's cardinality constraint.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace lifisim
