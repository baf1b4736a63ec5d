#pragma once

#include <stdexcept>
#include <string>

namespace vlc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric parameter is outside its admissible range.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Degenerate transmitter/receiver placement (e.g. coincident points).
class InvalidGeometry : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class CalibrationFailed : public Error {
 public:
  using Error::Error;
};

/// No admissible assignment or decoding configuration exists.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// Two map positions whose detectable layer sets differ.
class IncompatiblePositions : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vlc
