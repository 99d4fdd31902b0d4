#pragma once

#include <stdexcept>
#include <string>

namespace proxibound {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input: codebook/spec/config JSON, CSV header mismatch, bad shapes.
struct SchemaError : Error {
  using Error::Error;
};

// A conditional was requested on an event with zero (smoothed) mass.
struct ZeroConditioningMass : Error {
  using Error::Error;
};

// p(a|...) = 0 somewhere an estimand or bridge system needs it positive.
struct PositivityViolation : Error {
  using Error::Error;
};

// intersect_bounds over intervals with empty intersection.
struct EmptyIntersection : Error {
  using Error::Error;
};

// File-system / parse-stream failures.
struct IoError : Error {
  using Error::Error;
};

}  // namespace proxibound
