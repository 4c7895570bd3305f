#pragma once

#include <stdexcept>

namespace constel {

// Common base so callers can catch library failures with one handler.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Transfer or relative-drift called with source orbit at or above the target.
struct AltitudeOrderError : Error {
  using Error::Error;
};

// Alignment geometry requested for orbits with no relative nodal drift.
struct ZeroDriftError : Error {
  using Error::Error;
};

// A rate that a formula divides by is zero; the scenario is ill posed.
struct DivisionByZeroError : Error {
  using Error::Error;
};

// Argument outside a function's mathematical domain (e.g. MTTR at or below
// the ideal-responsiveness asymptote).
struct DomainError : Error {
  using Error::Error;
};

struct NumericalIntegrationError : Error {
  using Error::Error;
};

struct NoFeasibleSolution : Error {
  using Error::Error;
};

struct SamplingExhausted : Error {
  using Error::Error;
};

// Scenario/decision file problems. All map to CLI exit code 2.
struct ScenarioError : Error {
  using Error::Error;
};
struct ParseError : ScenarioError {
  using ScenarioError::ScenarioError;
};
struct SchemaError : ScenarioError {
  using ScenarioError::ScenarioError;
};
struct UnitError : ScenarioError {
  using ScenarioError::ScenarioError;
};
struct UsageError : ScenarioError {
  using ScenarioError::ScenarioError;
};

}  // namespace constel
