#pragma once

#include <stdexcept>
#include <string>

namespace aerolog {

// Base for all domain errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ADC code 0: divider reads as an open circuit, no resistance can be derived.
struct SensorSaturatedLow : Error {
  using Error::Error;
};

// Rs reached 0 ohms (full-scale ADC); the power law diverges.
struct SensorSaturatedHigh : Error {
  using Error::Error;
};

// ADC code above the converter's full-scale value.
struct AdcOutOfRange : Error {
  using Error::Error;
};

// Temperature/humidity correction factor evaluated to <= 0.
struct CorrectionDomainError : Error {
  using Error::Error;
};

// Non-positive R0 passed where a calibration constant is required.
struct InvalidCalibration : Error {
  using Error::Error;
};

// Calibration window held no usable samples.
struct EmptyWindow : Error {
  using Error::Error;
};

// Non-finite ppm fed to the alert state machine.
struct InvalidSample : Error {
  using Error::Error;
};

// Sample requested past the end of a scenario.
struct ScenarioEnded : Error {
  using Error::Error;
};

// Malformed scenario/config/input file; message carries field diagnostics.
struct ParseError : Error {
  using Error::Error;
};

struct NotFound : Error {
  using Error::Error;
};

struct StorageError : Error {
  using Error::Error;
};

}  // namespace aerolog
