#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "aerolog/sensor.hpp"

namespace aerolog::alert {

struct AlertConfig {
  double threshold = 500.0;  // ppm; trips strictly above this
  double hysteresis = 0.0;   // ppm; clears at threshold - hysteresis
  bool strict = true;        // strictly-greater-than comparison at the trip
};

enum class Mode { Normal, Alert };
enum class Line { Low, High };

enum class EventKind { Raised, Cleared };

struct AlertEvent {
  EventKind kind = EventKind::Raised;
  double ppm = 0.0;
  std::int64_t at = 0;
  std::int64_t channel_id = 0;
};

// Mode plus the two output lines it drives. The lines are a pure function of
// mode: Alert -> buzzer High / ok Low, Normal -> buzzer Low / ok High.
struct AlertState {
  Mode mode = Mode::Normal;
  Line buzzer_line = Line::Low;
  Line ok_line = Line::High;
  std::int64_t since = 0;  // unix seconds of the last transition

  static AlertState normal(std::int64_t at) { return AlertState{Mode::Normal, Line::Low, Line::High, at}; }
  static AlertState alerting(std::int64_t at) { return AlertState{Mode::Alert, Line::High, Line::Low, at}; }
};

struct StepResult {
  AlertState state;
  std::optional<AlertEvent> event;
};

// One FSM transition. Pure: the caller keeps whatever state it passes in.
// Throws InvalidSample for non-finite ppm.
StepResult step(const AlertState& state, double ppm, std::int64_t at,
                const AlertConfig& config, std::int64_t channel_id = 0);

// A 16x2 character frame, as the firmware would paint it.
struct DisplayFrame {
  std::array<std::string, 2> lines;  // trailing padding trimmed
};

struct Display {
  DisplayFrame temp_humidity;  // "Temp=25.00C" / "Humidity=60 %"
  DisplayFrame co2;            // "CO2 PPM-450.00" / "HIGH PPM ALERT" when alerting
};

Display render_display(const sensor::GasReading& reading,
                       const AlertState& state);

}  // namespace aerolog::alert
