#include "aerolog/alerting.hpp"

#include <cmath>
#include <cstdio>

#include "aerolog/errors.hpp"

namespace aerolog::alert {
namespace {

constexpr std::size_t kLcdCols = 16;

// Emulated 16-column LCD row: writes land at a cursor column and anything
// past column 15 is dropped, matching the hardware.
class LcdRow {
 public:
  LcdRow() : cells_(kLcdCols, ' ') {}

  void write(std::size_t col, const std::string& text) {
    for (std::size_t i = 0; i < text.size() && col + i < kLcdCols; ++i) {
      cells_[col + i] = text[i];
    }
  }

  std::string str() const {
    std::size_t end = cells_.size();
    while (end > 0 && cells_[end - 1] == ' ') --end;
    return cells_.substr(0, end);
  }

 private:
  std::string cells_;
};

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

bool trips(double ppm, const AlertConfig& config) {
  return config.strict ? ppm > config.threshold : ppm >= config.threshold;
}

}  // namespace

StepResult step(const AlertState& state, double ppm, std::int64_t at,
                const AlertConfig& config, std::int64_t channel_id) {
  if (!std::isfinite(ppm)) {
    throw InvalidSample("non-finite ppm sample");
  }
  StepResult out{state, std::nullopt};
  if (state.mode == Mode::Normal) {
    if (trips(ppm, config)) {
      out.state = AlertState::alerting(at);
      out.event = AlertEvent{EventKind::Raised, ppm, at, channel_id};
    }
  } else {
    if (ppm <= config.threshold - config.hysteresis) {
      out.state = AlertState::normal(at);
      out.event = AlertEvent{EventKind::Cleared, ppm, at, channel_id};
    }
  }
  return out;
}

Display render_display(const sensor::GasReading& reading,
                       const AlertState& state) {
  Display d;

  LcdRow r0;
  r0.write(0, "Temp=" + fixed2(reading.temperature_c));
  r0.write(10, "C");
  LcdRow r1;
  r1.write(0, "Humidity=" + std::to_string(reading.humidity_pct));
  r1.write(12, "%");
  d.temp_humidity.lines = {r0.str(), r1.str()};

  LcdRow c0;
  c0.write(0, "CO2 PPM-" + fixed2(reading.corrected_ppm));
  LcdRow c1;
  if (state.mode == Mode::Alert) {
    c1.write(0, "HIGH PPM ALERT");
  }
  d.co2.lines = {c0.str(), c1.str()};
  return d;
}

}  // namespace aerolog::alert
