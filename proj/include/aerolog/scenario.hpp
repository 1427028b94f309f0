#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace aerolog::sim {

// A linear ramp of ground truth over one stretch of time.
struct Segment {
  double duration_s = 0.0;
  double co2_start = 0.0, co2_end = 0.0;           // ppm
  double temp_start = 0.0, temp_end = 0.0;         // deg C
  double humidity_start = 0.0, humidity_end = 0.0; // %RH
};

struct GroundTruth {
  double co2 = 0.0;
  double temperature_c = 0.0;
  double humidity_pct = 0.0;
};

// Piecewise-linear trajectory driving a simulated room. Stands in for the
// physical air the sensor would sit in.
struct Scenario {
  std::string name;
  std::vector<Segment> segments;
  double adc_sigma = 0.0;  // gaussian noise on the ADC count
  std::uint64_t seed = 0;

  double total_duration() const;

  // Interpolated truth at `at` seconds from scenario start. Throws
  // ScenarioEnded for at < 0 or at >= total_duration().
  GroundTruth at(double at_seconds) const;

  void validate() const;  // throws ParseError with a field path
};

// Scenario document, `schema: 1`, JSON. See docs/scenarios.md.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

}  // namespace aerolog::sim
