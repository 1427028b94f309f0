#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aerolog/alerting.hpp"
#include "aerolog/scenario.hpp"
#include "aerolog/sensor.hpp"

namespace aerolog::sim {

// What the firmware would hold in flash: wiring constants, cadences, and the
// upload target credentials.
struct DeviceConfig {
  double device_r_zero = 15568.0;  // the simulated sensor's true R0, ohms
  std::optional<double> firmware_r_zero;  // override to model miscalibration
  sensor::SensorParams params;
  double sample_period_s = 2.0;   // display/sample cadence
  double upload_period_s = 15.0;  // telemetry cadence
  std::int64_t channel_id = 1;
  std::string write_key;
  alert::AlertConfig alert;
  std::int64_t start_at = 0;  // unix seconds mapped to scenario t = 0

  double effective_firmware_r_zero() const {
    return firmware_r_zero.value_or(device_r_zero);
  }
  void validate() const;
};

DeviceConfig parse_device_config(const std::string& json_text);
std::vector<DeviceConfig> parse_device_configs(const std::string& json_text);
std::vector<DeviceConfig> load_device_configs(const std::string& path);

struct UploadFields {
  // field index (1..8) -> exact decimal string sent on the wire
  std::map<int, std::string> values;
};

struct UploadOutcome {
  bool ok = false;
  int http_status = 0;
  std::optional<std::int64_t> entry_id;
  std::string error;  // transport-level failure text, empty when none
};

// Where /update requests land: a real server, a black hole, or a test stub.
class UploadSink {
 public:
  virtual ~UploadSink() = default;
  virtual UploadOutcome send(const std::string& write_key,
                             const UploadFields& fields) = 0;
};

class OfflineSink final : public UploadSink {
 public:
  UploadOutcome send(const std::string&, const UploadFields&) override;
};

class HttpSink final : public UploadSink {
 public:
  explicit HttpSink(std::string base_url);
  UploadOutcome send(const std::string& write_key,
                     const UploadFields& fields) override;

 private:
  std::string base_url_;
};

struct UploadRecord {
  UploadFields fields;
  UploadOutcome outcome;
};

struct TickReport {
  std::int64_t at = 0;  // unix seconds (start_at + scenario offset)
  sensor::GasReading reading;
  alert::Display display;
  std::optional<alert::AlertEvent> alert_event;
  std::optional<UploadRecord> upload;
};

// Deterministic gaussian source; the stream is pinned by the seed alone so
// simulations replay bit-exactly on any platform.
class NoiseRng {
 public:
  explicit NoiseRng(std::uint64_t seed);
  double gaussian();  // standard normal

 private:
  double uniform01();
  std::uint64_t state_[4];
};

// Inverse of the firmware pipeline: ground truth -> ADC code. Rounds half
// away from zero and clamps to [1, adc_max - 1].
int adc_from_truth(double co2_ppm, double temperature_c, double humidity_pct,
                   double device_r_zero, const sensor::SensorParams& params);

// Same inversion without rounding, for exactness checks.
double adc_from_truth_real(double co2_ppm, double temperature_c,
                           double humidity_pct, double device_r_zero,
                           const sensor::SensorParams& params);

// One firmware sample at `at` seconds into the scenario: interpolate truth,
// quantize DHT11, invert to an ADC code, add noise, then derive the reading
// the firmware would compute from that code.
sensor::GasReading sample(const Scenario& scenario, double at_seconds,
                          const DeviceConfig& config, NoiseRng& rng);

using TickCallback = std::function<void(const TickReport&)>;

struct RunStats {
  std::int64_t ticks = 0;
  std::int64_t uploads_attempted = 0;
  std::int64_t uploads_accepted = 0;
  std::int64_t alerts_raised = 0;
  std::int64_t alerts_cleared = 0;
};

// Full firmware loop over the scenario: sample -> alert step -> display ->
// periodic upload. Upload failures are recorded and the loop continues.
// When real_time is set the loop sleeps out each sample period.
RunStats run_device(const Scenario& scenario, const DeviceConfig& config,
                    UploadSink& sink, const TickCallback& on_tick,
                    bool real_time = false,
                    std::optional<std::uint64_t> seed_override = std::nullopt);

// JSON-lines encodings used by the simulate command and its consumers.
std::string tick_to_json_line(const TickReport& tick,
                              std::optional<int> device_index = std::nullopt);
std::string event_to_json_line(const alert::AlertEvent& event);

}  // namespace aerolog::sim
