#include "aerolog/device.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <httplib.h>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "aerolog/errors.hpp"
#include "aerolog/params_io.hpp"
#include "aerolog/time_util.hpp"

namespace aerolog::sim {
namespace {

using nlohmann::json;

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

DeviceConfig device_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw ParseError("device config: expected a JSON object");
  }
  DeviceConfig cfg;
  cfg.device_r_zero = doc.value("device_r_zero", cfg.device_r_zero);
  if (doc.contains("firmware_r_zero") && !doc["firmware_r_zero"].is_null()) {
    cfg.firmware_r_zero = doc["firmware_r_zero"].get<double>();
  }
  if (doc.contains("params")) cfg.params = params_from_json(doc["params"]);
  cfg.sample_period_s = doc.value("sample_period_s", cfg.sample_period_s);
  cfg.upload_period_s = doc.value("upload_period_s", cfg.upload_period_s);
  cfg.channel_id = doc.value("channel_id", cfg.channel_id);
  cfg.write_key = doc.value("write_key", cfg.write_key);
  if (doc.contains("alert")) {
    const json& a = doc["alert"];
    cfg.alert.threshold = a.value("threshold", cfg.alert.threshold);
    cfg.alert.hysteresis = a.value("hysteresis", cfg.alert.hysteresis);
    cfg.alert.strict = a.value("strict", cfg.alert.strict);
  }
  if (doc.contains("start_at")) {
    if (doc["start_at"].is_string()) {
      auto t = parse_instant(doc["start_at"].get<std::string>());
      if (!t) throw ParseError("start_at: not a recognizable instant");
      cfg.start_at = *t;
    } else {
      cfg.start_at = doc["start_at"].get<std::int64_t>();
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace

void DeviceConfig::validate() const {
  params.validate();
  if (!(device_r_zero > 0.0)) {
    throw ParseError("device_r_zero: must be > 0");
  }
  if (firmware_r_zero && !(*firmware_r_zero > 0.0)) {
    throw ParseError("firmware_r_zero: must be > 0");
  }
  if (!(sample_period_s > 0.0)) {
    throw ParseError("sample_period_s: must be > 0");
  }
  if (upload_period_s < sample_period_s) {
    throw ParseError("upload_period_s: must be >= sample_period_s");
  }
  if (!(alert.threshold > 0.0)) {
    throw ParseError("alert.threshold: must be > 0");
  }
  if (alert.hysteresis < 0.0) {
    throw ParseError("alert.hysteresis: must be >= 0");
  }
}

DeviceConfig parse_device_config(const std::string& json_text) {
  auto all = parse_device_configs(json_text);
  if (all.size() != 1) {
    throw ParseError("expected a single device config, got " +
                     std::to_string(all.size()));
  }
  return all.front();
}

std::vector<DeviceConfig> parse_device_configs(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("device config is not valid JSON: ") +
                     e.what());
  }
  std::vector<DeviceConfig> out;
  if (doc.is_array()) {
    if (doc.empty()) throw ParseError("device config array is empty");
    for (const auto& d : doc) out.push_back(device_from_json(d));
  } else {
    out.push_back(device_from_json(doc));
  }
  return out;
}

std::vector<DeviceConfig> load_device_configs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open device config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_device_configs(buf.str());
}

UploadOutcome OfflineSink::send(const std::string&, const UploadFields&) {
  UploadOutcome out;
  out.ok = false;
  out.error = "offline";
  return out;
}

HttpSink::HttpSink(std::string base_url) : base_url_(std::move(base_url)) {}

UploadOutcome HttpSink::send(const std::string& write_key,
                             const UploadFields& fields) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(5);
  client.set_read_timeout(10);
  httplib::Params params;
  params.emplace("api_key", write_key);
  for (const auto& [idx, value] : fields.values) {
    params.emplace("field" + std::to_string(idx), value);
  }
  auto res = client.Post("/update", params);
  UploadOutcome out;
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.http_status = res->status;
  out.ok = res->status == 200;
  if (out.ok) {
    try {
      out.entry_id = std::stoll(res->body);
    } catch (const std::exception&) {
      out.ok = false;
      out.error = "unparseable entry id in response body";
    }
  }
  return out;
}

// xoshiro256++, seeded via splitmix64. Fixed here so streams never shift
// underneath recorded runs when the standard library changes.
NoiseRng::NoiseRng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : state_) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    s = z ^ (z >> 31);
  }
}

double NoiseRng::uniform01() {
  auto rotl = [](std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  };
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return static_cast<double>(result >> 11) * 0x1.0p-53;
}

double NoiseRng::gaussian() {
  // Box-Muller; one normal per call, the spare is discarded.
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double adc_from_truth_real(double co2_ppm, double temperature_c,
                           double humidity_pct, double device_r_zero,
                           const sensor::SensorParams& params) {
  if (!(co2_ppm > 0.0)) {
    throw ParseError("ground-truth co2 must be > 0");
  }
  const double rs_corrected =
      device_r_zero *
      std::pow(co2_ppm / params.ppm_scale, -1.0 / params.ppm_exponent);
  const double f =
      sensor::correction_factor(temperature_c, humidity_pct, params);
  const double rs = rs_corrected * f;
  return static_cast<double>(params.adc_max) * params.r_load /
         (rs + params.r_load);
}

int adc_from_truth(double co2_ppm, double temperature_c, double humidity_pct,
                   double device_r_zero, const sensor::SensorParams& params) {
  const double real = adc_from_truth_real(co2_ppm, temperature_c, humidity_pct,
                                          device_r_zero, params);
  auto adc = static_cast<int>(std::llround(real));
  adc = std::max(1, std::min(params.adc_max - 1, adc));
  return adc;
}

sensor::GasReading sample(const Scenario& scenario, double at_seconds,
                          const DeviceConfig& config, NoiseRng& rng) {
  const GroundTruth truth = scenario.at(at_seconds);
  const auto dht =
      sensor::quantize_dht11(truth.temperature_c, truth.humidity_pct);

  int adc = adc_from_truth(truth.co2, dht.temperature_c, dht.humidity_pct,
                           config.device_r_zero, config.params);
  if (scenario.adc_sigma > 0.0) {
    const double noisy = adc + rng.gaussian() * scenario.adc_sigma;
    adc = static_cast<int>(std::llround(noisy));
    adc = std::max(1, std::min(config.params.adc_max - 1, adc));
  }

  const double firmware_r0 = config.effective_firmware_r_zero();
  sensor::GasReading r;
  r.timestamp = config.start_at + static_cast<std::int64_t>(at_seconds);
  r.adc = adc;
  r.rs = sensor::resistance_from_adc(adc, config.params);
  r.r_zero = firmware_r0;
  r.raw_ppm = sensor::ppm_from_resistance(r.rs, firmware_r0, config.params);
  r.corrected_ppm = sensor::corrected_ppm(adc, dht.temperature_c,
                                          dht.humidity_pct, firmware_r0,
                                          config.params);
  r.temperature_c = dht.temperature_c;
  r.humidity_pct = dht.humidity_pct;
  return r;
}

RunStats run_device(const Scenario& scenario, const DeviceConfig& config,
                    UploadSink& sink, const TickCallback& on_tick,
                    bool real_time,
                    std::optional<std::uint64_t> seed_override) {
  NoiseRng rng(seed_override.value_or(scenario.seed));
  auto state = alert::AlertState::normal(config.start_at);
  const double total = scenario.total_duration();
  double next_upload = 0.0;
  RunStats stats;

  for (std::int64_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * config.sample_period_s;
    if (t >= total) break;
    TickReport tick;
    tick.reading = sample(scenario, t, config, rng);
    tick.at = tick.reading.timestamp;

    auto stepped = alert::step(state, tick.reading.corrected_ppm, tick.at,
                               config.alert, config.channel_id);
    state = stepped.state;
    tick.alert_event = stepped.event;
    if (stepped.event) {
      if (stepped.event->kind == alert::EventKind::Raised) {
        ++stats.alerts_raised;
      } else {
        ++stats.alerts_cleared;
      }
    }
    tick.display = alert::render_display(tick.reading, state);

    if (t >= next_upload) {
      UploadRecord up;
      up.fields.values[1] = fixed2(tick.reading.temperature_c);
      up.fields.values[2] = std::to_string(tick.reading.humidity_pct);
      up.fields.values[3] = fixed2(tick.reading.corrected_ppm);
      up.outcome = sink.send(config.write_key, up.fields);
      ++stats.uploads_attempted;
      if (up.outcome.ok) ++stats.uploads_accepted;
      tick.upload = std::move(up);
      next_upload += config.upload_period_s;
    }

    ++stats.ticks;
    if (on_tick) on_tick(tick);
    if (real_time) {
      std::this_thread::sleep_for(
          std::chrono::duration<double>(config.sample_period_s));
    }
  }
  return stats;
}

std::string tick_to_json_line(const TickReport& tick,
                              std::optional<int> device_index) {
  json j;
  if (device_index) j["device"] = *device_index;
  j["at"] = format_iso8601(tick.at);
  j["reading"] = {
      {"timestamp", format_iso8601(tick.reading.timestamp)},
      {"adc", tick.reading.adc},
      {"rs", tick.reading.rs},
      {"r_zero", tick.reading.r_zero},
      {"raw_ppm", tick.reading.raw_ppm},
      {"corrected_ppm", tick.reading.corrected_ppm},
      {"temperature_c", tick.reading.temperature_c},
      {"humidity_pct", tick.reading.humidity_pct},
  };
  j["display"] = {
      {"temp_humidity", tick.display.temp_humidity.lines},
      {"co2", tick.display.co2.lines},
  };
  if (tick.alert_event) {
    const auto& e = *tick.alert_event;
    j["alert"] = {
        {"kind", e.kind == alert::EventKind::Raised ? "raised" : "cleared"},
        {"ppm", e.ppm},
        {"at", format_iso8601(e.at)},
        {"channel_id", e.channel_id},
    };
  } else {
    j["alert"] = nullptr;
  }
  if (tick.upload) {
    json fields = json::object();
    for (const auto& [idx, value] : tick.upload->fields.values) {
      fields["field" + std::to_string(idx)] = value;
    }
    json outcome = {
        {"ok", tick.upload->outcome.ok},
        {"http_status", tick.upload->outcome.http_status},
    };
    if (tick.upload->outcome.entry_id) {
      outcome["entry_id"] = *tick.upload->outcome.entry_id;
    } else {
      outcome["entry_id"] = nullptr;
    }
    if (!tick.upload->outcome.error.empty()) {
      outcome["error"] = tick.upload->outcome.error;
    }
    j["upload"] = {{"fields", fields}, {"outcome", outcome}};
  } else {
    j["upload"] = nullptr;
  }
  return j.dump();
}

std::string event_to_json_line(const alert::AlertEvent& event) {
  json j = {
      {"kind", event.kind == alert::EventKind::Raised ? "raised" : "cleared"},
      {"ppm", event.ppm},
      {"at", format_iso8601(event.at)},
      {"channel_id", event.channel_id},
  };
  return j.dump();
}

}  // namespace aerolog::sim
