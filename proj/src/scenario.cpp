#include "aerolog/scenario.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "aerolog/errors.hpp"

namespace aerolog::sim {
namespace {

using nlohmann::json;

// Reads either a single number (constant) or a [start, end] pair (ramp).
void read_ramp(const json& seg, const char* key, std::size_t index,
               double& start, double& end) {
  const std::string where =
      "segments[" + std::to_string(index) + "]." + key;
  if (!seg.contains(key)) {
    throw ParseError(where + ": missing");
  }
  const json& v = seg.at(key);
  if (v.is_number()) {
    start = end = v.get<double>();
    return;
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    start = v[0].get<double>();
    end = v[1].get<double>();
    return;
  }
  throw ParseError(where + ": expected a number or [start, end]");
}

}  // namespace

double Scenario::total_duration() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.duration_s;
  return total;
}

GroundTruth Scenario::at(double at_seconds) const {
  if (at_seconds < 0.0) {
    throw ScenarioEnded("negative scenario time");
  }
  double t = at_seconds;
  for (const auto& s : segments) {
    if (t < s.duration_s) {
      const double p = t / s.duration_s;
      return GroundTruth{
          s.co2_start + (s.co2_end - s.co2_start) * p,
          s.temp_start + (s.temp_end - s.temp_start) * p,
          s.humidity_start + (s.humidity_end - s.humidity_start) * p,
      };
    }
    t -= s.duration_s;
  }
  throw ScenarioEnded("scenario '" + name + "' ended at " +
                      std::to_string(total_duration()) + " s");
}

void Scenario::validate() const {
  if (segments.empty()) {
    throw ParseError("segments: at least one segment required");
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    const std::string where = "segments[" + std::to_string(i) + "]";
    if (!(s.duration_s > 0.0)) {
      throw ParseError(where + ".duration_s: must be > 0");
    }
    if (!(s.co2_start > 0.0) || !(s.co2_end > 0.0)) {
      throw ParseError(where + ".co2: must stay > 0");
    }
    for (double h : {s.humidity_start, s.humidity_end}) {
      if (h < 0.0 || h > 100.0) {
        throw ParseError(where + ".humidity_pct: must stay within [0, 100]");
      }
    }
  }
  if (!(adc_sigma >= 0.0)) {
    throw ParseError("noise.adc_sigma: must be >= 0");
  }
}

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario: expected a JSON object");
  if (!doc.contains("schema") || !doc["schema"].is_number_integer() ||
      doc["schema"].get<int>() != 1) {
    throw ParseError("schema: required and must be 1");
  }

  Scenario sc;
  sc.name = doc.value("name", std::string("unnamed"));
  sc.seed = doc.value("seed", std::uint64_t{0});
  if (doc.contains("noise")) {
    if (!doc["noise"].is_object()) {
      throw ParseError("noise: expected an object");
    }
    sc.adc_sigma = doc["noise"].value("adc_sigma", 0.0);
  }
  if (!doc.contains("segments") || !doc["segments"].is_array()) {
    throw ParseError("segments: required array");
  }
  std::size_t i = 0;
  for (const auto& seg : doc["segments"]) {
    if (!seg.is_object()) {
      throw ParseError("segments[" + std::to_string(i) +
                       "]: expected an object");
    }
    Segment s;
    if (!seg.contains("duration_s") || !seg["duration_s"].is_number()) {
      throw ParseError("segments[" + std::to_string(i) +
                       "].duration_s: required number");
    }
    s.duration_s = seg["duration_s"].get<double>();
    read_ramp(seg, "co2", i, s.co2_start, s.co2_end);
    read_ramp(seg, "temperature_c", i, s.temp_start, s.temp_end);
    read_ramp(seg, "humidity_pct", i, s.humidity_start, s.humidity_end);
    sc.segments.push_back(s);
    ++i;
  }
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace aerolog::sim
