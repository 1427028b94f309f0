#include "aerolog/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aerolog/errors.hpp"

namespace aerolog::sensor {
namespace {

double quantile_sorted(const std::vector<double>& v, double p) {
  // Linear interpolation between order statistics (the common "type 7" rule).
  const double idx = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(idx);
  if (lo + 1 >= v.size()) return v.back();
  const double frac = idx - static_cast<double>(lo);
  return v[lo] + (v[lo + 1] - v[lo]) * frac;
}

}  // namespace

void SensorParams::validate() const {
  if (!(ppm_scale > 0.0)) throw ParseError("ppm_scale must be > 0");
  if (!(ppm_exponent > 0.0)) throw ParseError("ppm_exponent must be > 0");
  if (!(r_load > 0.0)) throw ParseError("r_load must be > 0");
  if (adc_max < 2) throw ParseError("adc_max must be >= 2");
  if (!(atmospheric_co2 > 0.0)) {
    throw ParseError("atmospheric_co2 must be > 0");
  }
}

double resistance_from_adc(int adc, const SensorParams& params) {
  if (adc == 0) {
    throw SensorSaturatedLow("adc = 0: open divider, resistance undefined");
  }
  if (adc < 0 || adc > params.adc_max) {
    throw AdcOutOfRange("adc " + std::to_string(adc) + " outside [0, " +
                        std::to_string(params.adc_max) + "]");
  }
  return (static_cast<double>(params.adc_max) / adc - 1.0) * params.r_load;
}

double correction_factor(double temperature_c, double humidity_pct,
                         const SensorParams& params) {
  const double f = params.cor_a * temperature_c * temperature_c -
                   params.cor_b * temperature_c + params.cor_c -
                   (humidity_pct - 33.0) * params.cor_d;
  if (!(f > 0.0)) {
    throw CorrectionDomainError("correction factor " + std::to_string(f) +
                                " not positive at t=" +
                                std::to_string(temperature_c) +
                                " h=" + std::to_string(humidity_pct));
  }
  return f;
}

double ppm_from_resistance(double rs, double r_zero,
                           const SensorParams& params) {
  if (!(r_zero > 0.0)) {
    throw InvalidCalibration("r_zero must be > 0, got " +
                             std::to_string(r_zero));
  }
  if (!(rs > 0.0)) {
    throw SensorSaturatedHigh("rs = " + std::to_string(rs) +
                              " ohms: ppm diverges");
  }
  return params.ppm_scale * std::pow(rs / r_zero, -params.ppm_exponent);
}

double corrected_ppm(int adc, double temperature_c, double humidity_pct,
                     double r_zero, const SensorParams& params) {
  const double rs = resistance_from_adc(adc, params);
  const double f = correction_factor(temperature_c, humidity_pct, params);
  return ppm_from_resistance(rs / f, r_zero, params);
}

double r_zero_from_reading(int adc, double temperature_c, double humidity_pct,
                           const SensorParams& params) {
  const double rs = resistance_from_adc(adc, params);
  if (rs == 0.0) {
    throw SensorSaturatedHigh("adc at full scale: rs = 0 gives no valid R0");
  }
  const double f = correction_factor(temperature_c, humidity_pct, params);
  return (rs / f) * std::pow(params.atmospheric_co2 / params.ppm_scale,
                             1.0 / params.ppm_exponent);
}

CalibrationEstimate calibrate(std::span<const CalibrationSample> readings,
                              const SensorParams& params) {
  if (readings.empty()) {
    throw EmptyWindow("calibration window holds no samples");
  }
  std::vector<double> estimates;
  estimates.reserve(readings.size());
  std::int64_t skipped = 0;
  for (const auto& s : readings) {
    try {
      estimates.push_back(r_zero_from_reading(s.adc, s.temperature_c,
                                              s.humidity_pct, params));
    } catch (const Error&) {
      ++skipped;
    }
  }
  if (estimates.empty()) {
    throw EmptyWindow("all " + std::to_string(readings.size()) +
                      " calibration samples were unusable");
  }
  std::sort(estimates.begin(), estimates.end());
  const std::size_t n = estimates.size();
  const double median = (n % 2 == 1)
                            ? estimates[n / 2]
                            : 0.5 * (estimates[n / 2 - 1] + estimates[n / 2]);

  CalibrationEstimate est;
  est.r_zero = median;
  est.sample_count = static_cast<std::int64_t>(readings.size());
  est.skipped = skipped;
  est.window_start = readings.front().at;
  est.window_end = readings.back().at;
  est.dispersion =
      quantile_sorted(estimates, 0.75) - quantile_sorted(estimates, 0.25);
  return est;
}

Dht11Sample quantize_dht11(double temperature_c, double humidity_pct) {
  // Round half away from zero, the one rounding rule used project-wide.
  const auto t = static_cast<int>(std::llround(temperature_c));
  const auto h = static_cast<int>(std::llround(humidity_pct));
  Dht11Sample out;
  out.temperature_c = std::clamp(t, 0, 50);
  out.humidity_pct = std::clamp(h, 20, 90);
  return out;
}

}  // namespace aerolog::sensor
