#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace aerolog::sensor {

// MQ135 transfer-function constants plus the ADC/divider wiring around it.
// Defaults reproduce the stock Arduino MQ135 library on a 10-bit ADC with a
// 10k load resistor.
struct SensorParams {
  double ppm_scale = 116.6020682;     // power-law scale ("PARA")
  double ppm_exponent = 2.769034857;  // power-law exponent ("PARB")
  double cor_a = 0.00035;             // t^2 coefficient of the correction
  double cor_b = 0.02718;             // t coefficient
  double cor_c = 1.39538;             // constant term
  double cor_d = 0.0018;              // humidity slope (about h = 33 %RH)
  double r_load = 10000.0;            // divider load resistor, ohms
  int adc_max = 1023;                 // full-scale ADC code
  double atmospheric_co2 = 397.13;    // fresh-air CO2 baseline, ppm

  void validate() const;  // throws ParseError on a nonsensical parameter set
};

// One fully derived sample, as the firmware loop would produce it.
struct GasReading {
  std::int64_t timestamp = 0;  // unix seconds UTC
  int adc = 0;
  double rs = 0.0;             // sensor resistance, ohms
  double r_zero = 0.0;         // calibration constant used, ohms
  double raw_ppm = 0.0;        // power law without t/h correction
  double corrected_ppm = 0.0;
  double temperature_c = 0.0;  // whole degrees after DHT11 quantization
  int humidity_pct = 0;
};

struct CalibrationSample {
  int adc = 0;
  double temperature_c = 0.0;
  int humidity_pct = 0;
  std::int64_t at = 0;  // unix seconds; 0 when the source carries no time
};

struct CalibrationEstimate {
  double r_zero = 0.0;          // median of per-sample estimates, ohms
  std::int64_t sample_count = 0;  // samples supplied (including skipped)
  std::int64_t skipped = 0;       // samples that failed to yield an estimate
  std::int64_t window_start = 0;
  std::int64_t window_end = 0;
  double dispersion = 0.0;  // interquartile range of the estimates, ohms
};

struct Dht11Sample {
  int temperature_c = 0;  // clamped to [0, 50]
  int humidity_pct = 0;   // clamped to [20, 90]
};

// Voltage-divider inversion: rs = (adc_max/adc - 1) * r_load.
// adc == adc_max legitimately yields 0 ohms; adc == 0 has no solution.
double resistance_from_adc(int adc, const SensorParams& params);

// f(t, h) = cor_a*t^2 - cor_b*t + cor_c - (h - 33)*cor_d. Throws
// CorrectionDomainError when the polynomial leaves the positive domain.
double correction_factor(double temperature_c, double humidity_pct,
                         const SensorParams& params);

// ppm = ppm_scale * (rs / r_zero) ^ -ppm_exponent.
double ppm_from_resistance(double rs, double r_zero,
                           const SensorParams& params);

// Full firmware pipeline: divider -> t/h correction -> power law.
double corrected_ppm(int adc, double temperature_c, double humidity_pct,
                     double r_zero, const SensorParams& params);

// R0 such that this reading, taken in fresh air, maps to atmospheric_co2.
double r_zero_from_reading(int adc, double temperature_c, double humidity_pct,
                           const SensorParams& params);

// Median/IQR aggregation of per-sample R0 estimates over a fresh-air window.
// Samples that fail to produce an estimate are skipped and counted; an empty
// or all-skipped window throws EmptyWindow.
CalibrationEstimate calibrate(std::span<const CalibrationSample> readings,
                              const SensorParams& params);

// DHT11 output grid: integer %RH in [20, 90], whole degrees C in [0, 50].
// Rounds half away from zero, then clamps; never fails.
Dht11Sample quantize_dht11(double temperature_c, double humidity_pct);

}  // namespace aerolog::sensor
