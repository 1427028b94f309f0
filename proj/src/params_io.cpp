#include "aerolog/params_io.hpp"

namespace aerolog {

sensor::SensorParams params_from_json(const nlohmann::json& j) {
  sensor::SensorParams p;
  p.ppm_scale = j.value("ppm_scale", p.ppm_scale);
  p.ppm_exponent = j.value("ppm_exponent", p.ppm_exponent);
  p.cor_a = j.value("cor_a", p.cor_a);
  p.cor_b = j.value("cor_b", p.cor_b);
  p.cor_c = j.value("cor_c", p.cor_c);
  p.cor_d = j.value("cor_d", p.cor_d);
  p.r_load = j.value("r_load", p.r_load);
  p.adc_max = j.value("adc_max", p.adc_max);
  p.atmospheric_co2 = j.value("atmospheric_co2", p.atmospheric_co2);
  p.validate();
  return p;
}

nlohmann::json params_to_json(const sensor::SensorParams& p) {
  return nlohmann::json{
      {"ppm_scale", p.ppm_scale},
      {"ppm_exponent", p.ppm_exponent},
      {"cor_a", p.cor_a},
      {"cor_b", p.cor_b},
      {"cor_c", p.cor_c},
      {"cor_d", p.cor_d},
      {"r_load", p.r_load},
      {"adc_max", p.adc_max},
      {"atmospheric_co2", p.atmospheric_co2},
  };
}

}  // namespace aerolog
