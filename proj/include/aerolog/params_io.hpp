#pragma once

#include <json.hpp>

#include "aerolog/sensor.hpp"

namespace aerolog {

// Partial documents are fine: absent keys keep their defaults.
sensor::SensorParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const sensor::SensorParams& p);

}  // namespace aerolog
