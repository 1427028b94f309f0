#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace aerolog {

// All timestamps in this project are UTC unix seconds; the wire format is
// ISO-8601 "YYYY-MM-DDTHH:MM:SSZ" (second precision, always Zulu).

std::string format_iso8601(std::int64_t unix_seconds);

// Strict parse of the wire format above. Returns nullopt on any deviation.
std::optional<std::int64_t> parse_iso8601(const std::string& text);

// Accepts either the ISO form or a plain decimal unix-seconds value.
std::optional<std::int64_t> parse_instant(const std::string& text);

}  // namespace aerolog
