#pragma once

#include <string>
#include <vector>

#include "aerolog/storage.hpp"

namespace aerolog::csv {

// RFC-4180: quote when the cell holds a comma, quote, or newline.
std::string escape(const std::string& cell);

// header `created_at,entry_id,value`; values are the stored decimal strings,
// empty cell when the entry lacks the field.
std::string export_field(const std::vector<storage::ChannelEntry>& entries,
                         int field_index);

// Minimal RFC-4180 reader for round-trip checks and sample files.
std::vector<std::vector<std::string>> parse(const std::string& text);

}  // namespace aerolog::csv
