#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace aerolog {

constexpr int kFieldCount = 8;

// Channel metadata as persisted in <id>.meta.json. last_entry_id is not part
// of the document; it is rebuilt from the entry log on open.
struct Channel {
  std::int64_t channel_id = 0;
  std::string name;
  std::string write_key;                 // 16 uppercase alphanumerics
  std::optional<std::string> read_key;   // present only on private channels
  std::array<std::optional<std::string>, kFieldCount> field_labels;
  std::int64_t created_at = 0;
};

}  // namespace aerolog
