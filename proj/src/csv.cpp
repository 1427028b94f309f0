#include "aerolog/csv.hpp"

#include <sstream>

#include "aerolog/errors.hpp"
#include "aerolog/time_util.hpp"

namespace aerolog::csv {

std::string escape(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string export_field(const std::vector<storage::ChannelEntry>& entries,
                         int field_index) {
  if (field_index < 1 || field_index > kFieldCount) {
    throw ParseError("field index must be in 1..8, got " +
                     std::to_string(field_index));
  }
  std::ostringstream out;
  out << "created_at,entry_id,value\r\n";
  for (const auto& e : entries) {
    const auto& v = e.fields[field_index - 1];
    out << escape(format_iso8601(e.created_at)) << ',' << e.entry_id << ','
        << (v ? escape(*v) : std::string()) << "\r\n";
  }
  return out.str();
}

std::vector<std::vector<std::string>> parse(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool cell_started = false;

  auto end_cell = [&] {
    row.push_back(std::move(cell));
    cell.clear();
    cell_started = false;
  };
  auto end_row = [&] {
    end_cell();
    rows.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!cell_started && cell.empty()) {
          quoted = true;
          cell_started = true;
        } else {
          cell += c;
        }
        break;
      case ',':
        end_cell();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        break;
      default:
        cell += c;
        cell_started = true;
        break;
    }
  }
  if (!cell.empty() || !row.empty() || cell_started) end_row();
  return rows;
}

}  // namespace aerolog::csv
