#include "aerolog/storage.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <json.hpp>

#include "aerolog/errors.hpp"
#include "aerolog/time_util.hpp"

namespace aerolog::storage {
namespace {

using nlohmann::json;

std::filesystem::path meta_path(const std::filesystem::path& dir,
                                std::int64_t id) {
  return dir / (std::to_string(id) + ".meta.json");
}

std::filesystem::path log_path(const std::filesystem::path& dir,
                               std::int64_t id) {
  return dir / (std::to_string(id) + ".jsonl");
}

json meta_to_json(const Channel& c) {
  json j;
  j["schema"] = 1;
  j["channel_id"] = c.channel_id;
  j["name"] = c.name;
  j["write_key"] = c.write_key;
  if (c.read_key) j["read_key"] = *c.read_key;
  j["created_at"] = format_iso8601(c.created_at);
  for (int i = 0; i < kFieldCount; ++i) {
    if (c.field_labels[i]) {
      j["field" + std::to_string(i + 1)] = *c.field_labels[i];
    }
  }
  return j;
}

Channel meta_from_json(const json& j) {
  Channel c;
  c.channel_id = j.at("channel_id").get<std::int64_t>();
  c.name = j.value("name", std::string());
  c.write_key = j.value("write_key", std::string());
  if (j.contains("read_key")) c.read_key = j["read_key"].get<std::string>();
  if (j.contains("created_at")) {
    if (auto t = parse_iso8601(j["created_at"].get<std::string>())) {
      c.created_at = *t;
    }
  }
  for (int i = 0; i < kFieldCount; ++i) {
    const std::string key = "field" + std::to_string(i + 1);
    if (j.contains(key)) c.field_labels[i] = j[key].get<std::string>();
  }
  return c;
}

bool parse_decimal(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

}  // namespace

std::string serialize_entry(const ChannelEntry& entry) {
  json j;
  j["entry_id"] = entry.entry_id;
  j["created_at"] = format_iso8601(entry.created_at);
  for (int i = 0; i < kFieldCount; ++i) {
    if (entry.fields[i]) {
      j["field" + std::to_string(i + 1)] = *entry.fields[i];
    }
  }
  return j.dump();
}

std::optional<ChannelEntry> parse_entry(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  if (!j.contains("entry_id") || !j["entry_id"].is_number_integer()) {
    return std::nullopt;
  }
  if (!j.contains("created_at") || !j["created_at"].is_string()) {
    return std::nullopt;
  }
  const auto at = parse_iso8601(j["created_at"].get<std::string>());
  if (!at) return std::nullopt;

  ChannelEntry e;
  e.entry_id = j["entry_id"].get<std::int64_t>();
  e.created_at = *at;
  for (int i = 0; i < kFieldCount; ++i) {
    const std::string key = "field" + std::to_string(i + 1);
    if (j.contains(key)) {
      if (!j[key].is_string()) return std::nullopt;
      e.fields[i] = j[key].get<std::string>();
    }
  }
  return e;
}

ChannelStore::ChannelStore(std::filesystem::path dir, Channel meta,
                           bool create)
    : dir_(std::move(dir)), meta_(std::move(meta)) {
  std::filesystem::create_directories(dir_);
  if (create) {
    save_meta();
  }
  load();
}

void ChannelStore::load() {
  const auto path = log_path(dir_, meta_.channel_id);
  entries_.clear();
  std::uintmax_t clean_bytes = 0;
  bool torn = false;
  {
    std::ifstream in(path, std::ios::binary);
    std::string line;
    while (in) {
      const auto line_start = clean_bytes;
      if (!std::getline(in, line)) break;
      if (in.eof() && !line.empty()) {
        // No trailing newline: the final record never finished writing.
        torn = true;
        break;
      }
      auto entry = parse_entry(line);
      if (!entry) {
        torn = true;
        clean_bytes = line_start;
        break;
      }
      entries_.push_back(std::move(*entry));
      clean_bytes += line.size() + 1;
    }
  }
  if (torn) {
    std::cerr << "aerolog: channel " << meta_.channel_id
              << ": discarding torn record after " << entries_.size()
              << " clean entries\n";
    std::filesystem::resize_file(path, clean_bytes);
  }
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) {
    throw StorageError("cannot open channel log for append: " + path.string());
  }
}

std::int64_t ChannelStore::last_entry_id() const {
  std::shared_lock lock(mu_);
  return static_cast<std::int64_t>(entries_.size());
}

std::int64_t ChannelStore::append(const FieldValues& fields,
                                  std::int64_t created_at) {
  std::unique_lock lock(mu_);
  ChannelEntry e;
  e.entry_id = static_cast<std::int64_t>(entries_.size()) + 1;
  // created_at is clamped monotonic so the on-disk order stays sorted even
  // if the server clock steps backwards.
  e.created_at = entries_.empty()
                     ? created_at
                     : std::max(created_at, entries_.back().created_at);
  e.fields = fields;

  out_ << serialize_entry(e) << '\n';
  out_.flush();
  if (!out_) {
    throw StorageError("append failed for channel " +
                       std::to_string(meta_.channel_id));
  }
  entries_.push_back(e);
  return e.entry_id;
}

std::vector<ChannelEntry> ChannelStore::query(const QueryRange& range,
                                              std::int64_t limit) const {
  std::shared_lock lock(mu_);
  if (limit < 0) limit = 0;
  std::vector<ChannelEntry> selected;
  for (const auto& e : entries_) {
    if (range.start && e.created_at < *range.start) continue;
    if (range.end && e.created_at > *range.end) continue;
    selected.push_back(e);
  }
  // Entries are already ascending (created_at, entry_id); keep the tail.
  if (static_cast<std::int64_t>(selected.size()) > limit) {
    selected.erase(selected.begin(),
                   selected.end() - static_cast<std::ptrdiff_t>(limit));
  }
  return selected;
}

double select_statistic(const AggregatePoint& point, AggregateFn fn) {
  switch (fn) {
    case AggregateFn::Min:
      return point.min;
    case AggregateFn::Max:
      return point.max;
    case AggregateFn::Mean:
      return point.mean;
  }
  return point.mean;
}

std::optional<AggregateFn> parse_aggregate_fn(const std::string& name) {
  if (name == "min") return AggregateFn::Min;
  if (name == "max") return AggregateFn::Max;
  if (name == "mean") return AggregateFn::Mean;
  return std::nullopt;
}

AggregateResult ChannelStore::aggregate(int field_index, std::int64_t window_s,
                                        std::int64_t start,
                                        std::int64_t end) const {
  if (field_index < 1 || field_index > kFieldCount) {
    throw ParseError("field index must be in 1..8, got " +
                     std::to_string(field_index));
  }
  if (window_s <= 0) {
    throw ParseError("aggregation window must be > 0 seconds");
  }
  std::shared_lock lock(mu_);
  AggregateResult result;
  AggregatePoint current;
  bool open = false;
  std::int64_t open_index = -1;
  double sum = 0.0;

  auto close = [&] {
    if (!open) return;
    current.mean = sum / static_cast<double>(current.count);
    result.points.push_back(current);
    open = false;
  };

  for (const auto& e : entries_) {
    if (e.created_at < start || e.created_at > end) continue;
    const auto& value = e.fields[field_index - 1];
    if (!value) continue;
    double v = 0.0;
    if (!parse_decimal(*value, v)) {
      ++result.skipped;
      continue;
    }
    const std::int64_t k = (e.created_at - start) / window_s;
    if (!open || k != open_index) {
      close();
      open = true;
      open_index = k;
      current = AggregatePoint{};
      current.window_start = start + k * window_s;
      current.window_end = start + (k + 1) * window_s;
      current.count = 0;
      current.min = v;
      current.max = v;
      sum = 0.0;
    }
    ++current.count;
    current.min = std::min(current.min, v);
    current.max = std::max(current.max, v);
    sum += v;
  }
  close();
  return result;
}

void ChannelStore::save_meta() {
  const auto path = meta_path(dir_, meta_.channel_id);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << meta_to_json(meta_).dump(2) << '\n';
    if (!out) {
      throw StorageError("cannot write channel metadata: " + path.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

Store::Store(std::filesystem::path root) : root_(std::move(root)) {
  const auto dir = root_ / "channels";
  std::filesystem::create_directories(dir);
  std::vector<std::int64_t> ids;
  for (const auto& it : std::filesystem::directory_iterator(dir)) {
    const auto name = it.path().filename().string();
    const auto suffix = std::string(".meta.json");
    if (name.size() <= suffix.size() ||
        name.substr(name.size() - suffix.size()) != suffix) {
      continue;
    }
    try {
      ids.push_back(std::stoll(name.substr(0, name.size() - suffix.size())));
    } catch (const std::exception&) {
      continue;
    }
  }
  std::sort(ids.begin(), ids.end());
  for (auto id : ids) {
    std::ifstream in(meta_path(dir, id), std::ios::binary);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) {
      throw StorageError("unreadable channel metadata for id " +
                         std::to_string(id));
    }
    channels_.push_back(
        std::make_unique<ChannelStore>(dir, meta_from_json(j), false));
  }
}

ChannelStore& Store::create_channel(const Channel& meta) {
  std::lock_guard lock(mu_);
  for (const auto& c : channels_) {
    if (c->meta().channel_id == meta.channel_id) {
      throw StorageError("channel id already exists: " +
                         std::to_string(meta.channel_id));
    }
  }
  channels_.push_back(
      std::make_unique<ChannelStore>(root_ / "channels", meta, true));
  return *channels_.back();
}

ChannelStore& Store::channel(std::int64_t id) {
  if (auto* c = find_channel(id)) return *c;
  throw NotFound("no channel with id " + std::to_string(id));
}

ChannelStore* Store::find_channel(std::int64_t id) {
  std::lock_guard lock(mu_);
  for (const auto& c : channels_) {
    if (c->meta().channel_id == id) return c.get();
  }
  return nullptr;
}

ChannelStore* Store::find_by_write_key(const std::string& key) {
  std::lock_guard lock(mu_);
  for (const auto& c : channels_) {
    if (c->meta().write_key == key) return c.get();
  }
  return nullptr;
}

std::vector<std::int64_t> Store::channel_ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::int64_t> ids;
  ids.reserve(channels_.size());
  for (const auto& c : channels_) ids.push_back(c->meta().channel_id);
  return ids;
}

std::int64_t Store::next_channel_id() const {
  std::lock_guard lock(mu_);
  std::int64_t max_id = 0;
  for (const auto& c : channels_) {
    max_id = std::max(max_id, c->meta().channel_id);
  }
  return max_id + 1;
}

}  // namespace aerolog::storage
