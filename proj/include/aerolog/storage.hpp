#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "aerolog/channel.hpp"

namespace aerolog::storage {

using FieldValues = std::array<std::optional<std::string>, kFieldCount>;

// One accepted telemetry record. Field values are kept as the exact decimal
// strings received; nothing is ever re-rendered through a float.
struct ChannelEntry {
  std::int64_t entry_id = 0;
  std::int64_t created_at = 0;  // unix seconds UTC
  FieldValues fields;
};

std::string serialize_entry(const ChannelEntry& entry);
std::optional<ChannelEntry> parse_entry(const std::string& line);

enum class AggregateFn { Min, Max, Mean };

struct AggregatePoint {
  std::int64_t window_start = 0;
  std::int64_t window_end = 0;
  std::int64_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct AggregateResult {
  std::vector<AggregatePoint> points;
  std::int64_t skipped = 0;  // values in range that did not parse as numbers
};

double select_statistic(const AggregatePoint& point, AggregateFn fn);
std::optional<AggregateFn> parse_aggregate_fn(const std::string& name);

struct QueryRange {
  std::optional<std::int64_t> start;  // inclusive
  std::optional<std::int64_t> end;    // inclusive
};

enum class OpenMode { ReadWrite, ReadOnly };

// One channel's log: <id>.jsonl (append-only records) plus <id>.meta.json.
// A single writer is enforced per channel; readers run concurrently and see
// a consistent prefix. On open a torn trailing line is discarded, logged,
// and truncated away before new appends. ReadOnly skips the truncation and
// never writes, so inspection tools can run beside a live server.
class ChannelStore {
 public:
  ChannelStore(std::filesystem::path dir, Channel meta, bool create,
               OpenMode mode = OpenMode::ReadWrite);

  const Channel& meta() const { return meta_; }
  std::int64_t last_entry_id() const;

  // Durable (flushed to the OS) before returning the new dense id.
  std::int64_t append(const FieldValues& fields, std::int64_t created_at);

  // Ascending (created_at, entry_id); inclusive bounds; last `limit` of the
  // selected range.
  std::vector<ChannelEntry> query(const QueryRange& range,
                                  std::int64_t limit) const;

  // Tumbling windows of `window_s` aligned to `start`; empty windows are
  // omitted. field_index is 1-based. Each point carries min/max/mean; pick
  // one with select_statistic.
  AggregateResult aggregate(int field_index, std::int64_t window_s,
                            std::int64_t start, std::int64_t end) const;

  void save_meta();

 private:
  void load();

  std::filesystem::path dir_;
  Channel meta_;
  OpenMode mode_;
  std::vector<ChannelEntry> entries_;
  std::ofstream out_;
  mutable std::shared_mutex mu_;
};

// Root of the on-disk layout: <root>/channels/<id>.jsonl + <id>.meta.json.
class Store {
 public:
  explicit Store(std::filesystem::path root,
                 OpenMode mode = OpenMode::ReadWrite);

  ChannelStore& create_channel(const Channel& meta);
  ChannelStore& channel(std::int64_t id);           // throws NotFound
  ChannelStore* find_channel(std::int64_t id);      // nullptr when absent
  ChannelStore* find_by_write_key(const std::string& key);
  std::vector<std::int64_t> channel_ids() const;
  std::int64_t next_channel_id() const;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  OpenMode mode_;
  mutable std::mutex mu_;
  std::vector<std::unique_ptr<ChannelStore>> channels_;
};

}  // namespace aerolog::storage
