#include "aerolog/ingest.hpp"

#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <random>

#include "aerolog/errors.hpp"
#include "aerolog/time_util.hpp"

namespace aerolog::ingest {
namespace {

using nlohmann::json;

constexpr std::int64_t kMaxResults = 8000;

// splitmix64; small, seedable, and stable across platforms.
std::uint64_t next_u64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

json channel_to_json(const Channel& c, std::int64_t last_entry_id) {
  json j;
  j["id"] = c.channel_id;
  j["name"] = c.name;
  j["created_at"] = format_iso8601(c.created_at);
  j["last_entry_id"] = last_entry_id;
  for (int i = 0; i < kFieldCount; ++i) {
    if (c.field_labels[i]) {
      j["field" + std::to_string(i + 1)] = *c.field_labels[i];
    }
  }
  return j;
}

json entry_to_feed_json(const storage::ChannelEntry& e,
                        std::optional<int> only_field) {
  json j;
  j["created_at"] = format_iso8601(e.created_at);
  j["entry_id"] = e.entry_id;
  for (int i = 1; i <= kFieldCount; ++i) {
    if (only_field && i != *only_field) continue;
    const auto& v = e.fields[i - 1];
    const std::string key = "field" + std::to_string(i);
    if (v) {
      j[key] = *v;
    } else {
      j[key] = nullptr;
    }
  }
  return j;
}

}  // namespace

bool valid_field_value(const std::string& value) {
  if (value.empty() || value.size() > kMaxFieldValueLength) return false;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  return end == value.c_str() + value.size() && std::isfinite(v);
}

int UpdateResult::http_status() const {
  switch (status) {
    case UpdateStatus::Accepted:
      return 200;
    case UpdateStatus::UnknownKey:
      return 401;
    case UpdateStatus::RateLimited:
      return 429;
    case UpdateStatus::NoValidFields:
      return 400;
  }
  return 500;
}

std::string UpdateResult::body() const {
  return status == UpdateStatus::Accepted ? std::to_string(entry_id) : "0";
}

int FeedResult::http_status() const {
  switch (status) {
    case FeedStatus::Ok:
      return 200;
    case FeedStatus::NotFound:
      return 404;
    case FeedStatus::Unauthorized:
      return 401;
    case FeedStatus::BadRequest:
      return 400;
  }
  return 500;
}

bool RateLimiter::try_accept(const std::string& key, std::int64_t now) {
  if (window_s_ <= 0) return true;
  std::lock_guard lock(mu_);
  auto it = last_accepted_.find(key);
  if (it != last_accepted_.end() && now - it->second < window_s_) {
    return false;
  }
  last_accepted_[key] = now;
  return true;
}

Service::Service(storage::Store& store, ServiceConfig config)
    : store_(store),
      config_(config),
      limiter_(config.rate_limit_window_s),
      keygen_state_(config.keygen_seed.value_or(std::random_device{}())) {}

std::string Service::generate_key() {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::lock_guard lock(keygen_mu_);
  std::string key(16, '0');
  for (auto& ch : key) {
    ch = kAlphabet[next_u64(keygen_state_) % 36];
  }
  return key;
}

Channel Service::create_channel(
    const std::string& name,
    const std::array<std::optional<std::string>, kFieldCount>& labels,
    bool make_private, std::int64_t now) {
  if (name.empty()) {
    throw ParseError("channel name must be non-empty");
  }
  std::lock_guard lock(create_mu_);
  Channel c;
  c.channel_id = store_.next_channel_id();
  c.name = name;
  c.write_key = generate_key();
  if (make_private) c.read_key = generate_key();
  c.field_labels = labels;
  c.created_at = now;
  store_.create_channel(c);
  return c;
}

UpdateResult Service::handle_update(const UpdateRequest& req,
                                    std::int64_t now) {
  UpdateResult result;
  auto* channel = store_.find_by_write_key(req.api_key);
  if (req.api_key.empty() || channel == nullptr) {
    result.status = UpdateStatus::UnknownKey;
    return result;
  }

  storage::FieldValues fields;
  bool any = false;
  for (const auto& [idx, value] : req.fields) {
    if (idx < 1 || idx > kFieldCount) continue;
    if (!valid_field_value(value)) continue;
    fields[idx - 1] = value;
    any = true;
  }
  if (!any) {
    result.status = UpdateStatus::NoValidFields;
    return result;
  }

  if (!limiter_.try_accept(req.api_key, now)) {
    result.status = UpdateStatus::RateLimited;
    return result;
  }

  std::int64_t created_at = now;
  if (config_.test_mode && req.created_at) {
    created_at = *req.created_at;
  }
  result.entry_id = channel->append(fields, created_at);
  result.status = UpdateStatus::Accepted;
  return result;
}

FeedResult Service::handle_feed(std::int64_t channel_id,
                                const FeedQuery& query) {
  FeedResult result;
  auto* channel = store_.find_channel(channel_id);
  if (channel == nullptr) {
    result.status = FeedStatus::NotFound;
    result.error = "no channel with id " + std::to_string(channel_id);
    return result;
  }
  const auto& meta = channel->meta();
  if (meta.read_key && (!query.api_key || *query.api_key != *meta.read_key)) {
    result.status = FeedStatus::Unauthorized;
    result.error = "channel is private; a valid read key is required";
    return result;
  }
  if (query.results < 0) {
    result.status = FeedStatus::BadRequest;
    result.error = "results must be >= 0";
    return result;
  }
  if (query.field_index && (*query.field_index < 1 ||
                            *query.field_index > kFieldCount)) {
    result.status = FeedStatus::BadRequest;
    result.error = "field index must be in 1..8";
    return result;
  }

  const std::int64_t limit = std::min(query.results, kMaxResults);
  storage::QueryRange range{query.start, query.end};
  const auto entries = channel->query(range, limit);

  json doc;
  doc["channel"] = channel_to_json(meta, channel->last_entry_id());
  json feeds = json::array();
  for (const auto& e : entries) {
    feeds.push_back(entry_to_feed_json(e, query.field_index));
  }
  doc["feeds"] = std::move(feeds);
  result.status = FeedStatus::Ok;
  result.json_body = doc.dump();
  return result;
}

}  // namespace aerolog::ingest
