#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "aerolog/channel.hpp"
#include "aerolog/storage.hpp"

namespace aerolog::ingest {

struct ServiceConfig {
  std::int64_t rate_limit_window_s = 15;  // 0 disables rate limiting
  // When set, write/read keys come from a deterministic stream and clients
  // may override created_at on /update. For tests only.
  std::optional<std::uint64_t> keygen_seed;
  bool test_mode = false;
};

struct UpdateRequest {
  std::string api_key;
  // 1-based field index -> raw decimal string as received
  std::map<int, std::string> fields;
  std::optional<std::int64_t> created_at;  // honored only in test mode
};

enum class UpdateStatus { Accepted, UnknownKey, RateLimited, NoValidFields };

struct UpdateResult {
  UpdateStatus status = UpdateStatus::UnknownKey;
  std::int64_t entry_id = 0;  // valid when Accepted

  int http_status() const;
  // ThingSpeak convention: the entry id on success, "0" on rejection.
  std::string body() const;
};

struct FeedQuery {
  std::int64_t results = 100;  // capped at 8000
  std::optional<std::int64_t> start;
  std::optional<std::int64_t> end;
  std::optional<std::string> api_key;  // read key for private channels
  std::optional<int> field_index;      // single-field feed when set
};

enum class FeedStatus { Ok, NotFound, Unauthorized, BadRequest };

struct FeedResult {
  FeedStatus status = FeedStatus::Ok;
  std::string json_body;  // set when Ok
  std::string error;      // diagnostic for non-Ok

  int http_status() const;
};

// Accepts at most one update per write key per window. now/last are unix
// seconds; the first write on a key always passes.
class RateLimiter {
 public:
  explicit RateLimiter(std::int64_t window_s) : window_s_(window_s) {}

  bool try_accept(const std::string& key, std::int64_t now);
  std::int64_t window_s() const { return window_s_; }

 private:
  std::int64_t window_s_;
  std::mutex mu_;
  std::map<std::string, std::int64_t> last_accepted_;
};

// The service core. All entry points take `now` explicitly so tests can
// replay any timeline; the HTTP layer feeds in the wall clock.
class Service {
 public:
  Service(storage::Store& store, ServiceConfig config);

  Channel create_channel(
      const std::string& name,
      const std::array<std::optional<std::string>, kFieldCount>& labels,
      bool make_private, std::int64_t now);

  UpdateResult handle_update(const UpdateRequest& req, std::int64_t now);

  FeedResult handle_feed(std::int64_t channel_id, const FeedQuery& query);

  storage::Store& store() { return store_; }
  const ServiceConfig& config() const { return config_; }

 private:
  std::string generate_key();

  storage::Store& store_;
  ServiceConfig config_;
  RateLimiter limiter_;
  std::mutex keygen_mu_;
  std::uint64_t keygen_state_;
  std::mutex create_mu_;
};

// Field values longer than this are rejected as invalid (service parity).
constexpr std::size_t kMaxFieldValueLength = 255;

// True when `value` is a finite decimal number no longer than the cap.
bool valid_field_value(const std::string& value);

}  // namespace aerolog::ingest
