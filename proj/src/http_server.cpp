#include "aerolog/http_server.hpp"

#include <chrono>
#include <httplib.h>
#include <json.hpp>

#include "aerolog/errors.hpp"
#include "aerolog/time_util.hpp"

namespace aerolog::http {
namespace {

using nlohmann::json;

// Pulls api_key plus field1..field8 out of query/body params.
ingest::UpdateRequest update_request_from(const httplib::Request& req) {
  ingest::UpdateRequest out;
  if (req.has_param("api_key")) out.api_key = req.get_param_value("api_key");
  for (int i = 1; i <= kFieldCount; ++i) {
    const std::string key = "field" + std::to_string(i);
    if (req.has_param(key)) out.fields[i] = req.get_param_value(key);
  }
  if (req.has_param("created_at")) {
    out.created_at = parse_instant(req.get_param_value("created_at"));
  }
  return out;
}

bool parse_int64_param(const httplib::Request& req, const char* name,
                       std::int64_t& out) {
  if (!req.has_param(name)) return true;
  try {
    out = std::stoll(req.get_param_value(name));
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

void reply_error(httplib::Response& res, int status, const std::string& text) {
  json j = {{"error", text}};
  res.status = status;
  res.set_content(j.dump(), "application/json");
}

}  // namespace

Clock system_clock() {
  return [] {
    return static_cast<std::int64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
  };
}

HttpServer::HttpServer(ingest::Service& service, Clock clock)
    : service_(service),
      clock_(std::move(clock)),
      server_(std::make_unique<httplib::Server>()) {
  route();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::route() {
  auto& svr = *server_;

  const auto update = [this](const httplib::Request& req,
                             httplib::Response& res) {
    const auto result =
        service_.handle_update(update_request_from(req), clock_());
    res.status = result.http_status();
    res.set_content(result.body(), "text/plain");
  };
  svr.Get("/update", update);
  svr.Post("/update", update);

  const auto feeds = [this](const httplib::Request& req,
                            httplib::Response& res) {
    std::int64_t channel_id = 0;
    try {
      channel_id = std::stoll(req.matches[1]);
    } catch (const std::exception&) {
      reply_error(res, 404, "bad channel id");
      return;
    }
    ingest::FeedQuery query;
    if (req.matches.size() > 2 && req.matches[2].matched) {
      try {
        query.field_index = std::stoi(req.matches[2]);
      } catch (const std::exception&) {
        reply_error(res, 400, "bad field index");
        return;
      }
    }
    if (!parse_int64_param(req, "results", query.results)) {
      reply_error(res, 400, "results must be an integer");
      return;
    }
    if (req.has_param("start")) {
      auto v = parse_instant(req.get_param_value("start"));
      if (!v) {
        reply_error(res, 400, "start must be ISO-8601 or unix seconds");
        return;
      }
      query.start = *v;
    }
    if (req.has_param("end")) {
      auto v = parse_instant(req.get_param_value("end"));
      if (!v) {
        reply_error(res, 400, "end must be ISO-8601 or unix seconds");
        return;
      }
      query.end = *v;
    }
    if (req.has_param("api_key")) {
      query.api_key = req.get_param_value("api_key");
    }
    const auto result = service_.handle_feed(channel_id, query);
    if (result.status == ingest::FeedStatus::Ok) {
      res.status = 200;
      res.set_content(result.json_body, "application/json");
    } else {
      reply_error(res, result.http_status(), result.error);
    }
  };
  svr.Get(R"(/channels/(\d+)/feeds\.json)", feeds);
  svr.Get(R"(/channels/(\d+)/fields/(\d+)\.json)", feeds);

  svr.Post("/channels", [this](const httplib::Request& req,
                               httplib::Response& res) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      reply_error(res, 400, "body must be a JSON object");
      return;
    }
    const std::string name = body.value("name", std::string());
    std::array<std::optional<std::string>, kFieldCount> labels;
    for (int i = 0; i < kFieldCount; ++i) {
      const std::string key = "field" + std::to_string(i + 1);
      if (body.contains(key) && body[key].is_string()) {
        labels[i] = body[key].get<std::string>();
      }
    }
    const bool make_private = !body.value("public", true);
    try {
      const Channel c =
          service_.create_channel(name, labels, make_private, clock_());
      json j;
      j["id"] = c.channel_id;
      j["name"] = c.name;
      j["write_key"] = c.write_key;
      if (c.read_key) j["read_key"] = *c.read_key;
      j["created_at"] = format_iso8601(c.created_at);
      for (int i = 0; i < kFieldCount; ++i) {
        if (c.field_labels[i]) {
          j["field" + std::to_string(i + 1)] = *c.field_labels[i];
        }
      }
      res.status = 200;
      res.set_content(j.dump(), "application/json");
    } catch (const ParseError& e) {
      reply_error(res, 400, e.what());
    }
  });

  svr.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.status = 200;
    res.set_content("ok", "text/plain");
  });
}

bool HttpServer::start(const std::string& host, int port) {
  if (port == 0) {
    bound_port_ = server_->bind_to_any_port(host);
    if (bound_port_ < 0) return false;
  } else {
    if (!server_->bind_to_port(host, port)) return false;
    bound_port_ = port;
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return true;
}

void HttpServer::stop() {
  if (server_ && server_->is_running()) {
    server_->stop();
  }
  if (thread_.joinable()) thread_.join();
}

bool parse_listen_addr(const std::string& addr, std::string& host, int& port) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos || colon == 0 ||
      colon + 1 >= addr.size()) {
    return false;
  }
  host = addr.substr(0, colon);
  try {
    port = std::stoi(addr.substr(colon + 1));
  } catch (const std::exception&) {
    return false;
  }
  return port >= 0 && port <= 65535;
}

}  // namespace aerolog::http
