#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <thread>

#include "aerolog/ingest.hpp"

namespace httplib {
class Server;
}

namespace aerolog::http {

using Clock = std::function<std::int64_t()>;

Clock system_clock();

// Binds the ingest service to HTTP routes (docs/protocol.md). The clock is
// injectable so tests can replay rate-limit timelines.
class HttpServer {
 public:
  HttpServer(ingest::Service& service, Clock clock = system_clock());
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and serves on a background thread. Returns false when the address
  // cannot be bound. port 0 picks a free port (see bound_port()).
  bool start(const std::string& host, int port);
  void stop();

  int bound_port() const { return bound_port_; }

 private:
  void route();

  ingest::Service& service_;
  Clock clock_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int bound_port_ = 0;
};

// Splits "host:port"; returns false on malformed input.
bool parse_listen_addr(const std::string& addr, std::string& host, int& port);

}  // namespace aerolog::http
