#pragma once

#include <thread>

#include "mcrowds/server.hpp"

namespace mcrowds::testing {

// Server on an ephemeral loopback port, running on its own thread for the
// lifetime of the object.
class Served {
 public:
  explicit Served(ScenarioConfig config) : server_(std::move(config), "127.0.0.1:0") {
    thread_ = std::thread([this] { server_.run(); });
  }
  ~Served() {
    server_.stop();
    thread_.join();
  }
  Served(const Served&) = delete;
  Served& operator=(const Served&) = delete;

  unsigned short port() const { return server_.port(); }

 private:
  Server server_;
  std::thread thread_;
};

}  // namespace mcrowds::testing
