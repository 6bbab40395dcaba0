#pragma once

#include <memory>
#include <string>

#include "mcrowds/scenario.hpp"

namespace mcrowds {

/// Serves one Session over TCP using the line-delimited protocol documented
/// in session.hpp. One client at a time: a second connection receives
/// Error{"session_occupied"} and is closed. When the client disconnects the
/// session pauses and a later client may resume it.
///
/// Everything (accept, reads, the tick timer, writes) runs on one
/// io_context thread, so the Input mailbox needs no locking.
class Server {
 public:
  /// `bind` is "host:port"; port 0 picks an ephemeral port. Throws
  /// std::runtime_error if the address cannot be bound.
  Server(ScenarioConfig config, const std::string& bind);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  unsigned short port() const;

  /// Blocks until stop() is called.
  void run();

  /// Safe to call from any thread.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mcrowds
