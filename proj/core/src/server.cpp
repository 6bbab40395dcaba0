#include "mcrowds/server.hpp"

#include <chrono>
#include <deque>
#include <iostream>

#include <boost/asio.hpp>

#include "mcrowds/session.hpp"

namespace mcrowds {

namespace asio = boost::asio;
using asio::ip::tcp;

namespace {

tcp::endpoint parse_endpoint(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw std::runtime_error("bind address must be host:port, got '" + bind + "'");
  const std::string host = bind.substr(0, colon);
  unsigned long port = 0;
  try {
    port = std::stoul(bind.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::runtime_error("bad port in bind address '" + bind + "'");
  }
  if (port > 65535) throw std::runtime_error("bad port in bind address '" + bind + "'");
  boost::system::error_code ec;
  const auto addr = asio::ip::make_address(host.empty() ? "0.0.0.0" : host, ec);
  if (ec) throw std::runtime_error("bad host in bind address '" + bind + "': " + ec.message());
  return {addr, static_cast<unsigned short>(port)};
}

// Write queue for one socket; keeps at most one async_write in flight.
class Connection : public std::enable_shared_from_this<Connection> {
 public:
  explicit Connection(tcp::socket socket) : socket_(std::move(socket)) {}

  tcp::socket& socket() { return socket_; }
  asio::streambuf& input() { return input_; }
  bool open() const { return open_; }

  void send(std::string line) {
    if (!open_) return;
    line += '\n';
    queue_.push_back(std::move(line));
    if (queue_.size() == 1) flush();
  }

  // Closes once everything queued has been written.
  void close_after_flush() {
    closing_ = true;
    if (queue_.empty()) shutdown();
  }

  void shutdown() {
    if (!open_) return;
    open_ = false;
    boost::system::error_code ignored;
    socket_.shutdown(tcp::socket::shutdown_both, ignored);
    socket_.close(ignored);
  }

 private:
  void flush() {
    auto self = shared_from_this();
    asio::async_write(socket_, asio::buffer(queue_.front()), [self](boost::system::error_code ec, std::size_t) {
      if (ec) {
        self->shutdown();
        return;
      }
      self->queue_.pop_front();
      if (!self->queue_.empty())
        self->flush();
      else if (self->closing_)
        self->shutdown();
    });
  }

  tcp::socket socket_;
  asio::streambuf input_;
  std::deque<std::string> queue_;
  bool open_ = true;
  bool closing_ = false;
};

}  // namespace

struct Server::Impl {
  Impl(ScenarioConfig config, const std::string& bind)
      : session(std::move(config)), acceptor(io), timer(io), work(asio::make_work_guard(io)) {
    const tcp::endpoint ep = parse_endpoint(bind);
    acceptor.open(ep.protocol());
    acceptor.set_option(tcp::acceptor::reuse_address(true));
    boost::system::error_code ec;
    acceptor.bind(ep, ec);
    if (ec) throw std::runtime_error("cannot bind " + bind + ": " + ec.message());
    acceptor.listen();
  }

  void accept() {
    acceptor.async_accept([this](boost::system::error_code ec, tcp::socket socket) {
      if (ec) return;
      auto conn = std::make_shared<Connection>(std::move(socket));
      if (client && client->open()) {
        conn->send(Session::error_line("session_occupied", "session occupied"));
        conn->close_after_flush();
      } else {
        client = conn;
        read(conn);
      }
      accept();
    });
  }

  void read(const std::shared_ptr<Connection>& conn) {
    asio::async_read_until(conn->socket(), conn->input(), '\n',
                           [this, conn](boost::system::error_code ec, std::size_t n) {
                             if (ec) {
                               drop(conn);
                               return;
                             }
                             std::string line(asio::buffers_begin(conn->input().data()),
                                              asio::buffers_begin(conn->input().data()) + static_cast<long>(n));
                             conn->input().consume(n);
                             while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
                             if (line.empty()) {
                               read(conn);
                               return;
                             }
                             const bool was_ticking = session.running() && !session.lockstep();
                             Session::Reply reply = session.handle(line);
                             for (auto& out : reply.lines) conn->send(std::move(out));
                             if (reply.close) {
                               conn->close_after_flush();
                               session.disconnect();
                               return;
                             }
                             if (!was_ticking && session.running() && !session.lockstep()) schedule_tick();
                             read(conn);
                           });
  }

  void drop(const std::shared_ptr<Connection>& conn) {
    conn->shutdown();
    if (conn == client) {
      session.disconnect();
      client.reset();
    }
  }

  void schedule_tick() {
    const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(session.dt()));
    next_tick = std::chrono::steady_clock::now() + period;
    arm(period);
  }

  void arm(std::chrono::steady_clock::duration period) {
    timer.expires_at(next_tick);
    timer.async_wait([this, period](boost::system::error_code ec) {
      if (ec) return;
      if (!client || !client->open()) return;
      auto frame = session.tick();
      if (!frame) return;
      client->send(std::move(*frame));
      next_tick += period;
      arm(period);
    });
  }

  Session session;
  asio::io_context io;
  tcp::acceptor acceptor;
  asio::steady_timer timer;
  asio::executor_work_guard<asio::io_context::executor_type> work;
  std::shared_ptr<Connection> client;
  std::chrono::steady_clock::time_point next_tick{};
};

Server::Server(ScenarioConfig config, const std::string& bind)
    : impl_(std::make_unique<Impl>(std::move(config), bind)) {}

Server::~Server() = default;

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() {
  impl_->accept();
  impl_->io.run();
}

void Server::stop() {
  asio::post(impl_->io, [impl = impl_.get()] {
    boost::system::error_code ignored;
    impl->acceptor.close(ignored);
    impl->timer.cancel();
    if (impl->client) impl->client->shutdown();
    impl->work.reset();
  });
  impl_->io.stop();
}

}  // namespace mcrowds
