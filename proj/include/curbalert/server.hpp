#pragma once

// WebSocket service hosting one Session at a time. A single io_context
// thread owns the tick timer, the socket and the session; reads and writes
// are asynchronous so a slow client never stalls the tick loop. When the
// outbound queue backs up, the oldest audio frames are dropped first.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <utility>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "curbalert/session.hpp"

namespace curbalert {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = boost::beast::websocket;
using tcp = net::ip::tcp;

struct ServerOptions {
  AppConfig config;
  std::string address = "127.0.0.1";
  std::uint16_t port = 8765;
  /// Audio frames allowed to wait in the outbound queue before the oldest
  /// is dropped.
  std::size_t max_queued_audio_frames = 8;
  std::function<void(const std::string&)> log;
};

class SessionConnection : public std::enable_shared_from_this<SessionConnection> {
public:
  SessionConnection(tcp::socket socket, const ServerOptions& opts, std::function<void()> on_close)
      : ws_(std::move(socket)),
        timer_(ws_.get_executor()),
        opts_(opts),
        session_(opts.config),
        on_close_(std::move(on_close)) {}

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return self->finish();
      self->read();
      self->next_tick_ = std::chrono::steady_clock::now();
      self->schedule_tick();
    });
  }

  std::uint64_t dropped_frames() const { return dropped_; }

private:
  struct Outgoing {
    std::string payload;
    bool binary;
  };

  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->finish();
      const std::string msg = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      try {
        if (!self->ws_.got_text()) throw ProtocolError("client frames must be text");
        self->session_.receive(msg);
      } catch (const ProtocolError& e) {
        self->fail(e.what());
        return;
      }
      self->read();
    });
  }

  void schedule_tick() {
    if (closing_) return;
    const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / opts_.config.tick_hz));
    next_tick_ += period;
    timer_.expires_at(next_tick_);
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->closing_) return;
      self->on_tick();
      self->schedule_tick();
    });
  }

  void on_tick() {
    SessionOutput out = session_.advance();
    for (auto& t : out.text) enqueue({std::move(t), false});
    enqueue({encode_audio_frame(out.audio), true});
  }

  void enqueue(Outgoing msg) {
    if (msg.binary) {
      std::size_t queued = 0;
      for (const auto& m : queue_) queued += m.binary;
      // Never drop the frame currently being written (front while writing).
      while (queued >= opts_.max_queued_audio_frames) {
        auto it = queue_.begin() + (writing_ ? 1 : 0);
        while (it != queue_.end() && !it->binary) ++it;
        if (it == queue_.end()) break;
        queue_.erase(it);
        --queued;
        ++dropped_;
      }
    }
    queue_.push_back(std::move(msg));
    if (!writing_) write_next();
  }

  void write_next() {
    if (queue_.empty()) {
      writing_ = false;
      if (closing_) close();
      return;
    }
    writing_ = true;
    ws_.binary(queue_.front().binary);
    ws_.async_write(net::buffer(queue_.front().payload), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->queue_.pop_front();
      if (ec) return self->finish();
      self->write_next();
    });
  }

  void fail(const std::string& what) {
    if (opts_.log) opts_.log("session error: " + what);
    timer_.cancel();
    queue_.push_back({Session::error_message(what), false});
    closing_ = true;
    if (!writing_) write_next();
  }

  void close() {
    ws_.async_close(websocket::close_code::policy_error,
                    [self = shared_from_this()](beast::error_code) { self->finish(); });
  }

  void finish() {
    if (finished_) return;
    finished_ = true;
    closing_ = true;
    timer_.cancel();
    if (on_close_) on_close_();
  }

  websocket::stream<beast::tcp_stream> ws_;
  net::steady_timer timer_;
  const ServerOptions& opts_;
  Session session_;
  std::function<void()> on_close_;
  beast::flat_buffer buffer_;
  std::deque<Outgoing> queue_;
  std::chrono::steady_clock::time_point next_tick_;
  bool writing_ = false;
  bool closing_ = false;
  bool finished_ = false;
  std::uint64_t dropped_ = 0;
};

/// Accepts connections and serves one session at a time; extra clients get
/// an error message and are closed.
class Server {
public:
  explicit Server(ServerOptions opts)
      : opts_(std::move(opts)), acceptor_(ioc_, tcp::endpoint(net::ip::make_address(opts_.address), opts_.port)) {}

  std::uint16_t port() const { return acceptor_.local_endpoint().port(); }

  /// Runs until stop() is called.
  void run() {
    accept();
    ioc_.run();
  }

  void stop() {
    net::post(ioc_, [this] {
      beast::error_code ec;
      acceptor_.close(ec);
      ioc_.stop();
    });
  }

private:
  void accept() {
    acceptor_.async_accept(net::make_strand(ioc_), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      if (busy_) {
        reject(std::move(socket));
      } else {
        busy_ = true;
        if (opts_.log) opts_.log("session opened");
        std::make_shared<SessionConnection>(std::move(socket), opts_, [this] {
          busy_ = false;
          if (opts_.log) opts_.log("session closed");
        })->start();
      }
      accept();
    });
  }

  void reject(tcp::socket socket) {
    auto ws = std::make_shared<websocket::stream<beast::tcp_stream>>(std::move(socket));
    ws->async_accept([ws](beast::error_code ec) {
      if (ec) return;
      auto msg = std::make_shared<std::string>(Session::error_message("another session is active"));
      ws->text(true);
      ws->async_write(net::buffer(*msg), [ws, msg](beast::error_code, std::size_t) {
        ws->async_close(websocket::close_code::try_again_later, [ws](beast::error_code) {});
      });
    });
  }

  ServerOptions opts_;
  net::io_context ioc_{1};
  tcp::acceptor acceptor_;
  std::atomic<bool> busy_{false};
};

}  // namespace curbalert
