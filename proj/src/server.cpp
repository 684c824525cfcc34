#include "hidwa/server.hpp"

#include <chrono>
#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <variant>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "hidwa/trace_io.hpp"

namespace hidwa
{
namespace
{

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

struct Connected
{
  ClientId id;
};
struct Disconnected
{
  ClientId id;
};
struct Received
{
  ClientId id;
  std::string text;
};
using NetworkEvent = std::variant<Connected, Disconnected, Received>;

// Arrival-ordered queue from the network thread to the simulation loop.
class Inbox
{
public:
  void push(NetworkEvent ev)
  {
    std::lock_guard lock(mutex_);
    events_.push_back(std::move(ev));
  }
  std::vector<NetworkEvent> drain()
  {
    std::lock_guard lock(mutex_);
    std::vector<NetworkEvent> out;
    out.swap(events_);
    return out;
  }

private:
  std::mutex mutex_;
  std::vector<NetworkEvent> events_;
};

class Connection;

// Connection registry; touched only on the io thread.
struct Hub
{
  std::unordered_map<ClientId, std::weak_ptr<Connection>> connections;
  Inbox inbox;
  ClientId next_id{1};
};

class Connection : public std::enable_shared_from_this<Connection>
{
public:
  Connection(tcp::socket socket, Hub &hub, ClientId id)
  : ws_(std::move(socket)), hub_(hub), id_(id)
  {
  }

  void start()
  {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
  }

  void send(std::shared_ptr<const std::string> message)
  {
    outbox_.push_back(std::move(message));
    if (outbox_.size() == 1 && open_) {
      write_next();
    }
  }

  void close()
  {
    if (open_) {
      beast::error_code ec;
      beast::get_lowest_layer(ws_).socket().close(ec);
    }
  }

private:
  void on_accept(beast::error_code ec)
  {
    if (ec) {
      return;
    }
    open_ = true;
    hub_.connections[id_] = weak_from_this();
    hub_.inbox.push(Connected{id_});
    if (!outbox_.empty()) {
      write_next();
    }
    read_next();
  }

  void read_next()
  {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->on_read(ec);
    });
  }

  void on_read(beast::error_code ec)
  {
    if (ec) {
      finish();
      return;
    }
    hub_.inbox.push(Received{id_, beast::buffers_to_string(buffer_.data())});
    buffer_.consume(buffer_.size());
    read_next();
  }

  void write_next()
  {
    ws_.text(true);
    ws_.async_write(net::buffer(*outbox_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      self->on_write(ec);
                    });
  }

  void on_write(beast::error_code ec)
  {
    if (ec) {
      finish();
      return;
    }
    outbox_.pop_front();
    if (!outbox_.empty()) {
      write_next();
    }
  }

  void finish()
  {
    if (!open_) {
      return;
    }
    open_ = false;
    hub_.connections.erase(id_);
    hub_.inbox.push(Disconnected{id_});
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> outbox_;
  Hub &hub_;
  ClientId id_;
  bool open_{false};
};

}  // namespace

struct Server::Impl
{
  explicit Impl(ServerOptions opts)
  : options(std::move(opts)), acceptor(ioc)
  {
    beast::error_code ec;
    const tcp::endpoint endpoint(net::ip::make_address("0.0.0.0"), options.port);
    acceptor.open(endpoint.protocol(), ec);
    if (!ec) {
      acceptor.set_option(net::socket_base::reuse_address(true), ec);
    }
    if (!ec) {
      acceptor.bind(endpoint, ec);
    }
    if (!ec) {
      acceptor.listen(net::socket_base::max_listen_connections, ec);
    }
    if (ec) {
      throw std::runtime_error("cannot listen on port " + std::to_string(options.port) + ": " +
                               ec.message());
    }
  }

  void accept_next()
  {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        return;
      }
      auto conn = std::make_shared<Connection>(std::move(socket), hub, hub.next_id++);
      conn->start();
      accept_next();
    });
  }

  // Called from the simulation loop; the write happens on the io thread.
  void send(ClientId id, std::string text)
  {
    auto message = std::make_shared<const std::string>(std::move(text));
    net::post(ioc, [this, id, message] {
      if (auto it = hub.connections.find(id); it != hub.connections.end()) {
        if (auto conn = it->second.lock()) {
          conn->send(message);
        }
      }
    });
  }

  struct ClientView
  {
    std::uint64_t path_version{0};
    std::uint64_t epoch{0};
    bool has_path{false};
  };

  void send_snapshot(LiveSession &session, ClientId id, ClientView &view)
  {
    const auto &world = session.simulation().world();
    const bool geometry = view.epoch != session.epoch();
    const bool path = geometry || !view.has_path || view.path_version != world.path_version;
    send(id, encode_snapshot(make_snapshot(session.simulation(), path, geometry, session.paused())));
    view.epoch = session.epoch();
    view.path_version = world.path_version;
    view.has_path = true;
  }

  void write_outputs(const LiveSession &session)
  {
    if (options.trace_path) {
      std::ofstream out(*options.trace_path);
      write_trace(out, {session.scenario().name, session.mode(), session.scenario().params},
                  session.simulation().trace());
    }
    if (options.record_path) {
      std::ofstream out(*options.record_path);
      out << session.recording_jsonl();
    }
  }

  void simulation_loop()
  {
    LiveSession session(options.scenario, options.mode, options.start_paused);
    std::map<ClientId, ClientView> clients;
    const auto period = std::chrono::duration<double>(options.scenario.params.dt_c);
    auto deadline = std::chrono::steady_clock::now();

    while (!stopping.load()) {
      bool changed = false;
      for (auto &ev : inbox().drain()) {
        if (const auto *c = std::get_if<Connected>(&ev)) {
          auto &view = clients[c->id];
          send_snapshot(session, c->id, view);
        } else if (const auto *d = std::get_if<Disconnected>(&ev)) {
          clients.erase(d->id);
          session.disconnect(d->id);
        } else if (const auto *r = std::get_if<Received>(&ev)) {
          const auto outcome = session.handle_raw(r->id, r->text);
          changed = changed || !outcome.error;
          if (outcome.error) {
            send(r->id, encode_error(*outcome.error));
          } else if (outcome.became_driver) {
            send(r->id, encode_role("driver"));
          }
        }
      }

      const bool was_finished = session.finished();
      if (session.advance()) {
        for (auto &[id, view] : clients) {
          send_snapshot(session, id, view);
        }
        if (session.finished() && !was_finished) {
          write_outputs(session);
          if (options.exit_on_finish) {
            break;
          }
        }
        if (options.real_time) {
          deadline += std::chrono::duration_cast<std::chrono::steady_clock::duration>(period);
          std::this_thread::sleep_until(deadline);
        }
      } else {
        // Paused or finished: still show control changes such as reset or pause.
        if (changed) {
          for (auto &[id, view] : clients) {
            send_snapshot(session, id, view);
          }
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
        deadline = std::chrono::steady_clock::now();
      }
    }
    if (!session.finished()) {
      write_outputs(session);
    }
  }

  Inbox &inbox() { return hub.inbox; }

  ServerOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor;
  Hub hub;
  std::atomic<bool> stopping{false};
};

Server::Server(ServerOptions options)
: impl_(std::make_unique<Impl>(std::move(options)))
{
}

Server::~Server() = default;

unsigned short Server::port() const
{
  return impl_->acceptor.local_endpoint().port();
}

void Server::run()
{
  impl_->accept_next();
  std::thread io([this] {
    auto guard = net::make_work_guard(impl_->ioc);
    impl_->ioc.run();
  });
  impl_->simulation_loop();
  net::post(impl_->ioc, [this] {
    beast::error_code ec;
    impl_->acceptor.close(ec);
    for (auto &[id, weak] : impl_->hub.connections) {
      if (auto conn = weak.lock()) {
        conn->close();
      }
    }
  });
  // Give pending writes a moment to flush before stopping the loop.
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  impl_->ioc.stop();
  io.join();
}

void Server::stop()
{
  impl_->stopping.store(true);
}

}  // namespace hidwa
