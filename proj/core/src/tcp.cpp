#include "edsl/tcp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <thread>

#include "edsl/loss.hpp"
#include "edsl/wire.hpp"

namespace edsl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_left(Clock::time_point deadline) {
  return std::chrono::duration<double>(deadline - Clock::now()).count();
}

void close_quiet(int fd) {
  if (fd >= 0) ::close(fd);
}

// Reads exactly `len` bytes or throws; respects the deadline via poll.
void read_exact(int fd, std::uint8_t* out, std::size_t len, Clock::time_point deadline,
                const std::string& who) {
  std::size_t got = 0;
  while (got < len) {
    const double left = seconds_left(deadline);
    if (left <= 0.0) throw TransportError("timeout reading from " + who);
    pollfd pfd{fd, POLLIN, 0};
    const int pr = ::poll(&pfd, 1, static_cast<int>(left * 1000.0) + 1);
    if (pr < 0) throw TransportError("poll failed: " + std::string(std::strerror(errno)));
    if (pr == 0) continue;
    const ssize_t n = ::recv(fd, out + got, len - got, 0);
    if (n == 0) throw TransportError("connection closed by " + who);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw TransportError("recv failed: " + std::string(std::strerror(errno)));
    }
    got += static_cast<std::size_t>(n);
  }
}

void write_all(int fd, const std::uint8_t* data, std::size_t len, const std::string& who) {
  std::size_t sent = 0;
  while (sent < len) {
    const ssize_t n = ::send(fd, data + sent, len - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError("send to " + who + " failed: " + std::string(std::strerror(errno)));
    }
    sent += static_cast<std::size_t>(n);
  }
}

RoundMessage read_message(int fd, Clock::time_point deadline, const std::string& who) {
  std::uint8_t header[kWireHeaderBytes];
  read_exact(fd, header, kWireHeaderBytes, deadline, who);
  const std::uint32_t payload_len = static_cast<std::uint32_t>(header[12]) |
                                    (static_cast<std::uint32_t>(header[13]) << 8) |
                                    (static_cast<std::uint32_t>(header[14]) << 16) |
                                    (static_cast<std::uint32_t>(header[15]) << 24);
  std::vector<std::uint8_t> buf(wire_size(payload_len));
  std::memcpy(buf.data(), header, kWireHeaderBytes);
  if (payload_len > 0) {
    read_exact(fd, buf.data() + kWireHeaderBytes, 8 * static_cast<std::size_t>(payload_len),
               deadline, who);
  }
  return decode_message(buf.data(), buf.size());
}

void send_message(int fd, const RoundMessage& msg, const std::string& who) {
  const auto bytes = encode_message(msg);
  write_all(fd, bytes.data(), bytes.size(), who);
}

}  // namespace

TcpMasterPool::TcpMasterPool(const std::string& host, std::uint16_t port,
                             std::size_t expected_workers, double round_timeout_seconds)
    : expected_(expected_workers), round_timeout_(round_timeout_seconds) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw TransportError("socket: " + std::string(std::strerror(errno)));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    close_quiet(listen_fd_);
    throw TransportError("bad listen address '" + host + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    close_quiet(listen_fd_);
    throw TransportError("bind: " + std::string(std::strerror(errno)));
  }
  if (::listen(listen_fd_, 64) != 0) {
    close_quiet(listen_fd_);
    throw TransportError("listen: " + std::string(std::strerror(errno)));
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

TcpMasterPool::~TcpMasterPool() {
  for (auto& [id, fd] : fd_by_machine_) close_quiet(fd);
  close_quiet(listen_fd_);
}

void TcpMasterPool::accept_workers(double timeout_seconds) {
  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(timeout_seconds));
  while (fd_by_machine_.size() < expected_) {
    const double left = seconds_left(deadline);
    if (left <= 0.0) {
      throw TransportError("timed out waiting for workers: have " +
                           std::to_string(fd_by_machine_.size()) + " of " +
                           std::to_string(expected_));
    }
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int pr = ::poll(&pfd, 1, static_cast<int>(left * 1000.0) + 1);
    if (pr <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    try {
      const RoundMessage hello = read_message(fd, deadline, "handshaking worker");
      if (hello.kind != MessageKind::gradient_report || hello.round != kHandshakeRound ||
          !hello.payload.empty()) {
        throw TransportError("bad handshake message");
      }
      const int machine_id = hello.sender;
      if (machine_id < 1 || fd_by_machine_.count(machine_id)) {
        throw TransportError("handshake with invalid or duplicate machine_id " +
                             std::to_string(machine_id));
      }
      fd_by_machine_[machine_id] = fd;
    } catch (const TransportError&) {
      close_quiet(fd);
      throw;
    }
  }
}

std::vector<Vector> TcpMasterPool::exchange(std::uint32_t round, const Vector& beta) {
  if (fd_by_machine_.size() != expected_) {
    throw TransportError("exchange before all workers connected");
  }
  RoundMessage broadcast{MessageKind::model_broadcast, round, 0, beta};
  const auto bytes = encode_message(broadcast);
  for (const auto& [id, fd] : fd_by_machine_) {
    write_all(fd, bytes.data(), bytes.size(), "worker " + std::to_string(id));
  }

  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(round_timeout_));
  std::vector<Vector> grads;
  grads.reserve(fd_by_machine_.size());
  std::vector<int> missing;
  for (const auto& [id, fd] : fd_by_machine_) {  // map iterates in ascending id order
    try {
      RoundMessage report = read_message(fd, deadline, "worker " + std::to_string(id));
      if (report.kind != MessageKind::gradient_report || report.round != round ||
          report.sender != id) {
        throw TransportError("unexpected report from worker " + std::to_string(id));
      }
      grads.push_back(std::move(report.payload));
    } catch (const TransportError&) {
      missing.push_back(id);
    }
  }
  if (!missing.empty()) {
    std::string ids;
    for (int id : missing) ids += (ids.empty() ? "" : ",") + std::to_string(id);
    throw TransportError("round " + std::to_string(round) + " failed: no report from machines [" +
                             ids + "]",
                         missing);
  }
  return grads;
}

void TcpMasterPool::shutdown(std::uint32_t round) {
  RoundMessage bye{MessageKind::shutdown, round, 0, {}};
  const auto bytes = encode_message(bye);
  for (const auto& [id, fd] : fd_by_machine_) {
    try {
      write_all(fd, bytes.data(), bytes.size(), "worker " + std::to_string(id));
    } catch (const TransportError&) {
      // peer already gone; nothing to tear down
    }
    close_quiet(fd);
  }
  fd_by_machine_.clear();
}

int run_worker(const Shard& shard, const LossSpec& spec, const WorkerConfig& config) {
  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(
                                               config.connect_timeout_seconds));
  int fd = -1;
  while (true) {
    fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw TransportError("socket: " + std::string(std::strerror(errno)));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(config.port);
    if (::inet_pton(AF_INET, config.host.c_str(), &addr.sin_addr) != 1) {
      close_quiet(fd);
      throw TransportError("bad master address '" + config.host + "'");
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0) break;
    close_quiet(fd);
    if (seconds_left(deadline) <= 0.0) {
      throw TransportError("could not connect to master at " + config.host + ":" +
                           std::to_string(config.port));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));

  send_message(fd,
               {MessageKind::gradient_report, kHandshakeRound,
                static_cast<std::uint16_t>(config.machine_id), {}},
               "master");

  int rounds_served = 0;
  while (true) {
    // Rounds can be separated by long master-side solves; wait generously.
    const auto round_deadline = Clock::now() + std::chrono::hours(24);
    RoundMessage msg = read_message(fd, round_deadline, "master");
    if (msg.kind == MessageKind::shutdown) break;
    if (msg.kind != MessageKind::model_broadcast || msg.sender != 0) {
      close_quiet(fd);
      throw TransportError("worker: unexpected message kind");
    }
    const Vector grad = loss_gradient(spec, shard, msg.payload);
    send_message(fd,
                 {MessageKind::gradient_report, msg.round,
                  static_cast<std::uint16_t>(config.machine_id), grad},
                 "master");
    ++rounds_served;
  }
  close_quiet(fd);
  return rounds_served;
}

}  // namespace edsl
