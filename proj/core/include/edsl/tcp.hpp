#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "edsl/protocol.hpp"
#include "edsl/types.hpp"

namespace edsl {

// Master side of the wire protocol: listens, accepts worker handshakes,
// then services exchange() by broadcasting the model and collecting one
// gradient report per worker. Synchronous rounds; a missing report within
// the deadline is fatal and names the machines that never answered.
class TcpMasterPool : public WorkerPool {
 public:
  // Binds and listens immediately (port 0 picks an ephemeral port); call
  // accept_workers() before the first exchange.
  TcpMasterPool(const std::string& host, std::uint16_t port, std::size_t expected_workers,
                double round_timeout_seconds = 30.0);
  ~TcpMasterPool() override;

  TcpMasterPool(const TcpMasterPool&) = delete;
  TcpMasterPool& operator=(const TcpMasterPool&) = delete;

  std::uint16_t port() const { return port_; }

  // Blocks until all expected workers have handshaken.
  void accept_workers(double timeout_seconds = 120.0);

  std::size_t worker_count() const override { return expected_; }
  std::vector<Vector> exchange(std::uint32_t round, const Vector& beta) override;
  void shutdown(std::uint32_t round) override;

 private:
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::size_t expected_ = 0;
  double round_timeout_ = 30.0;
  std::map<int, int> fd_by_machine_;  // machine_id -> connected socket
};

struct WorkerConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  int machine_id = 1;
  double connect_timeout_seconds = 20.0;
};

// Worker loop: connect, handshake, answer model broadcasts with local
// gradients until a shutdown message arrives. Returns the number of rounds
// served.
int run_worker(const Shard& shard, const LossSpec& spec, const WorkerConfig& config);

}  // namespace edsl
