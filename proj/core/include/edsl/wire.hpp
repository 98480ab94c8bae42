#pragma once

#include <cstdint>
#include <vector>

#include "edsl/types.hpp"

namespace edsl {

// Wire layout (all integers little-endian):
//   [magic "EDSL"][version u8 = 1][kind u8][round u32][sender u16]
//   [payload_len u32 = number of doubles][payload doubles, IEEE-754 LE]
inline constexpr char kWireMagic[4] = {'E', 'D', 'S', 'L'};
inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kWireHeaderBytes = 16;
// Handshake: a GradientReport with this round number and an empty payload.
inline constexpr std::uint32_t kHandshakeRound = 0xFFFFFFFFu;

enum class MessageKind : std::uint8_t {
  model_broadcast = 0,
  gradient_report = 1,
  shutdown = 2,
};

struct RoundMessage {
  MessageKind kind = MessageKind::shutdown;
  std::uint32_t round = 0;
  std::uint16_t sender = 0;
  Vector payload;  // empty for shutdown / handshake
};

std::vector<std::uint8_t> encode_message(const RoundMessage& msg);

// Decodes one complete message; throws TransportError on bad magic,
// version, kind, or truncated input.
RoundMessage decode_message(const std::uint8_t* data, std::size_t size);

inline std::size_t wire_size(std::size_t payload_len) {
  return kWireHeaderBytes + 8 * payload_len;
}

}  // namespace edsl
