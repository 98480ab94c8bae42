#include "edsl/wire.hpp"

#include <cstring>

namespace edsl {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint64_t double_bits(double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof(bits));
  return bits;
}

double bits_double(std::uint64_t bits) {
  double d;
  std::memcpy(&d, &bits, sizeof(d));
  return d;
}

}  // namespace

std::vector<std::uint8_t> encode_message(const RoundMessage& msg) {
  std::vector<std::uint8_t> out;
  out.reserve(wire_size(msg.payload.size()));
  out.insert(out.end(), kWireMagic, kWireMagic + 4);
  out.push_back(kWireVersion);
  out.push_back(static_cast<std::uint8_t>(msg.kind));
  put_u32(out, msg.round);
  out.push_back(static_cast<std::uint8_t>(msg.sender));
  out.push_back(static_cast<std::uint8_t>(msg.sender >> 8));
  put_u32(out, static_cast<std::uint32_t>(msg.payload.size()));
  for (double d : msg.payload) {
    const std::uint64_t bits = double_bits(d);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
  }
  return out;
}

RoundMessage decode_message(const std::uint8_t* data, std::size_t size) {
  if (size < kWireHeaderBytes) throw TransportError("wire: truncated header");
  if (std::memcmp(data, kWireMagic, 4) != 0) throw TransportError("wire: bad magic");
  if (data[4] != kWireVersion) {
    throw TransportError("wire: unsupported version " + std::to_string(data[4]));
  }
  if (data[5] > 2) throw TransportError("wire: unknown message kind " + std::to_string(data[5]));
  RoundMessage msg;
  msg.kind = static_cast<MessageKind>(data[5]);
  msg.round = get_u32(data + 6);
  msg.sender = static_cast<std::uint16_t>(data[10] | (data[11] << 8));
  const std::uint32_t payload_len = get_u32(data + 12);
  if (size != wire_size(payload_len)) {
    throw TransportError("wire: size " + std::to_string(size) + " does not match payload_len " +
                         std::to_string(payload_len));
  }
  msg.payload.resize(payload_len);
  const std::uint8_t* p = data + kWireHeaderBytes;
  for (std::uint32_t i = 0; i < payload_len; ++i, p += 8) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    msg.payload[i] = bits_double(bits);
  }
  return msg;
}

}  // namespace edsl
