#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "olsrsim/types.hpp"

namespace olsrsim {

enum class MessageKind : std::uint8_t { Hello = 0, Tc = 1, Data = 2 };
enum class LinkStatus : std::uint8_t { Symmetric = 0, Heard = 1, Mpr = 2 };

struct HelloEntry {
  NodeId neighbor{};
  LinkStatus status = LinkStatus::Heard;

  bool operator==(const HelloEntry&) const = default;
};

struct HelloBody {
  std::vector<HelloEntry> neighbors;
  Energy reported_energy;

  bool operator==(const HelloBody&) const = default;
};

struct TcBody {
  std::vector<NodeId> advertised;
  Energy reported_energy;
  std::uint32_t ansn = 0;

  bool operator==(const TcBody&) const = default;
};

struct DataBody {
  NodeId source{};
  NodeId destination{};
  std::uint32_t payload_size = 0;
  std::uint8_t ttl = 32;

  bool operator==(const DataBody&) const = default;
};

/// One protocol message. Hello never travels beyond one hop; Tc is flooded
/// through MPRs; Data is forwarded hop by hop along routing tables.
struct Message {
  NodeId originator{};
  std::uint32_t seq = 0;
  SimTime emitted_at{0};
  std::variant<HelloBody, TcBody, DataBody> body;

  MessageKind kind() const { return static_cast<MessageKind>(body.index()); }

  const HelloBody& hello() const { return std::get<HelloBody>(body); }
  const TcBody& tc() const { return std::get<TcBody>(body); }
  const DataBody& data() const { return std::get<DataBody>(body); }
  DataBody& data() { return std::get<DataBody>(body); }

  bool operator==(const Message&) const = default;
};

/// Little-endian framing used for traces and the round-trip property.
std::vector<std::uint8_t> encode(const Message& m);

/// Inverse of encode; nullopt on truncated or malformed input.
std::optional<Message> decode(std::span<const std::uint8_t> bytes);

}  // namespace olsrsim
