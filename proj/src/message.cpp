#include "olsrsim/message.hpp"

#include <type_traits>
#include <utility>

namespace olsrsim {

namespace {

class Writer {
 public:
  template <typename T>
  void put(T v) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
    }
  }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  template <typename T>
  bool get(T& v) {
    using U = std::make_unsigned_t<T>;
    if (in_.size() - pos_ < sizeof(T)) return false;
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      u |= static_cast<U>(static_cast<U>(in_[pos_ + i]) << (8 * i));
    }
    pos_ += sizeof(T);
    v = static_cast<T>(u);
    return true;
  }

  bool done() const { return pos_ == in_.size(); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode(const Message& m) {
  Writer w;
  w.put(static_cast<std::uint8_t>(m.kind()));
  w.put(index(m.originator));
  w.put(m.seq);
  w.put(static_cast<std::int64_t>(m.emitted_at.count()));
  switch (m.kind()) {
    case MessageKind::Hello: {
      const auto& h = m.hello();
      w.put(h.reported_energy.as_nanojoules());
      w.put(static_cast<std::uint32_t>(h.neighbors.size()));
      for (const auto& e : h.neighbors) {
        w.put(index(e.neighbor));
        w.put(static_cast<std::uint8_t>(e.status));
      }
      break;
    }
    case MessageKind::Tc: {
      const auto& t = m.tc();
      w.put(t.reported_energy.as_nanojoules());
      w.put(t.ansn);
      w.put(static_cast<std::uint32_t>(t.advertised.size()));
      for (NodeId n : t.advertised) w.put(index(n));
      break;
    }
    case MessageKind::Data: {
      const auto& d = m.data();
      w.put(index(d.source));
      w.put(index(d.destination));
      w.put(d.payload_size);
      w.put(d.ttl);
      break;
    }
  }
  return w.take();
}

std::optional<Message> decode(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  std::uint8_t kind = 0;
  std::uint32_t originator = 0;
  std::int64_t emitted = 0;
  Message m;
  if (!r.get(kind) || !r.get(originator) || !r.get(m.seq) || !r.get(emitted)) return std::nullopt;
  m.originator = NodeId{originator};
  m.emitted_at = SimTime{emitted};

  switch (static_cast<MessageKind>(kind)) {
    case MessageKind::Hello: {
      HelloBody h;
      std::int64_t nj = 0;
      std::uint32_t count = 0;
      if (!r.get(nj) || !r.get(count)) return std::nullopt;
      h.reported_energy = Energy::nanojoules(nj);
      for (std::uint32_t i = 0; i < count; ++i) {
        std::uint32_t id = 0;
        std::uint8_t status = 0;
        if (!r.get(id) || !r.get(status) || status > 2) return std::nullopt;
        h.neighbors.push_back({NodeId{id}, static_cast<LinkStatus>(status)});
      }
      m.body = std::move(h);
      break;
    }
    case MessageKind::Tc: {
      TcBody t;
      std::int64_t nj = 0;
      std::uint32_t count = 0;
      if (!r.get(nj) || !r.get(t.ansn) || !r.get(count)) return std::nullopt;
      t.reported_energy = Energy::nanojoules(nj);
      for (std::uint32_t i = 0; i < count; ++i) {
        std::uint32_t id = 0;
        if (!r.get(id)) return std::nullopt;
        t.advertised.push_back(NodeId{id});
      }
      m.body = std::move(t);
      break;
    }
    case MessageKind::Data: {
      DataBody d;
      std::uint32_t src = 0;
      std::uint32_t dst = 0;
      if (!r.get(src) || !r.get(dst) || !r.get(d.payload_size) || !r.get(d.ttl)) {
        return std::nullopt;
      }
      d.source = NodeId{src};
      d.destination = NodeId{dst};
      m.body = d;
      break;
    }
    default:
      return std::nullopt;
  }
  if (!r.done()) return std::nullopt;
  return m;
}

}  // namespace olsrsim
