#include <algorithm>
#include <random>

#include "doctest.h"
#include "olsrsim/message.hpp"
#include "olsrsim/types.hpp"

using namespace olsrsim;

namespace {

bool has_error(const std::vector<std::string>& errors, std::string_view needle) {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

Message random_message(std::mt19937_64& g) {
  auto pick = [&](std::uint64_t n) { return static_cast<std::uint32_t>(g() % n); };
  Message m;
  m.originator = NodeId{pick(1000)};
  m.seq = static_cast<std::uint32_t>(g());
  m.emitted_at = SimTime{static_cast<std::int64_t>(g() % 10'000'000)};
  switch (pick(3)) {
    case 0: {
      HelloBody h;
      h.reported_energy = Energy::nanojoules(static_cast<std::int64_t>(g() % 200'000'000'000ULL));
      for (auto i = pick(15); i > 0; --i) {
        h.neighbors.push_back({NodeId{pick(1000)}, static_cast<LinkStatus>(pick(3))});
      }
      m.body = h;
      break;
    }
    case 1: {
      TcBody t;
      t.reported_energy = Energy::nanojoules(static_cast<std::int64_t>(g() % 200'000'000'000ULL));
      t.ansn = static_cast<std::uint32_t>(g());
      for (auto i = pick(15); i > 0; --i) t.advertised.push_back(NodeId{pick(1000)});
      m.body = t;
      break;
    }
    default:
      m.body = DataBody{NodeId{pick(1000)}, NodeId{pick(1000)}, pick(65536),
                        static_cast<std::uint8_t>(pick(256))};
  }
  return m;
}

}  // namespace

TEST_CASE("validate_params accepts the defaults") {
  ProtocolParams p;
  p.hello_interval = seconds(2);
  p.tc_interval = seconds(5);
  p.mpr_coverage = 1;
  CHECK(validate_params(p).empty());
}

TEST_CASE("validate_params reports every violation") {
  ProtocolParams p;
  p.hello_interval = SimTime{0};
  CHECK(has_error(validate_params(p), "hello_interval must be > 0"));

  ProtocolParams q;
  q.neighbor_hold_time = seconds(2);
  auto errors = validate_params(q);
  CHECK(has_error(errors, "hold time < 3×interval"));

  ProtocolParams r;
  r.tc_interval = SimTime{0};
  r.mpr_coverage = 0;
  r.topology_hold_time = seconds(1);
  errors = validate_params(r);
  CHECK(has_error(errors, "tc_interval must be > 0"));
  CHECK(has_error(errors, "mpr_coverage must be >= 1"));
}

TEST_CASE("hold time exactly three intervals is accepted") {
  ProtocolParams p;
  p.neighbor_hold_time = 3 * p.hello_interval;
  p.topology_hold_time = 3 * p.tc_interval;
  CHECK(validate_params(p).empty());
}

TEST_CASE("time and energy conversions") {
  CHECK(seconds(1.5).count() == 1500);
  CHECK(to_seconds(SimTime{250}) == doctest::Approx(0.25));
  CHECK(Energy::joules(37.5).as_nanojoules() == 37'500'000'000);
  CHECK(Energy::joules(0.02) * 3 == Energy::joules(0.06));
  CHECK(Energy::joules(1) - Energy::joules(0.25) == Energy::joules(0.75));
  CHECK(Energy::joules(2) > Energy::joules(1));
}

TEST_CASE("enum names round-trip") {
  for (auto m : {EstimationMode::Ideal, EstimationMode::Realistic, EstimationMode::Prediction,
                 EstimationMode::SmartPrediction}) {
    CHECK(parse_estimation_mode(to_string(m)) == m);
  }
  for (auto p : {PathPolicy::ShortestHop, PathPolicy::BottleneckEnergy, PathPolicy::WidestBandwidth}) {
    CHECK(parse_path_policy(to_string(p)) == p);
  }
  for (auto p : {MprPolicy::Classic, MprPolicy::EnergyAware}) CHECK(parse_mpr_policy(to_string(p)) == p);
  for (auto r : {TcRedundancy::SelectorsOnly, TcRedundancy::SelectorsPlusMprs,
                 TcRedundancy::AllNeighbors}) {
    CHECK(parse_tc_redundancy(to_string(r)) == r);
  }
  CHECK_FALSE(parse_estimation_mode("omniscient").has_value());
}

TEST_CASE("named variants map onto the policy matrix") {
  CHECK(parse_variant("olsr") == VariantConfig{MprPolicy::Classic, PathPolicy::ShortestHop});
  CHECK(parse_variant("modified_routing") ==
        VariantConfig{MprPolicy::Classic, PathPolicy::BottleneckEnergy});
  CHECK(parse_variant("modified_mpr") == VariantConfig{MprPolicy::EnergyAware, PathPolicy::ShortestHop});
  CHECK(parse_variant("eolsr") == VariantConfig{MprPolicy::EnergyAware, PathPolicy::BottleneckEnergy});
  CHECK(parse_variant("modified_mpr_routing") == parse_variant("eolsr"));
}

TEST_CASE("message encode/decode is the identity") {
  std::mt19937_64 g(20240601);
  for (int i = 0; i < 2000; ++i) {
    const Message m = random_message(g);
    const auto bytes = encode(m);
    const auto back = decode(bytes);
    REQUIRE(back.has_value());
    CHECK(*back == m);
  }
}

TEST_CASE("decode rejects truncated and padded input") {
  Message m;
  m.originator = NodeId{4};
  m.seq = 9;
  m.body = HelloBody{{{NodeId{1}, LinkStatus::Symmetric}, {NodeId{2}, LinkStatus::Mpr}},
                     Energy::joules(50)};
  auto bytes = encode(m);
  for (std::size_t n = 0; n < bytes.size(); ++n) {
    CHECK_FALSE(decode(std::span(bytes.data(), n)).has_value());
  }
  bytes.push_back(0);
  CHECK_FALSE(decode(bytes).has_value());

  auto bad_kind = encode(m);
  bad_kind[0] = 7;
  CHECK_FALSE(decode(bad_kind).has_value());
}
