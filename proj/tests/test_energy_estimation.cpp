#include "doctest.h"
#include "olsrsim/energy_estimation.hpp"

using namespace olsrsim;

namespace {

NodeId id(int i) { return NodeId{static_cast<std::uint32_t>(i)}; }

EnergyReport report(int subject, double joules, double at) {
  return {id(subject), joules, seconds(at), seconds(at)};
}

}  // namespace

TEST_CASE("rate needs two reports with distinct timestamps") {
  PerceivedEnergyRepo r(id(0));
  CHECK(r.record_report(report(1, 100, 0)));
  CHECK_FALSE(r.rate(id(1)).has_value());
  CHECK_FALSE(r.record_report(report(1, 90, 0)));
  CHECK_FALSE(r.record_report(report(1, 90, -1)));
  CHECK(r.record_report(report(1, 90, 5)));
  CHECK(r.rate(id(1)) == doctest::Approx(2.0));
  CHECK(r.latest(id(1))->energy == 90);
}

TEST_CASE("rate uses the two newest reports and never goes negative") {
  PerceivedEnergyRepo r(id(0));
  r.record_report(report(1, 100, 0));
  r.record_report(report(1, 90, 5));
  r.record_report(report(1, 80, 7));
  CHECK(r.rate(id(1)) == doctest::Approx(5.0));
  r.record_report(report(1, 85, 8));
  CHECK(r.rate(id(1)) == 0.0);
  for (int i = 0; i < 10; ++i) r.record_report(report(1, 80 - i, 10 + i));
  CHECK(r.history(id(1)).size() == PerceivedEnergyRepo::kHistoryDepth);
}

TEST_CASE("mark_unreachable forgets history and rate") {
  PerceivedEnergyRepo r(id(0));
  r.record_report(report(1, 100, 0));
  r.record_report(report(1, 90, 5));
  const auto v = r.version();
  r.mark_unreachable(id(1));
  CHECK(r.version() == v + 1);
  CHECK_FALSE(r.knows(id(1)));
  CHECK_FALSE(r.rate(id(1)).has_value());
  r.record_report(report(1, 80, 10));
  CHECK_FALSE(r.rate(id(1)).has_value());
}

TEST_CASE("perceive: each mode on the same history") {
  PerceivedEnergyRepo r(id(0));
  r.record_report(report(1, 100, 0));
  r.record_report(report(1, 90, 10));
  const SimTime now = seconds(15);

  auto ideal = perceive(r, id(1), now, EstimationMode::Ideal, 84.0, std::nullopt);
  CHECK(ideal->joules == 84.0);
  CHECK_FALSE(ideal->adjusted);

  auto realistic = perceive(r, id(1), now, EstimationMode::Realistic, 84.0, std::nullopt);
  CHECK(realistic->joules == 90.0);
  CHECK_FALSE(realistic->adjusted);

  auto pred = perceive(r, id(1), now, EstimationMode::Prediction, 84.0, std::nullopt);
  CHECK(pred->joules == doctest::Approx(85.0));
  CHECK(pred->adjusted);

  auto smart = perceive(r, id(1), now, EstimationMode::SmartPrediction, 84.0, std::nullopt);
  CHECK(smart->joules == doctest::Approx(85.0));

  CHECK_FALSE(perceive(r, id(2), now, EstimationMode::Realistic, 1.0, std::nullopt).has_value());
}

TEST_CASE("prediction clamps at zero") {
  PerceivedEnergyRepo r(id(0));
  r.record_report(report(1, 10, 0));
  r.record_report(report(1, 5, 1));
  auto p = perceive(r, id(1), seconds(100), EstimationMode::Prediction, std::nullopt, std::nullopt);
  CHECK(p->joules == 0.0);
}

TEST_CASE("smart prediction falls back to the mean of other rates, then the own rate") {
  PerceivedEnergyRepo r(id(0));
  r.record_report(report(1, 50, 0));
  const SimTime now = seconds(4);

  auto none = perceive(r, id(1), now, EstimationMode::SmartPrediction, std::nullopt, std::nullopt);
  CHECK(none->joules == 50.0);
  CHECK_FALSE(none->adjusted);

  auto own = perceive(r, id(1), now, EstimationMode::SmartPrediction, std::nullopt, 0.5);
  CHECK(own->joules == doctest::Approx(48.0));
  CHECK(own->adjusted);

  r.record_report(report(2, 100, 0));
  r.record_report(report(2, 98, 1));
  r.record_report(report(3, 100, 0));
  r.record_report(report(3, 96, 1));
  CHECK(r.mean_rate_excluding(id(1)) == doctest::Approx(3.0));
  CHECK(r.mean_rate_excluding(id(2)) == doctest::Approx(4.0));
  auto mean = perceive(r, id(1), now, EstimationMode::SmartPrediction, std::nullopt, 0.5);
  CHECK(mean->joules == doctest::Approx(38.0));

  // Plain prediction never borrows.
  auto pred = perceive(r, id(1), now, EstimationMode::Prediction, std::nullopt, 0.5);
  CHECK(pred->joules == 50.0);
  CHECK_FALSE(pred->adjusted);
}

TEST_CASE("own rate comes from the two newest own readings") {
  PerceivedEnergyRepo r(id(0));
  CHECK_FALSE(r.own_rate().has_value());
  r.record_own(seconds(0), Energy::joules(10));
  r.record_own(seconds(0), Energy::joules(9));
  CHECK_FALSE(r.own_rate().has_value());
  r.record_own(seconds(2), Energy::joules(9));
  r.record_own(seconds(4), Energy::joules(8));
  CHECK(r.own_rate() == doctest::Approx(0.5));
}

TEST_CASE("constant drain with lossless reports makes prediction exact") {
  const double initial = 100.0;
  const double drain = 0.37;
  PerceivedEnergyRepo r(id(0));
  for (int k = 0; k < 20; ++k) {
    const double t = 2.0 * k;
    r.record_report(report(1, initial - drain * t, t));
    for (double dt : {0.0, 0.5, 1.3, 1.999}) {
      const double now = t + dt;
      const double truth = initial - drain * now;
      auto p = perceive(r, id(1), seconds(now), EstimationMode::Prediction, truth, std::nullopt);
      if (k >= 1) CHECK(p->joules == doctest::Approx(truth).epsilon(1e-12));
    }
  }
}

TEST_CASE("inaccuracy snapshot covers alive known pairs only") {
  std::vector<PerceivedEnergyRepo> repos{PerceivedEnergyRepo(id(0)), PerceivedEnergyRepo(id(1)),
                                         PerceivedEnergyRepo(id(2))};
  repos[0].record_report(report(1, 80, 0));
  repos[0].record_report(report(2, 70, 0));
  repos[1].record_report(report(0, 90, 0));
  repos[2].record_report(report(0, 90, 0));
  std::vector<const PerceivedEnergyRepo*> ptrs{&repos[0], &repos[1], &repos[2]};
  std::vector<Energy> actual{Energy::joules(85), Energy::joules(75), Energy::joules(0)};
  std::vector<std::uint8_t> alive{1, 1, 0};

  auto real = inaccuracy_snapshot(ptrs, actual, alive, seconds(1), EstimationMode::Realistic,
                                  Energy::joules(100));
  REQUIRE(real.size() == 2);
  CHECK(real[0].observer == id(0));
  CHECK(real[0].subject == id(1));
  CHECK(real[0].error == doctest::Approx(0.05));
  CHECK(real[1].observer == id(1));
  CHECK(real[1].error == doctest::Approx(0.05));
  CHECK(mean_error(real) == doctest::Approx(0.05));

  auto ideal = inaccuracy_snapshot(ptrs, actual, alive, seconds(1), EstimationMode::Ideal,
                                   Energy::joules(100));
  REQUIRE(ideal.size() == 2);
  for (const auto& s : ideal) CHECK(s.error == 0.0);
  CHECK(mean_error({}) == 0.0);
}
