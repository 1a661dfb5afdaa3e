#include <doctest.h>

#include "corridor/errors.hpp"
#include "corridor/sizing.hpp"
#include "support/helpers.hpp"

using namespace corridor;
using namespace corridor::sizing;

namespace {

const EquipmentClass kDisp10{"disp10", EquipmentKind::H2Dispenser, 10.0};
const EquipmentClass kDisp18{"disp1.8", EquipmentKind::H2Dispenser, 1.8};

sim::FleetLedger ledger_with(const std::string& site, std::vector<sim::LedgerEvent> events) {
  sim::FleetLedger ledger;
  sim::SiteLedger sl;
  for (const auto& ev : events) sl.total += ev.dispensed;
  sl.events = std::move(events);
  ledger.in_route.emplace(site, std::move(sl));
  return ledger;
}

}  // namespace

TEST_CASE("dispenser_count worked examples") {
  CHECK(dispenser_count(1440.0, kDisp10, 0.5, 1440.0) == 1);
  CHECK(dispenser_count(1440.0, kDisp18, 0.5, 1440.0) == 2);
  CHECK(dispenser_count(0.0, kDisp10, 0.5, 1440.0) == 0);
  CHECK(dispenser_count(0.001, kDisp10, 0.5, 1440.0) == 1);  // any demand needs 1
  CHECK_THROWS_AS(dispenser_count(10.0, kDisp10, 0.5, 0.0), Error);
  CHECK_THROWS_AS(dispenser_count(10.0, kDisp10, 0.0, 1440.0), Error);
}

TEST_CASE("charger busy time uses kWh per minute") {
  EquipmentClass charger{"chg150", EquipmentKind::EvCharger, 150.0};
  // 150 kW -> 2.5 kWh/min; 600 kWh -> 240 busy minutes
  CHECK(dispenser_count(600.0, charger, 1.0, 240.0) == 1);
  CHECK(dispenser_count(600.0, charger, 0.5, 240.0) == 2);
}

TEST_CASE("dispenser_count monotone properties") {
  Rng rng(13);
  for (int it = 0; it < 200; ++it) {
    const double mass = rng.uniform(1.0, 5000.0);
    const double u = rng.uniform(0.1, 1.0);
    const double horizon = rng.uniform(600.0, 20000.0);
    const int base = dispenser_count(mass, kDisp10, u, horizon);
    // doubling demand never decreases the count and at most doubles-plus-one
    const int doubled = dispenser_count(2 * mass, kDisp10, u, horizon);
    CHECK(doubled >= base);
    CHECK(doubled <= 2 * base + 1);
    // higher utilization target never needs more units
    CHECK(dispenser_count(mass, kDisp10, std::min(1.0, u + 0.2), horizon) <= base);
  }
}

TEST_CASE("size_network busiest day") {
  SUBCASE("uniform schedule matches the average day") {
    std::vector<sim::LedgerEvent> events;
    for (int d = 0; d < 7; ++d) {
      events.push_back({"t", "fcev70", d * 1440.0 + 600.0, 720.0, 72.0});
    }
    auto report = size_network(ledger_with("s1", events), kDisp10, 0.5, 7 * 1440.0);
    REQUIRE(report.sites.size() == 1);
    CHECK(report.sites[0].required_count == 1);
    CHECK(report.sites[0].busiest_day_count == 1);
  }
  SUBCASE("demand packed into one day") {
    std::vector<sim::LedgerEvent> events;
    for (int i = 0; i < 4; ++i) {
      events.push_back({"t", "fcev70", 2000.0 + 30.0 * i, 1800.0, 180.0});
    }
    auto report = size_network(ledger_with("s1", events), kDisp10, 0.5, 7 * 1440.0);
    // average over the week: 7200/10 = 720 busy min / (0.5 * 10080) -> 1
    CHECK(report.sites[0].required_count == 1);
    // worst day holds all 7200 kg: 720 busy / (0.5 * 1440) = 1 exactly -> 1;
    // dominance checked via dispenser_count over the day window
    CHECK(report.sites[0].busiest_day_count ==
          dispenser_count(7200.0, kDisp10, 0.5, 1440.0));
    CHECK(report.sites[0].busiest_day_count >= report.sites[0].required_count);
  }
  SUBCASE("empty ledger yields an empty report") {
    sim::FleetLedger empty;
    CHECK(size_network(empty, kDisp10, 0.5, 1440.0).sites.empty());
  }
}

TEST_CASE("busiest day dominates the horizon average") {
  Rng rng(17);
  for (int it = 0; it < 50; ++it) {
    std::vector<sim::LedgerEvent> events;
    const int n = 1 + static_cast<int>(rng.below(30));
    for (int i = 0; i < n; ++i) {
      events.push_back({"t", "fcev70", rng.uniform(0.0, 7 * 1440.0), rng.uniform(1.0, 90.0), 5.0});
    }
    auto report = size_network(ledger_with("s1", events), kDisp10, 0.4, 7 * 1440.0);
    CHECK(report.sites[0].busiest_day_count >= report.sites[0].required_count);
  }
}

TEST_CASE("charge_stats C-rate flags") {
  vehicle::Registry reg;
  reg.add(testsupport::bev(438.0, 1250.0, "bev438_1250"));
  reg.add(testsupport::bev(1000.0, 1250.0, "bev1000_1250"));
  reg.add(testsupport::bev(733.0, 150.0, "bev733_150"));

  SUBCASE("flag boundary") {
    auto ledger = ledger_with("s1", {{"a", "bev438_1250", 100.0, 300.0, 14.4},
                                     {"b", "bev1000_1250", 300.0, 300.0, 14.4}});
    auto stats = charge_stats(ledger, reg);
    REQUIRE(stats.events.size() == 2);
    CHECK(stats.events[0].c_rate == doctest::Approx(1250.0 / 438.0));
    CHECK(stats.events[0].flagged);
    CHECK(stats.events[1].c_rate == doctest::Approx(1.25));
    CHECK_FALSE(stats.events[1].flagged);
  }
  SUBCASE("non-overlapping events do not stack") {
    auto ledger = ledger_with("s1", {{"a", "bev733_150", 0.0, 10.0, 30.0},
                                     {"b", "bev733_150", 100.0, 10.0, 30.0}});
    auto stats = charge_stats(ledger, reg);
    CHECK(stats.peak_concurrent_kw.at("s1") == doctest::Approx(150.0));
  }
  SUBCASE("overlapping events add power") {
    auto ledger = ledger_with("s1", {{"a", "bev733_150", 0.0, 10.0, 30.0},
                                     {"b", "bev438_1250", 10.0, 10.0, 5.0}});
    auto stats = charge_stats(ledger, reg);
    CHECK(stats.peak_concurrent_kw.at("s1") == doctest::Approx(1400.0));
  }
  SUBCASE("touching endpoints are not concurrent") {
    auto ledger = ledger_with("s1", {{"a", "bev733_150", 0.0, 10.0, 30.0},
                                     {"b", "bev733_150", 30.0, 10.0, 30.0}});
    auto stats = charge_stats(ledger, reg);
    CHECK(stats.peak_concurrent_kw.at("s1") == doctest::Approx(150.0));
  }
}
