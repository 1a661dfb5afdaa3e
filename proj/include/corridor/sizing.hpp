#pragma once

#include <map>
#include <string>
#include <vector>

#include "corridor/sim.hpp"

namespace corridor::sizing {

enum class EquipmentKind { H2Dispenser, EvCharger };

std::string equipment_kind_name(EquipmentKind k);
EquipmentKind equipment_kind_from_name(const std::string& name);

struct EquipmentClass {
  std::string name;
  EquipmentKind kind = EquipmentKind::H2Dispenser;
  double rate = 0.0;  // kg/min for dispensers, kW for chargers

  // Units dispensed per minute of busy time.
  double units_per_min() const {
    return kind == EquipmentKind::H2Dispenser ? rate : rate / 60.0;
  }
};

// 0 when nothing is dispensed; otherwise at least 1 and enough units to keep
// busy-time at or below the utilization target over the horizon.
int dispenser_count(double site_dispensed, const EquipmentClass& eq, double utilization_target,
                    double horizon_min);

struct SiteSizing {
  std::string site_id;
  double busy_minutes = 0.0;
  double horizon_minutes = 0.0;
  double utilization_target = 0.0;
  int required_count = 0;
  int busiest_day_count = 0;
};

struct SizingReport {
  EquipmentClass equipment;
  std::vector<SiteSizing> sites;  // site_id order
};

SizingReport size_network(const sim::FleetLedger& ledger, const EquipmentClass& eq,
                          double utilization_target, double horizon_min);

struct ChargeEventStat {
  std::string site_id;
  double event_time_min = 0.0;
  double power_kw = 0.0;
  double nameplate_kwh = 0.0;
  double c_rate = 0.0;
  bool flagged = false;  // c_rate > 1.5
};

struct ChargeStats {
  std::vector<ChargeEventStat> events;             // site_id then time order
  std::map<std::string, double> peak_concurrent_kw;  // per site
};

ChargeStats charge_stats(const sim::FleetLedger& ledger, const vehicle::Registry& classes);

}  // namespace corridor::sizing
