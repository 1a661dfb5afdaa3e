#include "corridor/sizing.hpp"

#include <algorithm>
#include <cmath>

#include "corridor/errors.hpp"

namespace corridor::sizing {

std::string equipment_kind_name(EquipmentKind k) {
  return k == EquipmentKind::H2Dispenser ? "h2_dispenser" : "ev_charger";
}

EquipmentKind equipment_kind_from_name(const std::string& name) {
  if (name == "h2_dispenser") return EquipmentKind::H2Dispenser;
  if (name == "ev_charger") return EquipmentKind::EvCharger;
  throw Error(ErrorCode::ParseError, "unknown equipment kind '" + name + "'");
}

int dispenser_count(double site_dispensed, const EquipmentClass& eq, double utilization_target,
                    double horizon_min) {
  if (!(horizon_min > 0.0)) {
    throw Error(ErrorCode::NonPositiveHorizon, "sizing horizon must be > 0");
  }
  if (!(utilization_target > 0.0) || utilization_target > 1.0) {
    throw Error(ErrorCode::NonPositiveInputs, "utilization target must be in (0,1]");
  }
  if (!(eq.rate > 0.0)) {
    throw Error(ErrorCode::NonPositiveInputs, "equipment rate must be > 0");
  }
  if (site_dispensed <= 0.0) return 0;
  const double busy = site_dispensed / eq.units_per_min();
  return std::max(1, static_cast<int>(std::ceil(busy / (utilization_target * horizon_min) - 1e-12)));
}

SizingReport size_network(const sim::FleetLedger& ledger, const EquipmentClass& eq,
                          double utilization_target, double horizon_min) {
  SizingReport report;
  report.equipment = eq;
  for (const auto& [site_id, site] : ledger.in_route) {
    SiteSizing s;
    s.site_id = site_id;
    s.busy_minutes = site.total / eq.units_per_min();
    s.horizon_minutes = horizon_min;
    s.utilization_target = utilization_target;
    s.required_count = dispenser_count(site.total, eq, utilization_target, horizon_min);

    // Worst 1440-min window of the event schedule, sliding in 15-min steps.
    const double day = std::min(1440.0, horizon_min);
    double worst_mass = 0.0;
    for (double w0 = 0.0; w0 <= horizon_min - day + 1e-9; w0 += 15.0) {
      double mass = 0.0;
      for (const auto& ev : site.events) {
        if (ev.time_min >= w0 && ev.time_min < w0 + day) mass += ev.dispensed;
      }
      worst_mass = std::max(worst_mass, mass);
      if (horizon_min <= day) break;
    }
    s.busiest_day_count = dispenser_count(worst_mass, eq, utilization_target, day);
    report.sites.push_back(std::move(s));
  }
  return report;
}

ChargeStats charge_stats(const sim::FleetLedger& ledger, const vehicle::Registry& classes) {
  ChargeStats stats;
  for (const auto& [site_id, site] : ledger.in_route) {
    std::vector<ChargeEventStat> events;
    std::vector<std::pair<double, double>> deltas;  // (time, +/- power)
    for (const auto& ev : site.events) {
      const vehicle::VehicleClass& vc = classes.get(ev.vehicle_class_id);
      ChargeEventStat st;
      st.site_id = site_id;
      st.event_time_min = ev.time_min;
      st.power_kw = vc.replenish_rate_per_min * 60.0;  // kWh/min -> kW
      st.nameplate_kwh = vc.capacity;
      st.c_rate = st.power_kw / st.nameplate_kwh;
      st.flagged = st.c_rate > 1.5;
      deltas.emplace_back(ev.time_min, st.power_kw);
      deltas.emplace_back(ev.time_min + ev.dwell, -st.power_kw);
      events.push_back(std::move(st));
    }
    std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
      return a.event_time_min < b.event_time_min;
    });
    // Intervals are half-open [arrival, arrival+dwell): process drops first at
    // coincident times.
    std::sort(deltas.begin(), deltas.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first < b.first : a.second < b.second;
    });
    double cur = 0.0, peak = 0.0;
    for (const auto& [t, dp] : deltas) {
      cur += dp;
      peak = std::max(peak, cur);
    }
    stats.peak_concurrent_kw[site_id] = peak;
    stats.events.insert(stats.events.end(), events.begin(), events.end());
  }
  return stats;
}

}  // namespace corridor::sizing
