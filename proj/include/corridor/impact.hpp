#pragma once

#include <string>
#include <vector>

namespace corridor::impact {

// Well-to-wheel CO2 intensity of one energy production pathway, in grams per
// dispensed unit (kWh, kg H2, or gallon).
struct EnergyPathway {
  std::string name;
  double carbon_intensity = 0.0;  // g CO2 / unit, >= 0
  std::string intensity_unit;     // "g/kWh", "g/kg", "g/gal"
};

double co2_annual_tonnes(double vmt_per_year, double consumption_per_mile,
                         const EnergyPathway& pathway);

struct PathwayImpact {
  EnergyPathway pathway;
  double vmt_per_year = 0.0;
  double consumption_per_mile = 0.0;
  double energy_dispensed = 0.0;       // units/yr
  double co2_tonnes_per_year = 0.0;
};

struct ImpactReport {
  std::vector<PathwayImpact> rows;
};

ImpactReport build_report(double vmt_per_year,
                          const std::vector<std::pair<EnergyPathway, double>>& pathway_consumption);

// Pathways sorted by descending annual CO2 (equivalently by
// consumption x intensity at a shared VMT basis).
std::vector<std::string> pathway_ranking(const ImpactReport& report);

// Miles of range gained per minute at the pump/charger.
double refuel_rate(double replenish_per_min, double economy_mi_per_unit);

struct RefuelRateRow {
  std::string powertrain;
  double replenish_per_min = 0.0;
  std::string unit;
  double economy_mi_per_unit = 0.0;
  double miles_per_min = 0.0;
};

}  // namespace corridor::impact
