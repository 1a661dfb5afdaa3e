#include "corridor/impact.hpp"

#include <algorithm>

#include "corridor/errors.hpp"

namespace corridor::impact {

double co2_annual_tonnes(double vmt_per_year, double consumption_per_mile,
                         const EnergyPathway& pathway) {
  if (vmt_per_year < 0.0 || consumption_per_mile < 0.0 || pathway.carbon_intensity < 0.0) {
    throw Error(ErrorCode::NonPositiveInputs, "co2_annual inputs must be non-negative");
  }
  return vmt_per_year * consumption_per_mile * pathway.carbon_intensity / 1e6;
}

ImpactReport build_report(
    double vmt_per_year,
    const std::vector<std::pair<EnergyPathway, double>>& pathway_consumption) {
  ImpactReport report;
  for (const auto& [pathway, consumption] : pathway_consumption) {
    PathwayImpact row;
    row.pathway = pathway;
    row.vmt_per_year = vmt_per_year;
    row.consumption_per_mile = consumption;
    row.energy_dispensed = vmt_per_year * consumption;
    row.co2_tonnes_per_year = co2_annual_tonnes(vmt_per_year, consumption, pathway);
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<std::string> pathway_ranking(const ImpactReport& report) {
  std::vector<const PathwayImpact*> rows;
  for (const auto& r : report.rows) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
    const double pa = a->consumption_per_mile * a->pathway.carbon_intensity;
    const double pb = b->consumption_per_mile * b->pathway.carbon_intensity;
    return pa > pb;
  });
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto* r : rows) out.push_back(r->pathway.name);
  return out;
}

double refuel_rate(double replenish_per_min, double economy_mi_per_unit) {
  if (!(replenish_per_min > 0.0) || !(economy_mi_per_unit > 0.0)) {
    throw Error(ErrorCode::NonPositiveInputs, "refuel_rate inputs must be > 0");
  }
  return replenish_per_min * economy_mi_per_unit;
}

}  // namespace corridor::impact
