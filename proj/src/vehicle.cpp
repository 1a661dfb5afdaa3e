#include "corridor/vehicle.hpp"

#include <algorithm>

#include "corridor/errors.hpp"

namespace corridor::vehicle {

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::Fcev: return "FCEV";
    case Kind::Bev: return "BEV";
    case Kind::DieselRef: return "DIESEL_REF";
  }
  return "?";
}

Kind kind_from_name(const std::string& name) {
  if (name == "FCEV") return Kind::Fcev;
  if (name == "BEV") return Kind::Bev;
  if (name == "DIESEL_REF") return Kind::DieselRef;
  throw Error(ErrorCode::ParseError, "unknown vehicle kind '" + name + "'");
}

void validate_class(const VehicleClass& vc) {
  const std::string id = "class '" + vc.class_id + "'";
  if (!(vc.capacity > 0.0)) throw Error(ErrorCode::NonPositiveInputs, id + ": capacity must be > 0");
  if (!(vc.usable_fraction > 0.0) || vc.usable_fraction > 1.0)
    throw Error(ErrorCode::NonPositiveInputs, id + ": usable_fraction must be in (0,1]");
  if (vc.reserve_fraction < 0.0 || vc.reserve_fraction >= 1.0)
    throw Error(ErrorCode::NonPositiveInputs, id + ": reserve_fraction must be in [0,1)");
  if (!(vc.usable_fraction > vc.reserve_fraction))
    throw Error(ErrorCode::NonPositiveInputs, id + ": no driving window (usable <= reserve)");
  if (!(vc.consumption_per_mile > 0.0))
    throw Error(ErrorCode::NonPositiveInputs, id + ": consumption_per_mile must be > 0");
  if (!(vc.replenish_rate_per_min > 0.0))
    throw Error(ErrorCode::NonPositiveInputs, id + ": replenish_rate_per_min must be > 0");
}

double consumption_rate(const VehicleClass& vc, double gross_weight_lb,
                        double segment_multiplier) {
  if (!(gross_weight_lb > 0.0) || !(segment_multiplier > 0.0)) {
    throw Error(ErrorCode::NonPositiveInputs, "consumption_rate: weight and multiplier must be > 0");
  }
  const double c = vc.consumption_per_mile +
                   vc.weight_sensitivity * (gross_weight_lb - vc.reference_weight_lb) / 1000.0;
  return std::max(c * segment_multiplier, 0.1 * vc.consumption_per_mile);
}

double range_to_floor(const VehicleClass& vc, double onboard, double rate_per_mile) {
  if (!(rate_per_mile > 0.0)) {
    throw Error(ErrorCode::NonPositiveInputs, "range_to_floor: rate must be > 0");
  }
  return std::max(0.0, (onboard - vc.floor_units()) / rate_per_mile);
}

double replenish_time(const VehicleClass& vc, double amount) {
  if (amount < 0.0 || amount > vc.effective_full() + 1e-9) {
    throw Error(ErrorCode::AmountExceedsCapacity,
                "replenish amount outside [0, effective_full] for class '" + vc.class_id + "'");
  }
  return amount / vc.replenish_rate_per_min;
}

void Registry::add(VehicleClass vc) {
  validate_class(vc);
  classes_[vc.class_id] = std::move(vc);
}

const VehicleClass& Registry::get(const std::string& class_id) const {
  auto it = classes_.find(class_id);
  if (it == classes_.end()) {
    throw Error(ErrorCode::UnknownVehicleClass, "no vehicle class '" + class_id + "'");
  }
  return it->second;
}

bool Registry::contains(const std::string& class_id) const {
  return classes_.count(class_id) > 0;
}

}  // namespace corridor::vehicle
