#pragma once

#include <map>
#include <string>

namespace corridor::vehicle {

enum class Kind { Fcev, Bev, DieselRef };

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& name);

// Parametric energy model for one powertrain class. capacity is kg H2 for
// FCEV, nameplate kWh for BEV, gallons for the diesel reference.
struct VehicleClass {
  std::string class_id;
  Kind kind = Kind::Fcev;
  double capacity = 0.0;
  std::string capacity_unit;         // "kg", "kWh", "gal"
  double usable_fraction = 1.0;      // u in (0, 1]
  double reserve_fraction = 0.0;     // r in [0, 1)
  double consumption_per_mile = 0.0; // units/mile, > 0
  double replenish_rate_per_min = 0.0;  // units/min, > 0
  double weight_sensitivity = 0.0;   // units/mile per 1000 lb
  double reference_weight_lb = 0.0;

  double effective_full() const { return usable_fraction * capacity; }
  double floor_units() const { return reserve_fraction * capacity; }
  double window() const { return effective_full() - floor_units(); }
};

// Throws NonPositiveInputs when the class has no positive driving window or
// out-of-range fractions.
void validate_class(const VehicleClass& vc);

double consumption_rate(const VehicleClass& vc, double gross_weight_lb,
                        double segment_multiplier);

double range_to_floor(const VehicleClass& vc, double onboard, double rate_per_mile);

double replenish_time(const VehicleClass& vc, double amount);

// Frozen after configuration load; lookups are read-only thereafter.
class Registry {
 public:
  void add(VehicleClass vc);
  const VehicleClass& get(const std::string& class_id) const;
  bool contains(const std::string& class_id) const;
  const std::map<std::string, VehicleClass>& all() const { return classes_; }

 private:
  std::map<std::string, VehicleClass> classes_;
};

}  // namespace corridor::vehicle
