#pragma once

#include <limits>
#include <string>
#include <vector>

#include "constel/inventory.hpp"

namespace constel::economics {

struct CostParams {
  double c_lau = 0.0;     // $M per launch
  double c_manufac = 0.0; // $M per satellite (c_sat)
  double c_hold = 0.0;    // $M per satellite per year
  double eps_fuel = 0.0;  // $M per kg raised
  double p_oos = 0.0;     // $M per service
  int q_max = 0;          // satellites per launch; 0 lifts the capacity limit

  friend bool operator==(const CostParams&, const CostParams&) = default;
};

struct CostBreakdown {
  double a_lau = 0.0;
  double a_maneuv = 0.0;
  double a_manufac = 0.0;
  double a_hold = 0.0;
  double a_oos = 0.0;
  double amc = 0.0; // always the sum of the five components
};

struct DisposalTimeBreakdown {
  double t_parking = 0.0; // time units
  double t_trans = 0.0;
  double t_plane = 0.0;
  double t_opr = 0.0;
  double t_oos = 0.0;
  double t_d = 0.0;       // always the sum of the five components
  double t_d_years = 0.0; // t_d / N_t
};

// c_oos(mttr) = c_min + alpha1 / (mttr - 1/mu_ideal)^alpha2, the price floor
// an OOS provider needs at a given responsiveness.
struct CostResponsivenessParams {
  double c_min = 0.0;    // $M, asymptotic cost of an unhurried service
  double mu_ideal = 0.0; // 1/time units, hard responsiveness limit
  double alpha1 = 1.0;
  double alpha2 = 1.0;

  friend bool operator==(const CostResponsivenessParams&, const CostResponsivenessParams&) = default;
};

struct Requirements {
  double beta_plane_req = 0.0;
  double beta_parking_req = 0.0;
  double amc_ref = std::numeric_limits<double>::infinity();
  // Service cost for the price-coverage constraint; NaN skips that check
  // (no OOS in the scenario).
  double c_oos = std::numeric_limits<double>::quiet_NaN();
};

struct ConstraintCheck {
  std::string name;
  bool pass = true;
  double violation = 0.0; // relative overshoot, 0 when satisfied
};

struct FeasibilityReport {
  std::vector<ConstraintCheck> checks;
  bool feasible = true;
  double total_violation = 0.0;
};

// Annual cost of keeping the constellation staffed: launches, orbit raising,
// replacement manufacturing, holding, and purchased services.
CostBreakdown annual_maintenance_cost(const inventory::EvaluationResult& eval,
                                      const CostParams& costs, double fuel_mass_kg);

// Mean time a satellite spends from manufacture to disposal, phase by phase.
// Throws DivisionByZeroError when a rate that a phase divides by is zero.
DisposalTimeBreakdown mean_time_to_disposal(const inventory::EvaluationResult& eval,
                                            const inventory::ConstellationConfig& cfg,
                                            const inventory::ReplenishmentPolicy& policy,
                                            const inventory::OOSTerms& oos);

double oos_service_cost(double mttr, const CostResponsivenessParams& params);

double oos_annual_profit(const inventory::EvaluationResult& eval, double p_oos,
                         double service_cost);

FeasibilityReport feasibility_check(const inventory::EvaluationResult& eval,
                                    const inventory::ConstellationConfig& cfg,
                                    const inventory::ReplenishmentPolicy& policy,
                                    const CostParams& costs, const Requirements& requirements);

}  // namespace constel::economics
