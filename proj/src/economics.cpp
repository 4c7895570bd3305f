#include "constel/economics.hpp"

#include <cmath>
#include <stdexcept>

namespace constel::economics {

namespace {

void check_costs(const CostParams& costs) {
  if (costs.c_lau < 0.0 || costs.c_manufac < 0.0 || costs.c_hold < 0.0 ||
      costs.eps_fuel < 0.0 || costs.p_oos < 0.0 || costs.q_max < 0) {
    throw std::invalid_argument("cost parameters must be nonnegative");
  }
}

// Relative overshoot of `value` above `limit`, scaled by the limit.
double overshoot(double value, double limit) {
  const double scale = std::max(std::abs(limit), 1e-12);
  return std::max(0.0, (value - limit) / scale);
}

// Relative shortfall of `value` below `floor`, scaled by the floor.
double shortfall(double value, double floor) {
  const double scale = std::max(std::abs(floor), 1e-12);
  return std::max(0.0, (floor - value) / scale);
}

}  // namespace

CostBreakdown annual_maintenance_cost(const inventory::EvaluationResult& eval,
                                      const CostParams& costs, double fuel_mass_kg) {
  check_costs(costs);
  if (fuel_mass_kg < 0.0) throw std::invalid_argument("fuel mass must be nonnegative");

  const auto& cfg = eval.cfg;
  const auto& policy = eval.policy;
  const double gamma0 = eval.gamma.gamma.empty() ? 1.0 : eval.gamma.gamma.front();

  CostBreakdown out;
  out.a_lau = costs.c_lau * eval.parking.order_frequency * policy.n_parking;
  out.a_maneuv = fuel_mass_kg * costs.eps_fuel * eval.plane.order_frequency *
                 cfg.n_plane * policy.q;
  out.a_manufac = costs.c_manufac * eval.lambda_plane * gamma0 * cfg.n_plane * cfg.n_t;
  out.a_hold = costs.c_hold * (eval.parking.mean_stock * policy.q * policy.n_parking +
                               eval.plane.mean_stock * cfg.n_plane +
                               eval.gamma.s_wait_total * cfg.n_plane);
  out.a_oos = costs.p_oos * eval.f_oos * cfg.n_plane;
  out.amc = out.a_lau + out.a_maneuv + out.a_manufac + out.a_hold + out.a_oos;
  return out;
}

DisposalTimeBreakdown mean_time_to_disposal(const inventory::EvaluationResult& eval,
                                            const inventory::ConstellationConfig& cfg,
                                            const inventory::ReplenishmentPolicy& policy,
                                            const inventory::OOSTerms& oos) {
  if (eval.lambda_parking <= 0.0) {
    throw DivisionByZeroError("parking demand rate is zero; time in parking is undefined");
  }
  if (eval.lambda_plane <= 0.0) {
    throw DivisionByZeroError("plane failure rate is zero; time as a spare is undefined");
  }
  if (cfg.sat_failure_rate <= 0.0) {
    throw DivisionByZeroError("satellite failure rate is zero; operating time is undefined");
  }
  if (policy.n_oos > 0 && !(oos.mu_oos > 0.0)) {
    throw DivisionByZeroError("service responsiveness is zero; service time is undefined");
  }

  const double lives = policy.n_oos + 1;

  DisposalTimeBreakdown out;
  out.t_parking = eval.parking.mean_stock / eval.lambda_parking;
  out.t_trans = eval.lead_plane.mean();
  out.t_plane = eval.plane.mean_stock * lives / eval.lambda_plane;
  out.t_opr = lives * cfg.n_t / cfg.sat_failure_rate;
  out.t_oos = policy.n_oos > 0 ? policy.n_oos / oos.mu_oos : 0.0;
  out.t_d = out.t_parking + out.t_trans + out.t_plane + out.t_opr + out.t_oos;
  out.t_d_years = out.t_d / cfg.n_t;
  return out;
}

double oos_service_cost(double mttr, const CostResponsivenessParams& params) {
  if (!(params.c_min > 0.0) || !(params.mu_ideal > 0.0) || !(params.alpha1 > 0.0) ||
      !(params.alpha2 > 0.0)) {
    throw std::invalid_argument("cost-responsiveness parameters must be positive");
  }
  const double slack = mttr - 1.0 / params.mu_ideal;
  if (!(slack > 0.0)) {
    throw DomainError("mean time to repair must exceed the ideal response time 1/mu_ideal");
  }
  return params.c_min + params.alpha1 / std::pow(slack, params.alpha2);
}

double oos_annual_profit(const inventory::EvaluationResult& eval, double p_oos,
                         double service_cost) {
  return (p_oos - service_cost) * eval.f_oos * eval.cfg.n_plane;
}

FeasibilityReport feasibility_check(const inventory::EvaluationResult& eval,
                                    const inventory::ConstellationConfig& cfg,
                                    const inventory::ReplenishmentPolicy& policy,
                                    const CostParams& costs, const Requirements& requirements) {
  FeasibilityReport report;
  const auto add = [&](std::string name, double violation) {
    ConstraintCheck check;
    check.name = std::move(name);
    check.violation = violation;
    check.pass = violation == 0.0;
    report.feasible = report.feasible && check.pass;
    report.total_violation += violation;
    report.checks.push_back(std::move(check));
  };

  add("beta_plane", shortfall(eval.plane.fill_rate, requirements.beta_plane_req));
  add("beta_parking", shortfall(eval.parking.fill_rate, requirements.beta_parking_req));

  const auto disposal = mean_time_to_disposal(eval, cfg, policy, eval.oos);
  add("lifetime", overshoot(disposal.t_d_years, cfg.lifespan_years));

  add("s_le_q", overshoot(policy.s, policy.q));
  add("ks_le_kq", overshoot(policy.k_s, policy.k_q));
  if (costs.q_max > 0) {
    add("launch_capacity", overshoot(static_cast<double>(policy.q) * policy.k_q,
                                     costs.q_max));
  }
  if (!std::isnan(requirements.c_oos)) {
    add("price_covers_cost", overshoot(requirements.c_oos, costs.p_oos));
  }
  if (std::isfinite(requirements.amc_ref)) {
    const auto breakdown = annual_maintenance_cost(eval, costs, eval.fuel_kg);
    add("amc_budget", overshoot(breakdown.amc, requirements.amc_ref));
  }
  return report;
}

}  // namespace constel::economics
