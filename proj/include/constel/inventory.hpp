#pragma once

#include <cstdint>
#include <vector>

#include "constel/errors.hpp"
#include "constel/orbital.hpp"

namespace constel::inventory {

struct ConstellationConfig {
  int n_plane = 1;                    // operational planes
  int n_sat = 1;                      // satellites per plane
  orbital::OrbitGeometry plane_orbit; // h_plane, inclination
  double sat_failure_rate = 0.0;      // failures per satellite-year
  double n_t = 52.0;                  // model time units (weeks) per year
  double lifespan_years = 0.0;        // design lifespan t_life

  friend bool operator==(const ConstellationConfig&, const ConstellationConfig&) = default;
};

struct ReplenishmentPolicy {
  int s = 1;                            // in-plane reorder point, satellites
  int q = 1;                            // in-plane order quantity, satellites
  int k_s = 1;                          // parking reorder point, batches
  int k_q = 1;                          // parking order quantity, batches
  int n_oos = 0;                        // max services per satellite
  int n_parking = 1;                    // parking orbit count
  orbital::OrbitGeometry parking_orbit; // h_parking, same inclination as the plane

  friend bool operator==(const ReplenishmentPolicy&, const ReplenishmentPolicy&) = default;
};

struct OOSTerms {
  double r_oos = 0.0;  // serviceable fraction of failures, [0, 1]
  double mu_oos = 0.0; // service responsiveness, 1/weeks
  double p_oos = 0.0;  // price per service, $M

  friend bool operator==(const OOSTerms&, const OOSTerms&) = default;
};

struct LaunchService {
  double t_lau = 0.0;   // fixed processing time, weeks
  double psi_lau = 0.0; // stochastic-delay rate, 1/weeks
  double cost = 0.0;    // $M per launch
  int capacity = 1;     // satellites per launch (Q_max)

  friend bool operator==(const LaunchService&, const LaunchService&) = default;
};

// Steady-state split of the in-plane spare inflow by provenance. gamma[m] is
// the fraction of inflow serviced m times; s_wait[m-1] the mean count of
// failed satellites awaiting their m-th service, per plane.
struct GammaProfile {
  std::vector<double> gamma;
  std::vector<double> s_wait;
  double s_wait_total = 0.0;
};

struct EchelonMetrics {
  double mean_stock = 0.0;        // satellites in-plane, batches at parking
  double order_frequency = 0.0;   // replenishment orders per year
  double expected_shortage = 0.0; // units short per replenishment cycle
  double fill_rate = 1.0;         // 1 - shortage / batch, exactly
};

// Piecewise-constant lead-time law: mass weight[j] spread uniformly over
// [start + j*width, start + (j+1)*width), j = 0..pieces-1.
struct PiecewiseLeadTime {
  double start = 0.0; // t_trans, weeks
  double width = 0.0; // one alignment window, weeks
  std::vector<double> weight;

  int pieces() const { return static_cast<int>(weight.size()); }
  double density(int j) const { return weight[static_cast<std::size_t>(j)] / width; }
  double mean() const;
};

struct InplaneResult {
  EchelonMetrics metrics;
  double service_frequency = 0.0; // OOS calls per plane per year
};

struct EvaluationResult {
  ConstellationConfig cfg;
  ReplenishmentPolicy policy;
  OOSTerms oos;
  LaunchService launch;

  double lambda_plane = 0.0;   // failures per week per plane
  double lambda_parking = 0.0; // batch demand per week per parking orbit
  GammaProfile gamma;

  double omega_rel_rad_s = 0.0;
  double synodic_period_weeks = 0.0;
  double delta_v_km_s = 0.0;
  double fuel_kg = 0.0;
  double t_trans_weeks = 0.0;

  PiecewiseLeadTime lead_plane;
  double mean_lead_plane_weeks = 0.0;
  double mean_lead_parking_weeks = 0.0;

  EchelonMetrics plane;
  EchelonMetrics parking;
  double f_oos = 0.0; // services per plane per year

  // The mean-stock integrand went negative; such points sit far outside the
  // fill-rate-feasible region.
  bool negative_mean_stock = false;
};

// lambda_plane = lambda_sat * N_sat / N_t, failures per time unit per plane.
double plane_failure_rate(const ConstellationConfig& cfg);

// Flow-balance fractions for at most n_oos services per satellite with
// serviceable fraction r_oos. mu_oos may be zero only if no service flow
// exists (r_oos = 0 or n_oos = 0).
GammaProfile solve_gamma(double r_oos, int n_oos, double lambda_plane, double mu_oos);

// P(net stock drop = delta) after lead time tau: demand ~ Poisson(lambda*tau)
// minus recoveries ~ Poisson(lambda*tau*(1-gamma0)). Full integer support;
// gamma0 = 1 degenerates to the Poisson law of the demand alone.
double skellam_pmf(long long delta, double tau, double lambda_plane, double gamma0);

// E[(X - s)+] for X ~ Poisson(mean), exact.
double poisson_expected_shortage(double mean, int s);

// E[(net drop - s)+] at demand mean lambda_tau. Exact for variance
// lambda_tau*(2-gamma0) up to 400, normal beyond; the cutover sits far
// outside any fill-rate-feasible point.
double skellam_expected_shortage(double lambda_tau, double gamma0, int s);

// In-plane lead-time law from the alignment geometry: the j-th window is
// reached with the geometric availability weight (1-beta_parking)^(j-1) *
// beta_parking, normalized over the n_parking orbits.
PiecewiseLeadTime inplane_leadtime_pdf(const ReplenishmentPolicy& policy,
                                       double omega_rel_rad_s, double t_trans_weeks,
                                       double beta_parking);

InplaneResult inplane_metrics(const ConstellationConfig& cfg, const ReplenishmentPolicy& policy,
                              const OOSTerms& oos, const GammaProfile& gamma,
                              const PiecewiseLeadTime& lead);

// lambda_parking = lambda_plane * gamma0 * N_plane / (Q * N_parking), batches
// per time unit per parking orbit.
double parking_demand_rate(const ConstellationConfig& cfg, const ReplenishmentPolicy& policy,
                           double gamma0);

EchelonMetrics parking_metrics(const LaunchService& launch, const ReplenishmentPolicy& policy,
                               double lambda_parking, double n_t);

// Full steady-state evaluation. The parking echelon is computed first (its
// demand needs only gamma0 and Q), then the in-plane lead-time law from the
// resulting beta_parking, then the in-plane echelon; the dependency is
// acyclic in that order.
EvaluationResult evaluate_steady_state(const ConstellationConfig& cfg,
                                       const ReplenishmentPolicy& policy,
                                       const OOSTerms& oos, const LaunchService& launch,
                                       const orbital::PropulsionSpec& prop,
                                       const orbital::PhysicalConstants& constants = orbital::kEarth);

}  // namespace constel::inventory
