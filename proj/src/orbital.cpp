#include "constel/orbital.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace constel::orbital {

namespace {

void check_geometry(const OrbitGeometry& orbit) {
  if (!(orbit.altitude_km > 0.0)) {
    throw std::invalid_argument("orbit altitude must be positive, got " +
                                std::to_string(orbit.altitude_km));
  }
  if (!(orbit.eccentricity >= 0.0) || orbit.eccentricity >= 1.0) {
    throw std::invalid_argument("eccentricity must lie in [0, 1)");
  }
}

}  // namespace

double exhaust_velocity_km_s(const PropulsionSpec& prop, const PhysicalConstants& constants) {
  return prop.isp_s * constants.g0_m_s2 / 1000.0;
}

double raan_drift_rate(const OrbitGeometry& orbit, const PhysicalConstants& constants) {
  check_geometry(orbit);
  const double a = constants.earth_radius_km + orbit.altitude_km;
  const double mean_motion = std::sqrt(constants.mu_km3_s2 / (a * a * a));
  const double p = 1.0 - orbit.eccentricity * orbit.eccentricity;
  // cos(i) written as sin(90 - i) so the polar case is exactly zero and the
  // rate is exactly odd about i = 90 deg.
  const double cos_i = std::sin((90.0 - orbit.inclination_deg) * kPi / 180.0);
  const double re_over_ap = constants.earth_radius_km / (a * p);
  return -1.5 * mean_motion * re_over_ap * re_over_ap * constants.j2 * cos_i;
}

double relative_raan_drift(const OrbitGeometry& parking, const OrbitGeometry& plane,
                           const PhysicalConstants& constants) {
  if (parking.altitude_km >= plane.altitude_km) {
    throw AltitudeOrderError("parking altitude " + std::to_string(parking.altitude_km) +
                             " km must lie strictly below the plane altitude " +
                             std::to_string(plane.altitude_km) + " km");
  }
  if (std::abs(parking.inclination_deg - plane.inclination_deg) > 1e-9) {
    throw std::invalid_argument("parking and plane orbits must share the inclination");
  }
  return raan_drift_rate(parking, constants) - raan_drift_rate(plane, constants);
}

double transfer_delta_v(double r_initial_km, double r_final_km,
                        const PhysicalConstants& constants) {
  if (!(r_initial_km > 0.0)) {
    throw std::invalid_argument("initial orbit radius must be positive");
  }
  if (r_initial_km >= r_final_km) {
    throw AltitudeOrderError("orbit raising requires r_initial < r_final, got " +
                             std::to_string(r_initial_km) + " >= " +
                             std::to_string(r_final_km));
  }
  return std::sqrt(constants.mu_km3_s2 / r_initial_km) -
         std::sqrt(constants.mu_km3_s2 / r_final_km);
}

TransferBudget transfer_fuel_and_time(double delta_v_km_s, const PropulsionSpec& prop,
                                      const PhysicalConstants& constants) {
  if (!(delta_v_km_s >= 0.0)) {
    throw std::invalid_argument("delta-v must be nonnegative");
  }
  if (!(prop.dry_mass_kg > 0.0) || !(prop.isp_s > 0.0) || !(prop.mass_flow_kg_s > 0.0)) {
    throw std::invalid_argument("propulsion spec must have positive dry mass, Isp and mass flow");
  }
  TransferBudget out;
  const double ve = exhaust_velocity_km_s(prop, constants);
  out.fuel_kg = prop.dry_mass_kg * std::expm1(delta_v_km_s / ve);
  out.time_s = out.fuel_kg / prop.mass_flow_kg_s;
  return out;
}

std::vector<AlignmentInterval> alignment_intervals(int n_parking, double omega_rel_rad_s,
                                                   double t_trans_weeks) {
  if (n_parking < 1) {
    throw std::invalid_argument("need at least one parking orbit");
  }
  if (!std::isfinite(omega_rel_rad_s) || !std::isfinite(t_trans_weeks) || t_trans_weeks < 0.0) {
    throw std::invalid_argument("non-finite alignment geometry");
  }
  const double omega_weekly = std::abs(omega_rel_rad_s) * kSecondsPerWeek;
  if (omega_weekly == 0.0) {
    throw ZeroDriftError("relative RAAN drift is zero; no passive alignment exists");
  }
  const double width = (2.0 * kPi / n_parking) / omega_weekly;
  std::vector<AlignmentInterval> out(static_cast<std::size_t>(n_parking));
  for (int j = 0; j < n_parking; ++j) {
    out[static_cast<std::size_t>(j)] = {t_trans_weeks + j * width,
                                        t_trans_weeks + (j + 1) * width};
  }
  return out;
}

}  // namespace constel::orbital
