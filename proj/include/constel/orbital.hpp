#pragma once

#include <vector>

#include "constel/errors.hpp"

namespace constel::orbital {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSecondsPerWeek = 604800.0;
inline constexpr double kSecondsPerDay = 86400.0;

// WGS-84 / EGM-96 values. Treat as read-only; every routine takes the set it
// should use so tests can feed exact round numbers.
struct PhysicalConstants {
  double mu_km3_s2 = 398600.4418;     // gravitational parameter
  double earth_radius_km = 6378.137;  // equatorial radius
  double j2 = 1.08262668e-3;          // oblateness coefficient
  double g0_m_s2 = 9.80665;           // standard gravity

  friend bool operator==(const PhysicalConstants&, const PhysicalConstants&) = default;
};

inline constexpr PhysicalConstants kEarth{};

struct OrbitGeometry {
  double altitude_km = 0.0;     // above the equatorial radius
  double eccentricity = 0.0;    // in [0, 1)
  double inclination_deg = 0.0;

  friend bool operator==(const OrbitGeometry&, const OrbitGeometry&) = default;
};

struct PropulsionSpec {
  double dry_mass_kg = 0.0;
  double isp_s = 0.0;          // specific impulse
  double mass_flow_kg_s = 0.0; // propellant mass flow while thrusting

  friend bool operator==(const PropulsionSpec&, const PropulsionSpec&) = default;
};

// Exhaust velocity in km/s, Isp * g0.
double exhaust_velocity_km_s(const PropulsionSpec& prop,
                             const PhysicalConstants& constants = kEarth);

// Secular J2 nodal regression rate in rad/s. Negative for prograde orbits.
double raan_drift_rate(const OrbitGeometry& orbit,
                       const PhysicalConstants& constants = kEarth);

// Drift of the parking orbit's node relative to the operational plane's,
// rad/s. Both orbits must share the inclination and the parking orbit must
// sit strictly below the plane.
double relative_raan_drift(const OrbitGeometry& parking,
                           const OrbitGeometry& plane,
                           const PhysicalConstants& constants = kEarth);

// Low-thrust circular-to-circular raising cost between orbit radii (km),
// km/s. r_initial must be strictly below r_final.
double transfer_delta_v(double r_initial_km, double r_final_km,
                        const PhysicalConstants& constants = kEarth);

struct TransferBudget {
  double fuel_kg = 0.0;
  double time_s = 0.0;
};

// Rocket-equation fuel mass for the given delta-v and the burn time at the
// spec's constant mass flow.
TransferBudget transfer_fuel_and_time(double delta_v_km_s,
                                      const PropulsionSpec& prop,
                                      const PhysicalConstants& constants = kEarth);

// Half-open window [lo, hi) in the same time unit as t_trans.
struct AlignmentInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// Partition of one synodic period into the n_parking arrival windows of the
// successive parking orbits, offset by the transfer time. omega_rel is in
// rad/s; t_trans and the returned bounds are in weeks.
std::vector<AlignmentInterval> alignment_intervals(int n_parking,
                                                   double omega_rel_rad_s,
                                                   double t_trans_weeks);

}  // namespace constel::orbital
