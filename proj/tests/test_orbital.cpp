#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "constel/orbital.hpp"

using namespace constel;
using namespace constel::orbital;

namespace {

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

const PropulsionSpec kProp{150.0, 1200.0, 1.3e-6};

}  // namespace

TEST_CASE("nodal drift matches direct evaluation of the J2 secular rate") {
  // Reference values computed independently from mu=398600.4418,
  // Re=6378.137, J2=1.08262668e-3.
  CHECK(rel_diff(raan_drift_rate({1200.0, 0.0, 60.0}), -5.504628072755636e-07) < 1e-12);
  CHECK(rel_diff(raan_drift_rate({800.0, 0.0, 0.0}), -1.3310226909172687e-06) < 1e-12);
  CHECK(rel_diff(raan_drift_rate({700.0, 0.0, 60.0}), -6.990048493400523e-07) < 1e-12);

  // An equatorial 800 km orbit regresses about -6.6 deg/day.
  const double deg_day = raan_drift_rate({800.0, 0.0, 0.0}) * kSecondsPerDay * 180.0 / kPi;
  CHECK(rel_diff(deg_day, -6.589) < 1e-3);
}

TEST_CASE("polar orbits do not regress and the rate is odd about i = 90") {
  CHECK(raan_drift_rate({800.0, 0.0, 90.0}) == 0.0);
  for (int d = 1; d <= 80; d += 7) {
    const double below = raan_drift_rate({800.0, 0.0, 90.0 - d});
    const double above = raan_drift_rate({800.0, 0.0, 90.0 + d});
    CHECK(rel_diff(below, -above) < 1e-15);
  }
}

TEST_CASE("drift magnitude decreases with altitude") {
  double prev = std::abs(raan_drift_rate({400.0, 0.0, 60.0}));
  for (int k = 1; k < 50; ++k) {
    const double h = 400.0 + k * (1600.0 / 49.0);
    const double cur = std::abs(raan_drift_rate({h, 0.0, 60.0}));
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("eccentricity tightens the (1 - e^2)^-2 factor") {
  const double circular = raan_drift_rate({800.0, 0.0, 60.0});
  const double eccentric = raan_drift_rate({800.0, 0.3, 60.0});
  const double factor = 1.0 / std::pow(1.0 - 0.09, 2.0);
  CHECK(rel_diff(eccentric, circular * factor) < 1e-12);
}

TEST_CASE("relative drift of a low parking orbit under a high plane") {
  const double rel = relative_raan_drift({700.0, 0.0, 60.0}, {1200.0, 0.0, 60.0});
  CHECK(rel_diff(rel, -1.4854204206448872e-07) < 1e-12);
  // Lower prograde orbits regress faster, so the relative rate is negative.
  CHECK(rel < 0.0);
  // Self-difference of the drift rate vanishes identically.
  CHECK(raan_drift_rate({700.0, 0.0, 60.0}) - raan_drift_rate({700.0, 0.0, 60.0}) == 0.0);

  CHECK_THROWS_AS(relative_raan_drift({1200.0, 0.0, 60.0}, {700.0, 0.0, 60.0}),
                  AltitudeOrderError);
  CHECK_THROWS_AS(relative_raan_drift({700.0, 0.0, 60.0}, {700.0, 0.0, 60.0}),
                  AltitudeOrderError);
  CHECK_THROWS_AS(relative_raan_drift({700.0, 0.0, 50.0}, {1200.0, 0.0, 60.0}),
                  std::invalid_argument);
}

TEST_CASE("orbit-raising delta-v") {
  const double re = kEarth.earth_radius_km;
  CHECK(rel_diff(transfer_delta_v(re + 700.0, re + 1200.0), 0.25178775580098645) < 1e-12);
  CHECK(rel_diff(transfer_delta_v(re + 500.0, re + 1000.0), 0.2624695436105533) < 1e-12);

  SUBCASE("telescoping over an intermediate radius") {
    const double r1 = re + 500.0, r2 = re + 900.0, r3 = re + 1500.0;
    const double split = transfer_delta_v(r1, r2) + transfer_delta_v(r2, r3);
    CHECK(rel_diff(split, transfer_delta_v(r1, r3)) < 1e-12);
  }

  SUBCASE("degenerate and inverted transfers are rejected") {
    CHECK_THROWS_AS(transfer_delta_v(re + 800.0, re + 800.0), AltitudeOrderError);
    CHECK_THROWS_AS(transfer_delta_v(re + 900.0, re + 800.0), AltitudeOrderError);
  }

  SUBCASE("vanishing altitude gap gives vanishing delta-v") {
    const double dv = transfer_delta_v(re + 800.0, re + 800.0 * (1.0 + 1e-12));
    CHECK(dv > 0.0);
    CHECK(dv < 1e-8);
  }
}

TEST_CASE("fuel mass and burn time from the rocket equation") {
  const TransferBudget zero = transfer_fuel_and_time(0.0, kProp);
  CHECK(zero.fuel_kg == 0.0);
  CHECK(zero.time_s == 0.0);

  const TransferBudget b = transfer_fuel_and_time(0.25178775580098645, kProp);
  CHECK(rel_diff(b.fuel_kg, 3.2439810734839982) < 1e-12);
  CHECK(rel_diff(b.time_s, 2495370.0565261524) < 1e-12);
  // About 4.13 weeks of continuous low-thrust burn.
  CHECK(rel_diff(b.time_s / kSecondsPerWeek, 4.125942553780014) < 1e-12);

  SUBCASE("fuel is increasing and convex in delta-v") {
    std::vector<double> fuel;
    for (int k = 0; k <= 20; ++k) {
      fuel.push_back(transfer_fuel_and_time(0.05 * k, kProp).fuel_kg);
    }
    for (std::size_t k = 1; k < fuel.size(); ++k) {
      CHECK(fuel[k] > fuel[k - 1]);
    }
    for (std::size_t k = 1; k + 1 < fuel.size(); ++k) {
      CHECK(fuel[k + 1] - fuel[k] > fuel[k] - fuel[k - 1]);
    }
  }
}

TEST_CASE("alignment windows partition the synodic period") {
  const double omega = -1.4854204206448872e-07;  // rad/s
  const double t_trans = 4.1259425537800136;     // weeks
  const double synodic_weeks = 2.0 * kPi / (std::abs(omega) * kSecondsPerWeek);

  SUBCASE("single parking orbit spans one full synodic period") {
    const auto one = alignment_intervals(1, omega, t_trans);
    REQUIRE(one.size() == 1);
    CHECK(one[0].lo == t_trans);
    CHECK(rel_diff(one[0].hi - one[0].lo, synodic_weeks) < 1e-12);
  }

  SUBCASE("n windows are contiguous and equally wide") {
    const int n = 6;
    const auto windows = alignment_intervals(n, omega, t_trans);
    REQUIRE(windows.size() == static_cast<std::size_t>(n));
    CHECK(windows.front().lo == t_trans);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      const double w = windows[j].hi - windows[j].lo;
      CHECK(rel_diff(w, synodic_weeks / n) < 1e-12);
      total += w;
      if (j > 0) {
        CHECK(rel_diff(windows[j].lo, windows[j - 1].hi) < 1e-12);
      }
    }
    CHECK(rel_diff(total, synodic_weeks) < 1e-12);
  }

  SUBCASE("degenerate geometry is rejected") {
    CHECK_THROWS_AS(alignment_intervals(6, 0.0, t_trans), ZeroDriftError);
    CHECK_THROWS_AS(alignment_intervals(0, omega, t_trans), std::invalid_argument);
  }
}
