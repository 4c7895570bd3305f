#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "constel/inventory.hpp"

using namespace constel;
using namespace constel::inventory;

namespace {

double poisson_ln_pmf(long long k, double mean) {
  return k * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0);
}

// Net-drop law by direct convolution of the two Poisson marginals, summed in
// descending magnitude from the dominant term.
double convolved_pmf(long long delta, double m_demand, double m_recovery) {
  const long long k_lo = std::max<long long>(0, delta);
  const long long k_hi = k_lo + 200 +
                         static_cast<long long>(m_demand + m_recovery +
                                                40.0 * std::sqrt(m_demand + m_recovery + 1.0));
  double acc = 0.0;
  for (long long k = k_lo; k <= k_hi; ++k) {
    const double ln_term =
        poisson_ln_pmf(k, m_demand) + poisson_ln_pmf(k - delta, m_recovery);
    acc += std::exp(ln_term);
  }
  return acc;
}

double shortage_by_convolution(int s, double m, double gamma0) {
  const double m_rec = m * (1.0 - gamma0);
  const double sigma = std::sqrt(m + m_rec);
  const long long hi = static_cast<long long>(m * gamma0 + 40.0 * sigma) + 60;
  double acc = 0.0;
  for (long long d = s + 1; d <= hi; ++d) {
    acc += static_cast<double>(d - s) * convolved_pmf(d, m, m_rec);
  }
  return acc;
}

template <class F>
double simpson(const F& f, double lo, double hi, int panels) {
  const double h = (hi - lo) / (2 * panels);
  double acc = f(lo) + f(hi);
  for (int i = 1; i < 2 * panels; ++i) {
    acc += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

ConstellationConfig baseline_config() {
  ConstellationConfig cfg;
  cfg.n_plane = 40;
  cfg.n_sat = 40;
  cfg.plane_orbit = {1200.0, 0.0, 60.0};
  cfg.sat_failure_rate = 0.2;
  cfg.n_t = 52.0;
  cfg.lifespan_years = 30.0;
  return cfg;
}

LaunchService baseline_launch() {
  LaunchService launch;
  launch.t_lau = 12.0;
  launch.psi_lau = 0.125;
  launch.cost = 67.0;
  launch.capacity = 40;
  return launch;
}

orbital::PropulsionSpec baseline_prop() { return {150.0, 1200.0, 1.3e-6}; }

}  // namespace

TEST_CASE("plane failure rate scales satellites per time unit") {
  auto cfg = baseline_config();
  CHECK(plane_failure_rate(cfg) == doctest::Approx(0.15384615384615385).epsilon(1e-14));
  cfg.n_sat = 1;
  cfg.sat_failure_rate = cfg.n_t;
  CHECK(plane_failure_rate(cfg) == doctest::Approx(1.0).epsilon(1e-14));
  cfg.n_sat = 0;
  CHECK_THROWS_AS(plane_failure_rate(cfg), std::invalid_argument);
}

TEST_CASE("gamma profile matches the closed form") {
  const auto g = solve_gamma(0.25, 4, 0.15384615384615385, 1.0 / 12.0);
  CHECK(g.gamma.size() == 5);
  CHECK(g.gamma[0] == doctest::Approx(0.750733137829912).epsilon(1e-14));
  for (int m = 1; m <= 4; ++m) {
    CHECK(g.gamma[m] == doctest::Approx(0.25 * g.gamma[m - 1]).epsilon(1e-14));
  }

  CHECK(solve_gamma(0.5, 4, 0.0, 1.0).gamma[0] ==
        doctest::Approx(0.5161290322580645).epsilon(1e-14));
  CHECK(solve_gamma(0.1, 4, 0.0, 1.0).gamma[0] ==
        doctest::Approx(0.9000090000900008).epsilon(1e-14));
}

TEST_CASE("gamma fractions conserve the inflow") {
  for (double r : {0.0, 0.1, 0.25, 0.5, 0.9, 0.99, 1.0}) {
    for (int n = 0; n <= 6; ++n) {
      const auto g = solve_gamma(r, n, 2.0, 0.5);
      double total = 0.0;
      for (double v : g.gamma) total += v;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("gamma profile is continuous at full serviceability") {
  const auto at_one = solve_gamma(1.0, 4, 1.0, 1.0);
  CHECK(at_one.gamma[0] == doctest::Approx(0.2).epsilon(1e-14));
  const auto near_one = solve_gamma(1.0 - 1e-13, 4, 1.0, 1.0);
  CHECK(near_one.gamma[0] == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("waiting stock totals lambda (1 - gamma0) / mu") {
  const double lambda = 0.15384615384615385;
  const double mu = 1.0 / 12.0;
  for (double r : {0.1, 0.25, 0.5, 1.0}) {
    for (int n : {1, 2, 4}) {
      const auto g = solve_gamma(r, n, lambda, mu);
      CHECK(g.s_wait.size() == static_cast<std::size_t>(n));
      double total = 0.0;
      for (double v : g.s_wait) total += v;
      CHECK(total == doctest::Approx(g.s_wait_total).epsilon(1e-14));
      CHECK(g.s_wait_total ==
            doctest::Approx(lambda * (1.0 - g.gamma[0]) / mu).epsilon(1e-12));
    }
  }
}

TEST_CASE("gamma profile rejects bad inputs") {
  CHECK_THROWS_AS(solve_gamma(1.5, 2, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_gamma(-0.1, 2, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_gamma(0.5, -1, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_gamma(0.5, 2, 1.0, 0.0), std::invalid_argument);
  CHECK_NOTHROW(solve_gamma(0.0, 2, 1.0, 0.0));
  CHECK_NOTHROW(solve_gamma(0.5, 0, 1.0, 0.0));
}

TEST_CASE("net-drop pmf matches the Poisson convolution") {
  for (double gamma0 : {0.999999, 0.75, 0.51, 0.244}) {
    for (double m : {0.1, 3.0, 5.0, 40.0}) {
      const double m_rec = m * (1.0 - gamma0);
      const double sigma = std::sqrt(m + m_rec);
      const long long lo = static_cast<long long>(m * gamma0 - 8.0 * sigma) - 5;
      const long long hi = static_cast<long long>(m * gamma0 + 8.0 * sigma) + 5;
      for (long long d = lo; d <= hi; ++d) {
        const double want = convolved_pmf(d, m, m_rec);
        const double got = skellam_pmf(d, 1.0, m, gamma0);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("net-drop pmf normalizes over the integer support") {
  for (double gamma0 : {0.999999, 0.75, 0.51, 0.244}) {
    for (double m : {0.1, 3.0, 5.0, 40.0}) {
      const double sigma = std::sqrt(m * (2.0 - gamma0));
      const long long lo = static_cast<long long>(m * gamma0 - 40.0 * sigma) - 60;
      const long long hi = static_cast<long long>(m * gamma0 + 40.0 * sigma) + 60;
      double total = 0.0;
      for (long long d = lo; d <= hi; ++d) total += skellam_pmf(d, 1.0, m, gamma0);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("net-drop pmf degenerates to Poisson without recovery") {
  const double m = 3.7;
  for (long long d = -3; d <= 50; ++d) {
    const double want = d < 0 ? 0.0 : std::exp(poisson_ln_pmf(d, m));
    CHECK(skellam_pmf(d, 1.0, m, 1.0) == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(skellam_pmf(0, 1.0, 0.0, 0.75) == 1.0);
  CHECK(skellam_pmf(2, 1.0, 0.0, 0.75) == 0.0);
  CHECK_THROWS_AS(skellam_pmf(0, 0.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(skellam_pmf(0, 1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(skellam_pmf(0, 1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("Poisson expected shortage agrees with the tail sum") {
  for (double mean : {0.05, 0.8, 3.0, 12.0, 80.0}) {
    for (int s : {0, 1, 4, 10, 25}) {
      double want = 0.0;
      const long long hi = static_cast<long long>(mean + 40.0 * std::sqrt(mean)) + 60;
      for (long long k = s + 1; k <= hi; ++k) {
        want += static_cast<double>(k - s) * std::exp(poisson_ln_pmf(k, mean));
      }
      CHECK(poisson_expected_shortage(mean, s) ==
            doctest::Approx(want).epsilon(1e-11));
    }
  }
  CHECK(poisson_expected_shortage(0.0, 3) == 0.0);
}

TEST_CASE("net-drop expected shortage agrees with the convolution oracle") {
  for (double gamma0 : {0.9, 0.51, 0.244}) {
    for (double m : {0.4, 3.0, 8.0, 30.0}) {
      for (int s : {0, 2, 5, 12}) {
        const double want = shortage_by_convolution(s, m, gamma0);
        const double got = skellam_expected_shortage(m, gamma0, s);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("normal stand-in tracks the exact shortage at high variance") {
  const double m = 400.0;
  const double gamma0 = 0.5;
  for (int s : {180, 200, 220}) {
    const double want = shortage_by_convolution(s, m, gamma0);
    const double got = skellam_expected_shortage(m, gamma0, s);
    CHECK(got == doctest::Approx(want).epsilon(1e-2));
  }
}

TEST_CASE("lead-time law reduces to the first window at full availability") {
  ReplenishmentPolicy policy;
  policy.s = 3;
  policy.q = 4;
  policy.k_s = 6;
  policy.k_q = 10;
  policy.n_parking = 6;
  policy.parking_orbit = {700.0, 0.0, 60.0};

  const double omega = -1.4854204206448872e-07;
  const auto law = inplane_leadtime_pdf(policy, omega, 4.125942553780014, 1.0);
  CHECK(law.pieces() == 6);
  CHECK(law.weight[0] == 1.0);
  CHECK(law.start == doctest::Approx(4.125942553780014).epsilon(1e-14));
  const double synodic = 2.0 * orbital::kPi / (std::abs(omega) * orbital::kSecondsPerWeek);
  CHECK(law.width == doctest::Approx(synodic / 6.0).epsilon(1e-12));
  CHECK(law.mean() == doctest::Approx(law.start + law.width / 2.0).epsilon(1e-12));
}

TEST_CASE("lead-time weights follow the normalized geometric law") {
  ReplenishmentPolicy policy;
  policy.n_parking = 6;
  policy.parking_orbit = {700.0, 0.0, 60.0};

  const auto law = inplane_leadtime_pdf(policy, -1.4854204206448872e-07, 4.0, 0.983);
  CHECK(law.weight[0] == doctest::Approx(0.9830000000237272).epsilon(1e-14));
  double total = 0.0;
  for (double w : law.weight) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  for (int j = 1; j < 6; ++j) {
    CHECK(law.weight[j] == doctest::Approx(law.weight[j - 1] * 0.017).epsilon(1e-12));
  }

  CHECK_THROWS_AS(inplane_leadtime_pdf(policy, -1e-7, 4.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(inplane_leadtime_pdf(policy, -1e-7, 4.0, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(inplane_leadtime_pdf(policy, 0.0, 4.0, 0.9), ZeroDriftError);
}

TEST_CASE("parking demand rate spreads plane orders over the orbits") {
  auto cfg = baseline_config();
  ReplenishmentPolicy policy;
  policy.s = 4;
  policy.q = 4;
  policy.k_s = 10;
  policy.k_q = 10;
  policy.n_parking = 6;
  policy.parking_orbit = {795.4, 0.0, 60.0};

  const double rate = parking_demand_rate(cfg, policy, 1.0);
  CHECK(rate == doctest::Approx(10.0 / 39.0).epsilon(1e-14));
}

TEST_CASE("parking metrics match the closed forms") {
  ReplenishmentPolicy policy;
  policy.s = 4;
  policy.q = 4;
  policy.k_s = 10;
  policy.k_q = 10;
  policy.n_parking = 6;
  policy.parking_orbit = {795.4, 0.0, 60.0};
  const auto launch = baseline_launch();

  const double lambda = 10.0 / 39.0;
  const auto m = parking_metrics(launch, policy, lambda, 52.0);
  CHECK(m.order_frequency == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(m.mean_stock == doctest::Approx(10.0 + 5.0 + 0.5 - lambda * 20.0).epsilon(1e-12));
  CHECK(m.fill_rate == 1.0 - m.expected_shortage / policy.k_q);
  CHECK(m.expected_shortage > 0.0);
  CHECK(m.fill_rate > 0.9);

  const auto idle = parking_metrics(launch, policy, 0.0, 52.0);
  CHECK(idle.expected_shortage == 0.0);
  CHECK(idle.fill_rate == 1.0);
  CHECK(idle.mean_stock == doctest::Approx(15.5).epsilon(1e-14));

  auto bad = launch;
  bad.psi_lau = 0.0;
  CHECK_THROWS_AS(parking_metrics(bad, policy, lambda, 52.0), std::invalid_argument);
}

TEST_CASE("parking shortage integral matches a dense quadrature") {
  ReplenishmentPolicy policy;
  policy.k_s = 6;
  policy.k_q = 10;
  policy.n_parking = 7;
  policy.parking_orbit = {700.0, 0.0, 60.0};
  const auto launch = baseline_launch();

  const double lambda = 0.165;
  const auto m = parking_metrics(launch, policy, lambda, 52.0);
  const double psi = launch.psi_lau;
  const double want = simpson(
      [&](double u) {
        return psi * std::exp(-psi * u) *
               poisson_expected_shortage(lambda * (launch.t_lau + u), policy.k_s);
      },
      0.0, 40.0 / psi, 20000);
  CHECK(m.expected_shortage == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("parking shortage shrinks as the reorder point grows") {
  ReplenishmentPolicy policy;
  policy.k_q = 10;
  policy.n_parking = 7;
  policy.parking_orbit = {700.0, 0.0, 60.0};
  const auto launch = baseline_launch();

  double prev = std::numeric_limits<double>::infinity();
  for (int ks = 2; ks <= 12; ++ks) {
    policy.k_s = ks;
    const double eps = parking_metrics(launch, policy, 0.25, 52.0).expected_shortage;
    CHECK(eps < prev);
    prev = eps;
  }
}

TEST_CASE("in-plane metrics match the closed forms under OOS") {
  auto cfg = baseline_config();
  ReplenishmentPolicy policy;
  policy.s = 3;
  policy.q = 4;
  policy.k_s = 6;
  policy.k_q = 10;
  policy.n_oos = 4;
  policy.n_parking = 7;
  policy.parking_orbit = {700.0, 0.0, 60.0};
  OOSTerms oos{0.25, 1.0 / 12.0, 2.0};

  const double lambda = plane_failure_rate(cfg);
  const auto gamma = solve_gamma(oos.r_oos, policy.n_oos, lambda, oos.mu_oos);
  const auto law = inplane_leadtime_pdf(policy, -1.4854204206448872e-07,
                                        4.125942553780014, 0.98);
  const auto res = inplane_metrics(cfg, policy, oos, gamma, law);

  const double gamma0 = gamma.gamma[0];
  CHECK(res.metrics.mean_stock ==
        doctest::Approx(3.0 + 2.0 + 0.5 - lambda * gamma0 * law.mean()).epsilon(1e-12));
  CHECK(res.metrics.order_frequency ==
        doctest::Approx(lambda * gamma0 * 52.0 / 4.0).epsilon(1e-12));
  CHECK(res.metrics.fill_rate == 1.0 - res.metrics.expected_shortage / policy.q);
  CHECK(res.service_frequency ==
        doctest::Approx(lambda * (1.0 - gamma0) * 52.0).epsilon(1e-12));

  const double want = [&] {
    double acc = 0.0;
    for (int j = 0; j < law.pieces(); ++j) {
      const double lo = law.start + j * law.width;
      acc += law.weight[j] / law.width *
             simpson(
                 [&](double tau) {
                   return skellam_expected_shortage(lambda * tau, gamma0, policy.s);
                 },
                 lo, lo + law.width, 4000);
    }
    return acc;
  }();
  CHECK(res.metrics.expected_shortage == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("in-plane shortage shrinks as the reorder point grows") {
  auto cfg = baseline_config();
  ReplenishmentPolicy policy;
  policy.q = 4;
  policy.k_s = 6;
  policy.k_q = 10;
  policy.n_oos = 4;
  policy.n_parking = 7;
  policy.parking_orbit = {700.0, 0.0, 60.0};
  OOSTerms oos{0.25, 1.0 / 12.0, 2.0};

  const double lambda = plane_failure_rate(cfg);
  const auto gamma = solve_gamma(oos.r_oos, policy.n_oos, lambda, oos.mu_oos);
  const auto law = inplane_leadtime_pdf(policy, -1.4854204206448872e-07, 4.1259, 0.98);

  double prev = std::numeric_limits<double>::infinity();
  for (int s = 1; s <= 8; ++s) {
    policy.s = s;
    const double eps = inplane_metrics(cfg, policy, oos, gamma, law).metrics.expected_shortage;
    CHECK(eps < prev);
    prev = eps;
  }
}

TEST_CASE("steady-state evaluation composes the echelons") {
  const auto cfg = baseline_config();
  ReplenishmentPolicy policy;
  policy.s = 3;
  policy.q = 4;
  policy.k_s = 6;
  policy.k_q = 10;
  policy.n_oos = 4;
  policy.n_parking = 7;
  policy.parking_orbit = {700.0, 0.0, 60.0};
  OOSTerms oos{0.25, 1.0 / 12.0, 2.0};

  const auto res =
      evaluate_steady_state(cfg, policy, oos, baseline_launch(), baseline_prop());

  CHECK(res.lambda_plane == doctest::Approx(0.15384615384615385).epsilon(1e-14));
  CHECK(res.gamma.gamma[0] == doctest::Approx(0.750733137829912).epsilon(1e-12));
  CHECK(res.f_oos * cfg.n_plane == doctest::Approx(79.76539589442816).epsilon(1e-9));
  CHECK(res.lambda_parking ==
        doctest::Approx(res.lambda_plane * res.gamma.gamma[0] * 40.0 / 28.0).epsilon(1e-12));

  CHECK(res.omega_rel_rad_s == doctest::Approx(-1.4854204206448872e-07).epsilon(1e-12));
  CHECK(res.synodic_period_weeks == doctest::Approx(69.93888363736156).epsilon(1e-12));
  CHECK(res.delta_v_km_s == doctest::Approx(0.25178775580098645).epsilon(1e-12));
  CHECK(res.fuel_kg == doctest::Approx(3.2439810734839982).epsilon(1e-12));
  CHECK(res.t_trans_weeks == doctest::Approx(4.125942553780014).epsilon(1e-12));

  CHECK(res.mean_lead_parking_weeks == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(res.lead_plane.pieces() == 7);
  CHECK(res.mean_lead_plane_weeks == doctest::Approx(res.lead_plane.mean()).epsilon(1e-14));

  CHECK(res.plane.fill_rate > 0.98);
  CHECK(res.parking.fill_rate > 0.97);
  CHECK_FALSE(res.negative_mean_stock);

  // The lead-time law must have been built from the parking fill rate.
  const auto law = inplane_leadtime_pdf(policy, res.omega_rel_rad_s, res.t_trans_weeks,
                                        res.parking.fill_rate);
  CHECK(res.lead_plane.weight[0] == doctest::Approx(law.weight[0]).epsilon(1e-14));
}

TEST_CASE("steady-state evaluation without failures is inert") {
  auto cfg = baseline_config();
  cfg.sat_failure_rate = 0.0;
  ReplenishmentPolicy policy;
  policy.s = 3;
  policy.q = 4;
  policy.k_s = 6;
  policy.k_q = 10;
  policy.n_oos = 4;
  policy.n_parking = 7;
  policy.parking_orbit = {700.0, 0.0, 60.0};
  OOSTerms oos{0.25, 0.0, 2.0};

  const auto res =
      evaluate_steady_state(cfg, policy, oos, baseline_launch(), baseline_prop());
  CHECK(res.plane.mean_stock == doctest::Approx(5.5).epsilon(1e-14));
  CHECK(res.plane.expected_shortage == 0.0);
  CHECK(res.plane.fill_rate == 1.0);
  CHECK(res.plane.order_frequency == 0.0);
  CHECK(res.parking.mean_stock == doctest::Approx(11.5).epsilon(1e-14));
  CHECK(res.parking.fill_rate == 1.0);
  CHECK(res.f_oos == 0.0);
}

TEST_CASE("steady-state evaluation rejects inverted geometry") {
  const auto cfg = baseline_config();
  ReplenishmentPolicy policy;
  policy.s = 3;
  policy.q = 4;
  policy.k_s = 6;
  policy.k_q = 10;
  policy.n_parking = 7;
  policy.parking_orbit = {1300.0, 0.0, 60.0};

  CHECK_THROWS_AS(
      evaluate_steady_state(cfg, policy, OOSTerms{}, baseline_launch(), baseline_prop()),
      AltitudeOrderError);

  policy.parking_orbit = {700.0, 0.0, 55.0};
  CHECK_THROWS_AS(
      evaluate_steady_state(cfg, policy, OOSTerms{}, baseline_launch(), baseline_prop()),
      std::invalid_argument);
}

TEST_CASE("overloaded policies flag negative mean stock") {
  auto cfg = baseline_config();
  cfg.sat_failure_rate = 5.0;
  ReplenishmentPolicy policy;
  policy.s = 1;
  policy.q = 1;
  policy.k_s = 1;
  policy.k_q = 1;
  policy.n_parking = 7;
  policy.parking_orbit = {700.0, 0.0, 60.0};

  const auto res =
      evaluate_steady_state(cfg, policy, OOSTerms{}, baseline_launch(), baseline_prop());
  CHECK(res.negative_mean_stock);
  CHECK(res.plane.fill_rate < 1.0);
}
