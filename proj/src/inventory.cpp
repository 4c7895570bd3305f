#include "constel/inventory.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

namespace constel::inventory {

namespace {

constexpr double kQuadAbsTol = 1e-8;    // required absolute accuracy of each shortage integral
constexpr double kTermRelCut = 1e-14;   // relative truncation of shortage sums
constexpr double kTailRelCut = 1e-12;   // exponential tail mass cut for the parking integral

// GSL aborts on underflow unless the handler is disabled; shortage tails
// underflow routinely and must just evaluate to zero.
const int kGslHandlerOff = [] {
  gsl_set_error_handler_off();
  return 0;
}();

double bessel_in_scaled(int order, double x) {
  gsl_sf_result res;
  const int status = gsl_sf_bessel_In_scaled_e(order, x, &res);
  if (status == GSL_SUCCESS) return res.val;
  if (status == GSL_EUNDRFLW) return 0.0;
  throw NumericalIntegrationError("modified Bessel evaluation failed, order " +
                                  std::to_string(order) + ", x " + std::to_string(x));
}

double poisson_pmf(long long k, double mean) {
  if (k < 0) return 0.0;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kk = static_cast<double>(k);
  return std::exp(kk * std::log(mean) - mean - std::lgamma(kk + 1.0));
}

// P(demand - recovery = delta) with demand ~ Poisson(m), recovery ~
// Poisson(m*(1-gamma0)). m is the demand mean lambda*tau.
double skellam_pmf_m(long long delta, double m, double gamma0) {
  if (m == 0.0) return delta == 0 ? 1.0 : 0.0;
  if (gamma0 >= 1.0 - 1e-12) return poisson_pmf(delta, m);
  const double one_minus = 1.0 - gamma0;
  const double u = std::sqrt(one_minus);
  const double x = 2.0 * m * u;
  const double scaled = bessel_in_scaled(static_cast<int>(std::llabs(delta)), x);
  if (scaled <= 0.0) return 0.0;
  // log I_delta(x) = x + log(scaled); the remaining exponent is
  // -m(2-gamma0) - (delta/2) log(1-gamma0), never above zero in total.
  const double ln_p = -m * (2.0 - gamma0) + x -
                      0.5 * static_cast<double>(delta) * std::log(one_minus) +
                      std::log(scaled);
  return std::exp(ln_p);
}

double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * orbital::kPi);
}

double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

}  // namespace

// Exact: either the upper tail sum or the complement identity
// E[(X-s)+] = (mean - s) + E[(s-X)+], whose lower sum has at most s terms.
double poisson_expected_shortage(double mean, int s) {
  if (mean <= 0.0) return 0.0;
  if (mean > static_cast<double>(s)) {
    double acc = mean - s;
    double p = std::exp(-mean);
    for (int d = 0; d < s; ++d) {
      acc += (s - d) * p;
      p *= mean / (d + 1);
    }
    return acc;
  }
  double p = poisson_pmf(s, mean);
  double acc = 0.0;
  const long long cap = s + 300 + static_cast<long long>(12.0 * std::sqrt(mean));
  for (long long d = s + 1; d <= cap; ++d) {
    p *= mean / static_cast<double>(d);
    const double term = static_cast<double>(d - s) * p;
    acc += term;
    if (d >= s + 5 && term < kTermRelCut * acc) break;
  }
  return acc;
}

// The summation direction follows the complement identity so the sum always
// runs into a decaying tail; the normal stand-in beyond variance 400 keeps
// deeply infeasible candidates rankable without thousands of Bessel terms.
double skellam_expected_shortage(double m, double gamma0, int s) {
  if (m <= 0.0) return 0.0;
  if (gamma0 >= 1.0 - 1e-12) return poisson_expected_shortage(m, s);
  const double mean_net = m * gamma0;
  const double var = m * (2.0 - gamma0);
  const double sigma = std::sqrt(var);
  if (var > 400.0) {
    const double d = (mean_net - s) / sigma;
    return (mean_net - s) * std_normal_cdf(d) + sigma * std_normal_pdf(d);
  }
  if (mean_net > static_cast<double>(s)) {
    double acc = mean_net - s;
    const long long floor_d =
        static_cast<long long>(std::floor(mean_net - 12.0 * sigma)) - 50;
    for (long long d = s - 1; d >= floor_d; --d) {
      const double term = static_cast<double>(s - d) * skellam_pmf_m(d, m, gamma0);
      acc += term;
      if (term < kTermRelCut * acc) break;
    }
    return acc;
  }
  double acc = 0.0;
  const long long cap = s + 200 + static_cast<long long>(std::ceil(12.0 * sigma));
  for (long long d = s + 1; d <= cap; ++d) {
    const double term = static_cast<double>(d - s) * skellam_pmf_m(d, m, gamma0);
    acc += term;
    if (d >= s + 5 && term < kTermRelCut * acc) break;
  }
  return acc;
}

namespace {

template <class F>
double gk_integrate(const F& f, double lo, double hi, double& err_out) {
  double err = 0.0, l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, lo, hi, 10, 1e-10, &err, &l1);
  err_out = err;
  return v;
}

void check_config(const ConstellationConfig& cfg) {
  if (cfg.n_plane < 1 || cfg.n_sat < 1) {
    throw std::invalid_argument("constellation needs at least one plane and one satellite");
  }
  if (!(cfg.n_t >= 1.0)) {
    throw std::invalid_argument("time units per year must be at least 1");
  }
  if (!(cfg.sat_failure_rate >= 0.0)) {
    throw std::invalid_argument("satellite failure rate must be nonnegative");
  }
}

void check_policy(const ReplenishmentPolicy& policy) {
  if (policy.s < 1 || policy.q < 1 || policy.k_s < 1 || policy.k_q < 1) {
    throw std::invalid_argument("reorder points and order quantities must be at least 1");
  }
  if (policy.n_parking < 1) {
    throw std::invalid_argument("need at least one parking orbit");
  }
  if (policy.n_oos < 0) {
    throw std::invalid_argument("service limit must be nonnegative");
  }
}

}  // namespace

double PiecewiseLeadTime::mean() const {
  double acc = 0.0;
  for (int j = 0; j < pieces(); ++j) {
    acc += weight[static_cast<std::size_t>(j)] * (start + (j + 0.5) * width);
  }
  return acc;
}

double plane_failure_rate(const ConstellationConfig& cfg) {
  check_config(cfg);
  return cfg.sat_failure_rate * cfg.n_sat / cfg.n_t;
}

GammaProfile solve_gamma(double r_oos, int n_oos, double lambda_plane, double mu_oos) {
  if (!(r_oos >= 0.0) || r_oos > 1.0) {
    throw std::invalid_argument("serviceable fraction must lie in [0, 1]");
  }
  if (n_oos < 0) throw std::invalid_argument("service limit must be nonnegative");
  if (!(lambda_plane >= 0.0)) throw std::invalid_argument("failure rate must be nonnegative");

  GammaProfile out;
  out.gamma.resize(static_cast<std::size_t>(n_oos) + 1);

  double gamma0;
  if (n_oos == 0 || r_oos == 0.0) {
    gamma0 = 1.0;
  } else if (r_oos == 1.0) {
    // (1-r)/(1-r^(N+1)) is 0/0 at r = 1; the limit splits the inflow evenly.
    gamma0 = 1.0 / (n_oos + 1);
  } else {
    const double denom = -std::expm1((n_oos + 1) * std::log(r_oos));
    gamma0 = (1.0 - r_oos) / denom;
  }
  out.gamma[0] = gamma0;
  for (int m = 1; m <= n_oos; ++m) {
    out.gamma[static_cast<std::size_t>(m)] = r_oos * out.gamma[static_cast<std::size_t>(m - 1)];
  }

  const bool has_flow = r_oos > 0.0 && n_oos > 0 && lambda_plane > 0.0;
  if (has_flow && !(mu_oos > 0.0)) {
    throw std::invalid_argument("service responsiveness must be positive when services occur");
  }
  out.s_wait.resize(static_cast<std::size_t>(n_oos), 0.0);
  for (int m = 1; m <= n_oos; ++m) {
    const double flow = lambda_plane * out.gamma[static_cast<std::size_t>(m - 1)] * r_oos;
    out.s_wait[static_cast<std::size_t>(m - 1)] = has_flow ? flow / mu_oos : 0.0;
    out.s_wait_total += out.s_wait[static_cast<std::size_t>(m - 1)];
  }
  return out;
}

double skellam_pmf(long long delta, double tau, double lambda_plane, double gamma0) {
  if (!(tau > 0.0)) throw std::invalid_argument("lead time must be positive");
  if (!(lambda_plane >= 0.0)) throw std::invalid_argument("failure rate must be nonnegative");
  if (!(gamma0 > 0.0) || gamma0 > 1.0) {
    throw std::invalid_argument("gamma0 must lie in (0, 1]");
  }
  return skellam_pmf_m(delta, lambda_plane * tau, gamma0);
}

PiecewiseLeadTime inplane_leadtime_pdf(const ReplenishmentPolicy& policy,
                                       double omega_rel_rad_s, double t_trans_weeks,
                                       double beta_parking) {
  check_policy(policy);
  if (!(beta_parking > 0.0) || beta_parking > 1.0) {
    throw std::invalid_argument("parking fill rate must lie in (0, 1]");
  }
  const auto windows =
      orbital::alignment_intervals(policy.n_parking, omega_rel_rad_s, t_trans_weeks);

  PiecewiseLeadTime out;
  out.start = windows.front().lo;
  out.width = windows.front().hi - windows.front().lo;
  out.weight.resize(windows.size(), 0.0);
  if (beta_parking == 1.0) {
    out.weight[0] = 1.0;
    return out;
  }
  // Geometric availability of successive parking orbits, normalized over the
  // finite orbit count.
  const double miss = 1.0 - beta_parking;
  const double norm = -std::expm1(policy.n_parking * std::log1p(-beta_parking));
  for (std::size_t j = 0; j < windows.size(); ++j) {
    out.weight[j] = beta_parking * std::pow(miss, static_cast<double>(j)) / norm;
  }
  return out;
}

InplaneResult inplane_metrics(const ConstellationConfig& cfg, const ReplenishmentPolicy& policy,
                              const OOSTerms& oos, const GammaProfile& gamma,
                              const PiecewiseLeadTime& lead) {
  check_config(cfg);
  check_policy(policy);
  if (gamma.gamma.empty()) throw std::invalid_argument("gamma profile is empty");

  const double lambda = plane_failure_rate(cfg);
  const double gamma0 = gamma.gamma.front();
  const double s = policy.s;
  const double q = policy.q;

  InplaneResult out;
  out.metrics.mean_stock = s + q / 2.0 + 0.5 - lambda * gamma0 * lead.mean();
  out.metrics.order_frequency = lambda * gamma0 * cfg.n_t / q;

  double eps = 0.0;
  double err_total = 0.0;
  if (lambda > 0.0) {
    for (int j = 0; j < lead.pieces(); ++j) {
      const double w = lead.weight[static_cast<std::size_t>(j)];
      const double lo = lead.start + j * lead.width;
      const double hi = lo + lead.width;
      // E[(net drop - s)+] never exceeds the demand mean, so later windows
      // with vanishing weight cannot move the integral.
      if (w * lambda * hi < std::max(1e-16, kTailRelCut * eps)) continue;
      double err = 0.0;
      const double piece = gk_integrate(
          [&](double tau) { return skellam_expected_shortage(lambda * tau, gamma0, policy.s); },
          lo, hi, err);
      eps += w / lead.width * piece;
      err_total += w / lead.width * err;
    }
    if (!(err_total <= kQuadAbsTol)) {
      throw NumericalIntegrationError("in-plane shortage integral failed to reach 1e-8");
    }
  }
  out.metrics.expected_shortage = eps;
  out.metrics.fill_rate = 1.0 - eps / q;

  out.service_frequency = gamma.s_wait_total * oos.mu_oos * cfg.n_t;
  return out;
}

double parking_demand_rate(const ConstellationConfig& cfg, const ReplenishmentPolicy& policy,
                           double gamma0) {
  check_config(cfg);
  check_policy(policy);
  if (!(gamma0 >= 0.0) || gamma0 > 1.0) {
    throw std::invalid_argument("gamma0 must lie in [0, 1]");
  }
  return plane_failure_rate(cfg) * gamma0 * cfg.n_plane /
         (static_cast<double>(policy.q) * policy.n_parking);
}

EchelonMetrics parking_metrics(const LaunchService& launch, const ReplenishmentPolicy& policy,
                               double lambda_parking, double n_t) {
  check_policy(policy);
  if (!(launch.psi_lau > 0.0)) {
    throw std::invalid_argument("launch delay rate must be positive");
  }
  if (!(launch.t_lau >= 0.0)) {
    throw std::invalid_argument("launch processing time must be nonnegative");
  }
  if (!(lambda_parking >= 0.0)) {
    throw std::invalid_argument("parking demand rate must be nonnegative");
  }

  const double ks = policy.k_s;
  const double kq = policy.k_q;
  const double mean_lead = launch.t_lau + 1.0 / launch.psi_lau;

  EchelonMetrics out;
  out.mean_stock = ks + kq / 2.0 + 0.5 - lambda_parking * mean_lead;
  out.order_frequency = lambda_parking * n_t / kq;

  double eps = 0.0;
  if (lambda_parking > 0.0) {
    // Lead = t_lau + Exp(psi); integrate the exponential delay in segments of
    // one mean length until the remaining tail mass cannot matter.
    const double psi = launch.psi_lau;
    const double seg = 1.0 / psi;
    double err_total = 0.0;
    bool converged = false;
    for (int m = 0; m < 600; ++m) {
      const double lo = m * seg;
      const double hi = (m + 1) * seg;
      double err = 0.0;
      eps += gk_integrate(
          [&](double u) {
            return psi * std::exp(-psi * u) *
                   poisson_expected_shortage(lambda_parking * (launch.t_lau + u), policy.k_s);
          },
          lo, hi, err);
      err_total += err;
      const double tail_bound =
          lambda_parking * std::exp(-psi * hi) * (launch.t_lau + hi + seg);
      if (tail_bound < std::max(1e-16, kTailRelCut * eps)) {
        converged = true;
        break;
      }
    }
    if (!converged || !(err_total <= kQuadAbsTol)) {
      throw NumericalIntegrationError("parking shortage integral failed to reach 1e-8");
    }
  }
  out.expected_shortage = eps;
  out.fill_rate = 1.0 - eps / kq;
  return out;
}

EvaluationResult evaluate_steady_state(const ConstellationConfig& cfg,
                                       const ReplenishmentPolicy& policy, const OOSTerms& oos,
                                       const LaunchService& launch,
                                       const orbital::PropulsionSpec& prop,
                                       const orbital::PhysicalConstants& constants) {
  check_config(cfg);
  check_policy(policy);

  EvaluationResult out;
  out.cfg = cfg;
  out.policy = policy;
  out.oos = oos;
  out.launch = launch;

  out.lambda_plane = plane_failure_rate(cfg);
  out.gamma = solve_gamma(oos.r_oos, policy.n_oos, out.lambda_plane, oos.mu_oos);
  const double gamma0 = out.gamma.gamma.front();

  out.lambda_parking = parking_demand_rate(cfg, policy, gamma0);
  out.parking = parking_metrics(launch, policy, out.lambda_parking, cfg.n_t);
  out.mean_lead_parking_weeks = launch.t_lau + 1.0 / launch.psi_lau;

  out.omega_rel_rad_s = orbital::relative_raan_drift(policy.parking_orbit, cfg.plane_orbit,
                                                     constants);
  out.synodic_period_weeks =
      2.0 * orbital::kPi / (std::abs(out.omega_rel_rad_s) * orbital::kSecondsPerWeek);
  out.delta_v_km_s = orbital::transfer_delta_v(
      constants.earth_radius_km + policy.parking_orbit.altitude_km,
      constants.earth_radius_km + cfg.plane_orbit.altitude_km, constants);
  const auto budget = orbital::transfer_fuel_and_time(out.delta_v_km_s, prop, constants);
  out.fuel_kg = budget.fuel_kg;
  out.t_trans_weeks = budget.time_s / orbital::kSecondsPerWeek;

  // A parking echelon starved to nonpositive availability still needs a
  // defined lead-time law so the candidate can be ranked by its violations.
  const double beta_av = std::clamp(out.parking.fill_rate, 1e-6, 1.0);
  out.lead_plane =
      inplane_leadtime_pdf(policy, out.omega_rel_rad_s, out.t_trans_weeks, beta_av);
  out.mean_lead_plane_weeks = out.lead_plane.mean();

  const auto inp = inplane_metrics(cfg, policy, oos, out.gamma, out.lead_plane);
  out.plane = inp.metrics;
  out.f_oos = inp.service_frequency;
  out.negative_mean_stock = out.plane.mean_stock < 0.0 || out.parking.mean_stock < 0.0;
  return out;
}

}  // namespace constel::inventory
