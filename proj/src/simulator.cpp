#include "constel/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace constel::simulator {

namespace {

constexpr double kDaysPerYear = 365.25;
constexpr double kDaysPerWeek = 7.0;
constexpr double kTwoPi = 2.0 * orbital::kPi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t replication_seed(std::uint64_t base, int rep) {
  return splitmix64(base + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(rep));
}

struct PlaneState {
  std::deque<int> spares;  // service class per spare, oldest first
  std::vector<int> op_counts;
  int backorders = 0;
  bool outstanding = false;
  bool awaiting_batch = false;
  long long arrival_step = -1;
  long long placement_step = -1;
  int unmet_this_cycle = 0;
  std::vector<std::pair<long long, int>> in_service;  // completion step, class after service
};

struct OrbitState {
  int batches = 0;
  bool outstanding = false;
  long long arrival_step = -1;
  int misses_this_cycle = 0;
};

struct Counters {
  long long failures = 0;
  long long disposals = 0;
  long long services_started = 0;
  long long services_completed = 0;
  long long orders_plane = 0;
  long long launches = 0;
  long long batch_draws = 0;
  long long batch_misses = 0;
  long long all_empty_waits = 0;
};

// Days until parking orbit k's node next sweeps past plane p's node, with
// nodes seeded uniformly (2*pi*k/n_parking and 2*pi*p/n_plane) and drifting
// apart at omega_day rad/day.
double alignment_wait_days(int k, int n_parking, int p, int n_plane, double omega_day,
                           double t_days) {
  const double theta = kTwoPi * (static_cast<double>(k) / n_parking -
                                 static_cast<double>(p) / n_plane) +
                       omega_day * t_days;
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (omega_day < 0.0) return w / -omega_day;
  return (kTwoPi - w) / omega_day;
}

long long steps_for(double days, int step_days) {
  const double steps = std::ceil(days / step_days);
  return std::max<long long>(1, static_cast<long long>(steps));
}

// Largest-remainder apportionment of `total` slots over normalized weights.
std::vector<int> apportion(const std::vector<double>& weights, int total) {
  const std::size_t n = weights.size();
  std::vector<int> counts(n, 0);
  std::vector<std::pair<double, std::size_t>> remainders(n);
  int assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double share = weights[i] * total;
    counts[i] = static_cast<int>(share);
    remainders[i] = {share - counts[i], i};
    assigned += counts[i];
  }
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < total; ++assigned, ++i) {
    ++counts[remainders[i % n].second];
  }
  return counts;
}

void check_sim(const SimConfig& sim) {
  if (!(sim.horizon_years >= sim.warmup_years) || !(sim.warmup_years >= 0.0)) {
    throw std::invalid_argument("horizon must cover the warmup");
  }
  if (sim.step_days < 1) throw std::invalid_argument("step must be at least one day");
  if (sim.replications < 1) throw std::invalid_argument("need at least one replication");
}

}  // namespace

std::array<double, 10> metric_values(const ReplicationRecord& record) {
  return {record.s_plane,   record.s_parking,    record.s_wait,  record.f_plane,
          record.f_parking, record.f_oos,        record.beta_plane,
          record.beta_parking, record.t_d_years, record.amc};
}

ReplicationRecord run_replication(const inventory::ConstellationConfig& cfg,
                                  const inventory::ReplenishmentPolicy& policy,
                                  const inventory::OOSTerms& oos,
                                  const inventory::LaunchService& launch,
                                  const orbital::PropulsionSpec& prop,
                                  const economics::CostParams& costs, const SimConfig& sim,
                                  std::uint64_t seed) {
  check_sim(sim);
  if (!(launch.psi_lau > 0.0)) {
    throw std::invalid_argument("launch delay rate must be positive");
  }
  if (oos.r_oos > 0.0 && policy.n_oos > 0 && !(oos.mu_oos > 0.0)) {
    throw std::invalid_argument("service responsiveness must be positive when services occur");
  }

  const int n_plane = cfg.n_plane;
  const int n_parking = policy.n_parking;
  const int n_oos = policy.n_oos;
  const int s = policy.s;
  const int q = policy.q;
  const int k_s = policy.k_s;
  const int k_q = policy.k_q;
  const int step = sim.step_days;

  const double omega_day =
      orbital::relative_raan_drift(policy.parking_orbit, cfg.plane_orbit) *
      orbital::kSecondsPerDay;
  if (omega_day == 0.0) {
    throw ZeroDriftError("no relative nodal drift; alignment waits are unbounded");
  }
  const double delta_v = orbital::transfer_delta_v(
      orbital::kEarth.earth_radius_km + policy.parking_orbit.altitude_km,
      orbital::kEarth.earth_radius_km + cfg.plane_orbit.altitude_km);
  const auto budget = orbital::transfer_fuel_and_time(delta_v, prop);
  const double t_trans_days = budget.time_s / orbital::kSecondsPerDay;

  const double lambda_day_total =
      cfg.sat_failure_rate * cfg.n_sat / kDaysPerYear * n_plane;
  const double mu_day = oos.mu_oos / kDaysPerWeek;
  const double psi_day = launch.psi_lau / kDaysPerWeek;
  const double t_lau_days = launch.t_lau * kDaysPerWeek;

  const long long steps_total =
      std::llround(sim.horizon_years * kDaysPerYear / step);
  const long long warmup_steps = std::llround(sim.warmup_years * kDaysPerYear / step);

  std::mt19937_64 rng(splitmix64(seed));
  std::poisson_distribution<int> failures_dist(
      lambda_day_total > 0.0 ? lambda_day_total * step : 1.0);
  std::uniform_int_distribution<int> plane_dist(0, n_plane - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> service_dist(mu_day > 0.0 ? mu_day : 1.0);
  std::exponential_distribution<double> launch_delay_dist(psi_day);

  std::vector<long long> audit_steps;
  bool audit_ok = true;
  if (sim.audit && steps_total > 0) {
    std::mt19937_64 audit_rng(splitmix64(seed ^ 0xA0D17DA75ull));
    std::uniform_int_distribution<long long> day_dist(0, steps_total - 1);
    for (int i = 0; i < 10; ++i) audit_steps.push_back(day_dist(audit_rng));
    std::sort(audit_steps.begin(), audit_steps.end());
  }

  // Operational satellites and initial spares carry the steady-state
  // service-class mix; stock levels start at s+q and k_s+k_q.
  std::vector<double> class_mix(static_cast<std::size_t>(n_oos) + 1, 0.0);
  class_mix[0] = 1.0;
  if (n_oos > 0 && oos.r_oos > 0.0) {
    class_mix = inventory::solve_gamma(oos.r_oos, n_oos,
                                       inventory::plane_failure_rate(cfg), oos.mu_oos)
                    .gamma;
  }
  const auto op_mix = apportion(class_mix, cfg.n_sat);
  const auto spare_mix = apportion(class_mix, s + q);

  std::vector<PlaneState> planes(n_plane);
  for (auto& plane : planes) {
    plane.op_counts.assign(class_mix.size(), 0);
    for (std::size_t m = 0; m < op_mix.size(); ++m) {
      plane.op_counts[m] = op_mix[m];
    }
    for (std::size_t m = 0; m < spare_mix.size(); ++m) {
      for (int i = 0; i < spare_mix[m]; ++i) plane.spares.push_back(static_cast<int>(m));
    }
  }
  std::vector<OrbitState> orbits(n_parking);
  for (auto& orbit : orbits) orbit.batches = k_s + k_q;

  Counters all{};
  Counters at_warmup{};
  double stock_plane_acc = 0.0;
  double stock_parking_acc = 0.0;
  double stock_wait_acc = 0.0;
  double op_acc = 0.0;
  double plane_fill_sum = 0.0;
  long long plane_cycles = 0;
  double parking_fill_sum = 0.0;
  long long parking_cycles = 0;
  double lead_sum_days = 0.0;
  long long lead_count = 0;

  std::size_t next_audit = 0;

  for (long long t = 0; t < steps_total; ++t) {
    if (t == warmup_steps) at_warmup = all;
    const bool post = t >= warmup_steps;
    const double t_days = static_cast<double>(t) * step;

    // Launch arrivals close a parking cycle; the batch misses accrued since
    // the order was placed set the cycle's fill contribution.
    for (auto& orbit : orbits) {
      if (orbit.outstanding && orbit.arrival_step == t) {
        orbit.batches += k_q;
        orbit.outstanding = false;
        if (post) {
          parking_fill_sum += 1.0 - static_cast<double>(orbit.misses_this_cycle) / k_q;
          ++parking_cycles;
        }
        orbit.misses_this_cycle = 0;
      }
    }

    // In-plane batch arrivals close an in-plane cycle.
    for (auto& plane : planes) {
      if (plane.outstanding && !plane.awaiting_batch && plane.arrival_step == t) {
        if (post) {
          plane_fill_sum += 1.0 - static_cast<double>(plane.unmet_this_cycle) / q;
          ++plane_cycles;
          lead_sum_days += static_cast<double>(t - plane.placement_step) * step;
          ++lead_count;
        }
        plane.outstanding = false;
        plane.unmet_this_cycle = 0;
        int fresh = q;
        const int fill = std::min(fresh, plane.backorders);
        plane.op_counts[0] += fill;
        plane.backorders -= fill;
        fresh -= fill;
        for (int i = 0; i < fresh; ++i) plane.spares.push_back(0);
      }
    }

    // Service completions return the satellite as an in-plane spare of its
    // next service class, or straight to a vacant slot.
    for (auto& plane : planes) {
      auto& pool = plane.in_service;
      std::size_t kept = 0;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pool[i].first <= t) {
          const int klass = pool[i].second;
          if (plane.backorders > 0) {
            ++plane.op_counts[static_cast<std::size_t>(klass)];
            --plane.backorders;
          } else {
            plane.spares.push_back(klass);
          }
          ++all.services_completed;
        } else {
          pool[kept++] = pool[i];
        }
      }
      pool.resize(kept);
    }

    // Failures at the fleet-size rate; each victim is drawn from the classes
    // actually operating.
    if (lambda_day_total > 0.0) {
      const int failures_today = failures_dist(rng);
      for (int f = 0; f < failures_today; ++f) {
        auto& plane = planes[static_cast<std::size_t>(plane_dist(rng))];
        const int n_op = cfg.n_sat - plane.backorders;
        if (n_op <= 0) continue;
        int pick = std::uniform_int_distribution<int>(0, n_op - 1)(rng);
        int klass = 0;
        while (pick >= plane.op_counts[static_cast<std::size_t>(klass)]) {
          pick -= plane.op_counts[static_cast<std::size_t>(klass)];
          ++klass;
        }
        ++all.failures;
        --plane.op_counts[static_cast<std::size_t>(klass)];

        const bool serviceable =
            klass < n_oos && oos.r_oos > 0.0 && unit(rng) < oos.r_oos;
        if (serviceable) {
          const double service_days = service_dist(rng);
          plane.in_service.emplace_back(t + steps_for(service_days, step), klass + 1);
          ++all.services_started;
        } else {
          ++all.disposals;
        }

        if (!plane.spares.empty()) {
          const int replacement = plane.spares.front();
          plane.spares.pop_front();
          ++plane.op_counts[static_cast<std::size_t>(replacement)];
        } else {
          ++plane.backorders;
          ++plane.unmet_this_cycle;
        }
      }
    }

    // In-plane reorder check, then batch draw for any order still unserved.
    for (int p = 0; p < n_plane; ++p) {
      auto& plane = planes[static_cast<std::size_t>(p)];
      const int net = static_cast<int>(plane.spares.size()) - plane.backorders;
      if (!plane.outstanding && net <= s) {
        plane.outstanding = true;
        plane.awaiting_batch = true;
        plane.placement_step = t;
        ++all.orders_plane;
      }
      if (plane.outstanding && plane.awaiting_batch) {
        int best = -1;
        double best_wait = 0.0;
        std::vector<double> waits(static_cast<std::size_t>(n_parking));
        for (int k = 0; k < n_parking; ++k) {
          waits[static_cast<std::size_t>(k)] =
              alignment_wait_days(k, n_parking, p, n_plane, omega_day, t_days);
          if (orbits[static_cast<std::size_t>(k)].batches > 0 &&
              (best < 0 || waits[static_cast<std::size_t>(k)] < best_wait)) {
            best = k;
            best_wait = waits[static_cast<std::size_t>(k)];
          }
        }
        if (best < 0) {
          if (plane.placement_step == t) ++all.all_empty_waits;
        } else {
          // Empty orbits that would have aligned sooner each miss one batch
          // demand; the drawn orbit fills the real one.
          for (int k = 0; k < n_parking; ++k) {
            auto& orbit = orbits[static_cast<std::size_t>(k)];
            if (orbit.batches == 0 && waits[static_cast<std::size_t>(k)] < best_wait) {
              ++orbit.misses_this_cycle;
              ++all.batch_misses;
            }
          }
          --orbits[static_cast<std::size_t>(best)].batches;
          ++all.batch_draws;
          plane.awaiting_batch = false;
          plane.arrival_step = t + steps_for(best_wait + t_trans_days, step);
        }
      }
    }

    // Parking reorder check.
    for (auto& orbit : orbits) {
      if (!orbit.outstanding && orbit.batches <= k_s) {
        orbit.outstanding = true;
        orbit.arrival_step = t + steps_for(t_lau_days + launch_delay_dist(rng), step);
        ++all.launches;
      }
    }

    if (post) {
      for (const auto& plane : planes) {
        stock_plane_acc += static_cast<int>(plane.spares.size()) - plane.backorders;
        stock_wait_acc += static_cast<double>(plane.in_service.size());
        op_acc += cfg.n_sat - plane.backorders;
      }
      for (const auto& orbit : orbits) stock_parking_acc += orbit.batches;
    }

    while (next_audit < audit_steps.size() && audit_steps[next_audit] == t) {
      ++next_audit;
      long long launches_arrived = all.launches;
      long long parking_sats = 0;
      for (const auto& orbit : orbits) {
        if (orbit.outstanding) --launches_arrived;
        parking_sats += static_cast<long long>(orbit.batches) * q;
      }
      long long fleet = 0;
      for (const auto& plane : planes) {
        fleet += cfg.n_sat - plane.backorders;
        fleet += static_cast<long long>(plane.spares.size());
        fleet += static_cast<long long>(plane.in_service.size());
        if (plane.outstanding && !plane.awaiting_batch) fleet += q;
      }
      const long long introduced =
          static_cast<long long>(n_plane) * (cfg.n_sat + s + q) +
          static_cast<long long>(n_parking) * (k_s + k_q) * q +
          launches_arrived * k_q * q;
      const long long present = fleet + parking_sats + all.disposals;
      if (introduced != present) audit_ok = false;
    }
  }

  const long long steps_counted = steps_total - warmup_steps;
  const double days_counted = static_cast<double>(steps_counted) * step;
  const double years = days_counted / kDaysPerYear;

  const auto delta = [&](long long Counters::*field) {
    return static_cast<double>(all.*field - at_warmup.*field);
  };

  ReplicationRecord rec;
  rec.failures = all.failures;
  rec.disposals = all.disposals;
  rec.services_started = all.services_started;
  rec.services_completed = all.services_completed;
  rec.orders_plane = all.orders_plane;
  rec.launches = all.launches;
  rec.batch_misses = all.batch_misses;
  rec.all_empty_waits = all.all_empty_waits;
  rec.audit_ok = audit_ok;
  if (steps_counted <= 0) {
    rec.s_plane = rec.s_parking = rec.s_wait = std::numeric_limits<double>::quiet_NaN();
    rec.t_d_years = rec.amc = std::numeric_limits<double>::quiet_NaN();
    return rec;
  }

  rec.s_plane = stock_plane_acc / (static_cast<double>(steps_counted) * n_plane);
  rec.s_parking = stock_parking_acc / (static_cast<double>(steps_counted) * n_parking);
  rec.s_wait = stock_wait_acc / (static_cast<double>(steps_counted) * n_plane);
  rec.f_plane = delta(&Counters::orders_plane) / (years * n_plane);
  rec.f_parking = delta(&Counters::launches) / (years * n_parking);
  rec.f_oos = delta(&Counters::services_completed) / (years * n_plane);
  rec.beta_plane = plane_cycles > 0 ? plane_fill_sum / plane_cycles : 1.0;
  rec.beta_parking = parking_cycles > 0 ? parking_fill_sum / parking_cycles : 1.0;

  // Disposal time composed from simulated phase means with the analytical
  // multiplicities: a maximally serviced satellite sees the spare pool and an
  // operational stint N_oos+1 times and the service loop N_oos times.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double draw_rate = delta(&Counters::batch_draws) / (days_counted * n_parking);
  const double demand_rate = delta(&Counters::failures) / (days_counted * n_plane);
  const double t_parking_days = draw_rate > 0.0 ? rec.s_parking / draw_rate : nan;
  const double t_trans_mean = lead_count > 0 ? lead_sum_days / lead_count : nan;
  const double t_plane_days =
      demand_rate > 0.0 ? rec.s_plane * (n_oos + 1) / demand_rate : nan;
  const double failures_post = delta(&Counters::failures);
  const double t_opr_days =
      failures_post > 0.0 ? (n_oos + 1) * op_acc * step / failures_post : nan;
  double t_oos_days = 0.0;
  if (n_oos > 0) {
    const double completions = delta(&Counters::services_completed);
    t_oos_days = completions > 0.0
                     ? n_oos * rec.s_wait * n_plane * days_counted / completions
                     : (oos.r_oos > 0.0 ? nan : 0.0);
  }
  rec.t_d_years =
      (t_parking_days + t_trans_mean + t_plane_days + t_opr_days + t_oos_days) /
      kDaysPerYear;

  const double a_lau = costs.c_lau * delta(&Counters::launches) / years;
  const double a_maneuv =
      budget.fuel_kg * costs.eps_fuel * delta(&Counters::orders_plane) * q / years;
  const double a_manufac = costs.c_manufac * delta(&Counters::disposals) / years;
  const double a_hold = costs.c_hold * (rec.s_parking * q * n_parking +
                                        rec.s_plane * n_plane + rec.s_wait * n_plane);
  const double a_oos = costs.p_oos * delta(&Counters::services_completed) / years;
  rec.amc = a_lau + a_maneuv + a_manufac + a_hold + a_oos;
  return rec;
}

SimulationEstimate estimate(const inventory::ConstellationConfig& cfg,
                            const inventory::ReplenishmentPolicy& policy,
                            const inventory::OOSTerms& oos,
                            const inventory::LaunchService& launch,
                            const orbital::PropulsionSpec& prop,
                            const economics::CostParams& costs, const SimConfig& sim,
                            int jobs) {
  check_sim(sim);

  SimulationEstimate out;
  out.replications = sim.replications;
  out.records.resize(static_cast<std::size_t>(sim.replications));

  const int workers = std::clamp(jobs, 1, sim.replications);
  if (workers == 1) {
    for (int rep = 0; rep < sim.replications; ++rep) {
      out.records[static_cast<std::size_t>(rep)] = run_replication(
          cfg, policy, oos, launch, prop, costs, sim, replication_seed(sim.rng_seed, rep));
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int rep = next.fetch_add(1); rep < sim.replications;
             rep = next.fetch_add(1)) {
          out.records[static_cast<std::size_t>(rep)] =
              run_replication(cfg, policy, oos, launch, prop, costs, sim,
                              replication_seed(sim.rng_seed, rep));
        }
      });
    }
    for (auto& worker : pool) worker.join();
  }

  const double n = sim.replications;
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    double mean = 0.0;
    for (const auto& rec : out.records) mean += metric_values(rec)[m];
    mean /= n;
    double var = 0.0;
    for (const auto& rec : out.records) {
      const double d = metric_values(rec)[m] - mean;
      var += d * d;
    }
    out.metrics[m].mean = mean;
    out.metrics[m].std_error = sim.replications > 1
                                   ? std::sqrt(var / (n - 1.0) / n)
                                   : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::vector<ValidationRow> validation_errors(const inventory::EvaluationResult& analytic,
                                             const economics::CostParams& costs,
                                             const SimulationEstimate& sim) {
  const auto disposal = economics::mean_time_to_disposal(analytic, analytic.cfg,
                                                         analytic.policy, analytic.oos);
  const auto breakdown =
      economics::annual_maintenance_cost(analytic, costs, analytic.fuel_kg);
  const std::array<double, 10> model = {
      analytic.plane.mean_stock,     analytic.parking.mean_stock,
      analytic.gamma.s_wait_total,   analytic.plane.order_frequency,
      analytic.parking.order_frequency, analytic.f_oos,
      analytic.plane.fill_rate,      analytic.parking.fill_rate,
      disposal.t_d_years,            breakdown.amc};

  std::vector<ValidationRow> rows;
  rows.reserve(kMetricNames.size());
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    ValidationRow row;
    row.metric = kMetricNames[m];
    row.model = model[m];
    row.sim = sim.metrics[m].mean;
    row.relative = row.metric != "beta_plane" && row.metric != "beta_parking";
    if (!row.relative) {
      row.error = std::abs(row.sim - row.model) * 100.0;
    } else if (std::isfinite(row.sim) && row.sim != 0.0) {
      row.error = std::abs(row.sim - row.model) / std::abs(row.sim) * 100.0;
    } else {
      row.defined = false;
      row.error = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

SampleResult sample_validation_instances(int count, const TradeSpace& trade_space,
                                         const FixedParams& fixed, std::uint64_t seed,
                                         long long max_attempts) {
  if (count < 0) throw std::invalid_argument("instance count must be nonnegative");

  SampleResult out;
  if (count == 0) return out;

  std::mt19937_64 rng(splitmix64(seed));
  const auto real = [&](const Range& r) {
    return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
  };
  const auto integer = [&](const IntRange& r) {
    return std::uniform_int_distribution<int>(r.lo, r.hi)(rng);
  };

  while (static_cast<int>(out.instances.size()) < count) {
    if (out.attempts >= max_attempts) {
      throw SamplingExhausted("no " + std::to_string(count) + " feasible instances in " +
                              std::to_string(max_attempts) + " draws");
    }
    ++out.attempts;

    // Fixed draw order keeps a seed's sample sequence stable.
    ValidationInstance inst;
    inst.launch.t_lau = real(trade_space.t_lau);
    inst.launch.psi_lau = 1.0 / real(trade_space.launch_wait);
    inst.launch.cost = fixed.costs.c_lau;
    const double h_plane = real(trade_space.h_plane);
    const double h_parking = real(trade_space.h_parking);
    const double inclination = real(trade_space.inclination);
    inst.cfg.sat_failure_rate = real(trade_space.sat_failure_rate);
    inst.cfg.n_plane = integer(trade_space.n_plane);
    inst.policy.n_parking = integer(trade_space.n_parking);
    inst.cfg.n_sat = integer(trade_space.n_sat);
    inst.policy.s = integer(trade_space.s);
    inst.policy.q = integer(trade_space.q);
    inst.policy.k_s = integer(trade_space.k_s);
    inst.policy.k_q = integer(trade_space.k_q);
    inst.oos.mu_oos = 1.0 / real(trade_space.mttr);
    inst.oos.r_oos = real(trade_space.r_oos);
    inst.policy.n_oos = integer(trade_space.n_oos);

    inst.cfg.plane_orbit = {h_plane, 0.0, inclination};
    inst.policy.parking_orbit = {h_parking, 0.0, inclination};
    inst.cfg.n_t = fixed.n_t;
    inst.cfg.lifespan_years = fixed.lifespan_years;
    inst.oos.p_oos = fixed.costs.p_oos;
    inst.launch.capacity = inst.policy.q * inst.policy.k_q;

    if (inst.policy.s > inst.policy.q || inst.policy.k_s > inst.policy.k_q ||
        h_parking >= h_plane) {
      ++out.rejected;
      continue;
    }

    try {
      const auto eval = inventory::evaluate_steady_state(inst.cfg, inst.policy, inst.oos,
                                                         inst.launch, fixed.prop);
      if (eval.plane.fill_rate < fixed.beta_plane_req ||
          eval.parking.fill_rate < fixed.beta_parking_req) {
        ++out.rejected;
        continue;
      }
      const auto disposal =
          economics::mean_time_to_disposal(eval, inst.cfg, inst.policy, inst.oos);
      if (disposal.t_d_years > fixed.lifespan_years) {
        ++out.rejected;
        continue;
      }
    } catch (const Error&) {
      ++out.rejected;
      continue;
    } catch (const std::invalid_argument&) {
      ++out.rejected;
      continue;
    }
    out.instances.push_back(inst);
  }
  return out;
}

}  // namespace constel::simulator
