#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "constel/simulator.hpp"

using namespace constel;
using namespace constel::simulator;
using inventory::ConstellationConfig;
using inventory::LaunchService;
using inventory::OOSTerms;
using inventory::ReplenishmentPolicy;

namespace {

struct Scenario {
  ConstellationConfig cfg;
  ReplenishmentPolicy policy;
  OOSTerms oos;
  LaunchService launch;
  orbital::PropulsionSpec prop{150.0, 1200.0, 1.3e-6};
  economics::CostParams costs{67.0, 0.5, 0.5, 0.01, 2.0, 0};
};

Scenario spares_only() {
  Scenario sc;
  sc.cfg.n_plane = 40;
  sc.cfg.n_sat = 40;
  sc.cfg.plane_orbit = {1200.0, 0.0, 60.0};
  sc.cfg.sat_failure_rate = 0.2;
  sc.cfg.lifespan_years = 30.0;
  sc.policy.s = 4;
  sc.policy.q = 4;
  sc.policy.k_s = 10;
  sc.policy.k_q = 10;
  sc.policy.n_oos = 0;
  sc.policy.n_parking = 6;
  sc.policy.parking_orbit = {795.4, 0.0, 60.0};
  sc.launch = {12.0, 0.125, 67.0, 40};
  return sc;
}

Scenario serviced_small() {
  Scenario sc = spares_only();
  sc.cfg.n_plane = 10;
  sc.policy.s = 3;
  sc.policy.k_s = 6;
  sc.policy.n_oos = 4;
  sc.policy.n_parking = 7;
  sc.policy.parking_orbit = {700.0, 0.0, 60.0};
  sc.oos = {0.25, 1.0 / 12.0, 2.0};
  return sc;
}

bool same_record(const ReplicationRecord& a, const ReplicationRecord& b) {
  return metric_values(a) == metric_values(b) && a.failures == b.failures &&
         a.disposals == b.disposals && a.services_started == b.services_started &&
         a.services_completed == b.services_completed && a.orders_plane == b.orders_plane &&
         a.launches == b.launches && a.batch_misses == b.batch_misses &&
         a.all_empty_waits == b.all_empty_waits;
}

}  // namespace

TEST_CASE("same seed reproduces the replication bit for bit") {
  const auto sc = serviced_small();
  SimConfig sim;
  sim.horizon_years = 12.0;
  sim.warmup_years = 2.0;
  const auto a = run_replication(sc.cfg, sc.policy, sc.oos, sc.launch, sc.prop, sc.costs,
                                 sim, 42);
  const auto b = run_replication(sc.cfg, sc.policy, sc.oos, sc.launch, sc.prop, sc.costs,
                                 sim, 42);
  CHECK(same_record(a, b));

  const auto c = run_replication(sc.cfg, sc.policy, sc.oos, sc.launch, sc.prop, sc.costs,
                                 sim, 43);
  CHECK_FALSE(same_record(a, c));
}

TEST_CASE("parallel estimation matches sequential estimation") {
  const auto sc = serviced_small();
  SimConfig sim;
  sim.horizon_years = 8.0;
  sim.warmup_years = 2.0;
  sim.replications = 6;
  sim.rng_seed = 9;
  const auto seq = estimate(sc.cfg, sc.policy, sc.oos, sc.launch, sc.prop, sc.costs, sim, 1);
  const auto par = estimate(sc.cfg, sc.policy, sc.oos, sc.launch, sc.prop, sc.costs, sim, 3);
  REQUIRE(seq.records.size() == par.records.size());
  for (std::size_t i = 0; i < seq.records.size(); ++i) {
    CHECK(same_record(seq.records[i], par.records[i]));
  }
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    CHECK(seq.metrics[m].mean == par.metrics[m].mean);
  }
}

TEST_CASE("a failure-free constellation never moves") {
  auto sc = spares_only();
  sc.cfg.sat_failure_rate = 0.0;
  SimConfig sim;
  sim.horizon_years = 6.0;
  sim.warmup_years = 1.0;
  const auto rec = run_replication(sc.cfg, sc.policy, sc.oos, sc.launch, sc.prop, sc.costs,
                                   sim, 1);
  CHECK(rec.failures == 0);
  CHECK(rec.orders_plane == 0);
  CHECK(rec.launches == 0);
  CHECK(rec.s_plane == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(rec.s_parking == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(rec.s_wait == 0.0);
  CHECK(rec.beta_plane == 1.0);
  CHECK(rec.beta_parking == 1.0);
  CHECK(rec.f_plane == 0.0);
  CHECK(rec.f_oos == 0.0);
  const double hold_only =
      0.5 * (20.0 * 4.0 * 6.0 + 8.0 * 40.0);
  CHECK(rec.amc == doctest::Approx(hold_only).epsilon(1e-12));
}

TEST_CASE("satellite conservation holds on audited days") {
  const auto sc = serviced_small();
  SimConfig sim;
  sim.horizon_years = 15.0;
  sim.warmup_years = 2.0;
  sim.audit = true;
  for (std::uint64_t seed : {1ull, 7ull, 23ull}) {
    const auto rec = run_replication(sc.cfg, sc.policy, sc.oos, sc.launch, sc.prop,
                                     sc.costs, sim, seed);
    CHECK(rec.audit_ok);
    CHECK(rec.failures > 0);
  }
}

TEST_CASE("no serviceable fraction means no services ever") {
  auto sc = serviced_small();
  sc.oos.r_oos = 0.0;
  SimConfig sim;
  sim.horizon_years = 12.0;
  sim.warmup_years = 2.0;
  const auto rec = run_replication(sc.cfg, sc.policy, sc.oos, sc.launch, sc.prop, sc.costs,
                                   sim, 5);
  CHECK(rec.services_started == 0);
  CHECK(rec.services_completed == 0);
  CHECK(rec.f_oos == 0.0);
  CHECK(rec.s_wait == 0.0);
  CHECK(rec.disposals == rec.failures);
}

TEST_CASE("service starts never exceed failures") {
  const auto sc = serviced_small();
  SimConfig sim;
  sim.horizon_years = 12.0;
  sim.warmup_years = 2.0;
  const auto rec = run_replication(sc.cfg, sc.policy, sc.oos, sc.launch, sc.prop, sc.costs,
                                   sim, 11);
  CHECK(rec.services_started > 0);
  CHECK(rec.services_started < rec.failures);
  CHECK(rec.disposals + rec.services_started == rec.failures);
}

TEST_CASE("standard errors shrink like the replication count") {
  auto sc = serviced_small();
  sc.cfg.n_plane = 5;
  SimConfig small;
  small.horizon_years = 12.0;
  small.warmup_years = 2.0;
  small.replications = 24;
  small.rng_seed = 31;
  auto big = small;
  big.replications = 96;
  const auto a = estimate(sc.cfg, sc.policy, sc.oos, sc.launch, sc.prop, sc.costs, small, 1);
  const auto b = estimate(sc.cfg, sc.policy, sc.oos, sc.launch, sc.prop, sc.costs, big, 1);

  double ratio_sum = 0.0;
  int counted = 0;
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    if (a.metrics[m].std_error > 0.0 && b.metrics[m].std_error > 0.0) {
      ratio_sum += a.metrics[m].std_error / b.metrics[m].std_error;
      ++counted;
    }
  }
  REQUIRE(counted >= 6);
  CHECK(ratio_sum / counted == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("single replication reports no spread") {
  const auto sc = serviced_small();
  SimConfig sim;
  sim.horizon_years = 8.0;
  sim.warmup_years = 2.0;
  sim.replications = 1;
  const auto est = estimate(sc.cfg, sc.policy, sc.oos, sc.launch, sc.prop, sc.costs, sim, 1);
  for (const auto& stat : est.metrics) {
    CHECK(std::isnan(stat.std_error));
  }
  CHECK(est.metrics[0].mean == metric_values(est.records[0])[0]);
}

// A lean design with s = q keeps the reorder cadence locked to the parking
// alignment geometry, so simulated fill runs about 1%p below the renewal
// model; looser designs agree to well under 0.5%p.
TEST_CASE("simulation tracks the analytical model on the spares-only benchmark") {
  const auto sc = spares_only();
  const auto eval = inventory::evaluate_steady_state(sc.cfg, sc.policy, sc.oos, sc.launch,
                                                     sc.prop);
  SimConfig sim;
  sim.horizon_years = 30.0;
  sim.warmup_years = 5.0;
  sim.replications = 20;
  sim.rng_seed = 17;
  const auto est = estimate(sc.cfg, sc.policy, sc.oos, sc.launch, sc.prop, sc.costs, sim, 1);

  CHECK(std::abs(est.metrics[6].mean - eval.plane.fill_rate) < 0.015);
  CHECK(std::abs(est.metrics[7].mean - eval.parking.fill_rate) < 0.015);
  CHECK(est.metrics[0].mean ==
        doctest::Approx(eval.plane.mean_stock).epsilon(0.05));
  CHECK(est.metrics[1].mean ==
        doctest::Approx(eval.parking.mean_stock).epsilon(0.05));
  CHECK(est.metrics[3].mean ==
        doctest::Approx(eval.plane.order_frequency).epsilon(0.05));
  CHECK(est.metrics[4].mean ==
        doctest::Approx(eval.parking.order_frequency).epsilon(0.05));
}

TEST_CASE("a sampled spares-only instance matches the analytics") {
  FixedParams fixed;
  const auto sampled = sample_validation_instances(1, TradeSpace{}, fixed, 404);
  auto inst = sampled.instances[0];
  inst.oos.r_oos = 0.0;
  inst.policy.n_oos = 0;

  const auto eval = inventory::evaluate_steady_state(inst.cfg, inst.policy, inst.oos,
                                                     inst.launch, fixed.prop);
  SimConfig sim;
  sim.horizon_years = 60.0;
  sim.warmup_years = 15.0;
  sim.replications = 30;
  sim.rng_seed = 7;
  const auto est = estimate(inst.cfg, inst.policy, inst.oos, inst.launch, fixed.prop,
                            fixed.costs, sim, 1);
  const auto rows = validation_errors(eval, fixed.costs, est);
  for (const auto& row : rows) {
    INFO(row.metric);
    if (row.metric == "s_wait" || row.metric == "f_oos") {
      CHECK(row.model == 0.0);
      continue;
    }
    REQUIRE(row.defined);
    CHECK(row.error < (row.relative ? 5.0 : 0.5));
  }
}

TEST_CASE("error table is zero when model equals simulation") {
  const auto sc = serviced_small();
  const auto eval = inventory::evaluate_steady_state(sc.cfg, sc.policy, sc.oos, sc.launch,
                                                     sc.prop);
  const auto disposal =
      economics::mean_time_to_disposal(eval, sc.cfg, sc.policy, sc.oos);
  const auto breakdown = economics::annual_maintenance_cost(eval, sc.costs, eval.fuel_kg);

  SimulationEstimate fake;
  fake.replications = 1;
  const std::array<double, 10> model = {
      eval.plane.mean_stock,      eval.parking.mean_stock, eval.gamma.s_wait_total,
      eval.plane.order_frequency, eval.parking.order_frequency, eval.f_oos,
      eval.plane.fill_rate,       eval.parking.fill_rate,  disposal.t_d_years,
      breakdown.amc};
  for (std::size_t m = 0; m < model.size(); ++m) fake.metrics[m].mean = model[m];

  const auto rows = validation_errors(eval, sc.costs, fake);
  REQUIRE(rows.size() == 10);
  for (const auto& row : rows) {
    INFO(row.metric);
    CHECK(row.defined);
    CHECK(row.error == 0.0);
  }
}

TEST_CASE("error table marks zero-mean relative metrics undefined") {
  const auto sc = serviced_small();
  const auto eval = inventory::evaluate_steady_state(sc.cfg, sc.policy, sc.oos, sc.launch,
                                                     sc.prop);
  SimulationEstimate fake;
  fake.replications = 1;
  const auto rows = validation_errors(eval, sc.costs, fake);
  for (const auto& row : rows) {
    if (row.relative) {
      CHECK_FALSE(row.defined);
    } else {
      CHECK(row.defined);
    }
  }
}

TEST_CASE("error table is insensitive to which side is larger") {
  const auto sc = serviced_small();
  const auto eval = inventory::evaluate_steady_state(sc.cfg, sc.policy, sc.oos, sc.launch,
                                                     sc.prop);
  SimulationEstimate lo;
  lo.replications = 1;
  SimulationEstimate hi;
  hi.replications = 1;
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    lo.metrics[m].mean = 1.0;
    hi.metrics[m].mean = 1.0;
  }
  lo.metrics[9].mean = 800.0;
  hi.metrics[9].mean = 800.0;

  auto rows_lo = validation_errors(eval, sc.costs, lo);
  auto rows_hi = validation_errors(eval, sc.costs, hi);
  CHECK(rows_lo[6].error == rows_hi[6].error);

  // A fill-rate row depends only on |sim - model|.
  lo.metrics[6].mean = eval.plane.fill_rate - 0.003;
  hi.metrics[6].mean = eval.plane.fill_rate + 0.003;
  rows_lo = validation_errors(eval, sc.costs, lo);
  rows_hi = validation_errors(eval, sc.costs, hi);
  CHECK(rows_lo[6].error == doctest::Approx(rows_hi[6].error).epsilon(1e-9));
}

TEST_CASE("sampler returns exactly the requested feasible instances") {
  const auto result = sample_validation_instances(5, TradeSpace{}, FixedParams{}, 7);
  CHECK(result.instances.size() == 5);
  CHECK(result.attempts >= 5);
  CHECK(result.attempts == result.rejected + 5);

  FixedParams fixed;
  for (const auto& inst : result.instances) {
    CHECK(inst.policy.s <= inst.policy.q);
    CHECK(inst.policy.k_s <= inst.policy.k_q);
    CHECK(inst.policy.parking_orbit.altitude_km < inst.cfg.plane_orbit.altitude_km);
    const auto eval = inventory::evaluate_steady_state(inst.cfg, inst.policy, inst.oos,
                                                       inst.launch, fixed.prop);
    CHECK(eval.plane.fill_rate >= 0.98);
    CHECK(eval.parking.fill_rate >= 0.98);
    const auto disposal =
        economics::mean_time_to_disposal(eval, inst.cfg, inst.policy, inst.oos);
    CHECK(disposal.t_d_years <= 30.0);
  }

  const auto again = sample_validation_instances(5, TradeSpace{}, FixedParams{}, 7);
  REQUIRE(again.instances.size() == 5);
  CHECK(again.attempts == result.attempts);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& a = again.instances[i];
    const auto& b = result.instances[i];
    CHECK(a.cfg.n_plane == b.cfg.n_plane);
    CHECK(a.cfg.n_sat == b.cfg.n_sat);
    CHECK(a.cfg.sat_failure_rate == b.cfg.sat_failure_rate);
    CHECK(a.cfg.plane_orbit.altitude_km == b.cfg.plane_orbit.altitude_km);
    CHECK(a.policy.s == b.policy.s);
    CHECK(a.policy.q == b.policy.q);
    CHECK(a.policy.k_s == b.policy.k_s);
    CHECK(a.policy.k_q == b.policy.k_q);
    CHECK(a.policy.n_oos == b.policy.n_oos);
    CHECK(a.policy.parking_orbit.altitude_km == b.policy.parking_orbit.altitude_km);
    CHECK(a.oos.r_oos == b.oos.r_oos);
    CHECK(a.oos.mu_oos == b.oos.mu_oos);
    CHECK(a.launch.t_lau == b.launch.t_lau);
    CHECK(a.launch.psi_lau == b.launch.psi_lau);
    CHECK(a.launch.capacity == b.launch.capacity);
  }

  CHECK(sample_validation_instances(0, TradeSpace{}, FixedParams{}, 7).instances.empty());

  FixedParams impossible;
  impossible.beta_plane_req = 1.0 + 1e-9;
  CHECK_THROWS_AS(sample_validation_instances(1, TradeSpace{}, impossible, 7, 50),
                  SamplingExhausted);
}
