#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "constel/economics.hpp"
#include "constel/inventory.hpp"

namespace constel::simulator {

struct SimConfig {
  double horizon_years = 60.0;
  int step_days = 1;
  int replications = 100;
  double warmup_years = 5.0;
  std::uint64_t rng_seed = 0;
  // Run the satellite-conservation audit on ten sampled days.
  bool audit = false;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

// One replication's post-warmup estimates. Stocks are per plane or per
// parking orbit, frequencies per year, t_d in years, amc in $M/year.
struct ReplicationRecord {
  double s_plane = 0.0;
  double s_parking = 0.0;
  double s_wait = 0.0;
  double f_plane = 0.0;
  double f_parking = 0.0;
  double f_oos = 0.0;
  double beta_plane = 1.0;
  double beta_parking = 1.0;
  double t_d_years = 0.0;
  double amc = 0.0;

  long long failures = 0;
  long long disposals = 0;
  long long services_started = 0;
  long long services_completed = 0;
  long long orders_plane = 0;
  long long launches = 0;
  long long batch_misses = 0;
  long long all_empty_waits = 0;
  bool audit_ok = true;
};

inline constexpr std::array<const char*, 10> kMetricNames = {
    "s_plane", "s_parking", "s_wait",      "f_plane",      "f_parking",
    "f_oos",   "beta_plane", "beta_parking", "t_d_years",    "amc"};

// Extracts the ten tracked metrics in kMetricNames order.
std::array<double, 10> metric_values(const ReplicationRecord& record);

struct MetricStats {
  double mean = 0.0;
  // NaN with a single replication (no spread information).
  double std_error = 0.0;
};

struct SimulationEstimate {
  std::array<MetricStats, 10> metrics;
  int replications = 0;
  std::vector<ReplicationRecord> records;
};

// Simulates the full chain day by day with the given seed. Deterministic;
// failure counts use the fleet-size rate lambda_sat * N_sat regardless of
// momentary backorders, matching the analytical demand process.
ReplicationRecord run_replication(const inventory::ConstellationConfig& cfg,
                                  const inventory::ReplenishmentPolicy& policy,
                                  const inventory::OOSTerms& oos,
                                  const inventory::LaunchService& launch,
                                  const orbital::PropulsionSpec& prop,
                                  const economics::CostParams& costs, const SimConfig& sim,
                                  std::uint64_t seed);

// Runs sim.replications independent replications, seeds split from
// sim.rng_seed by replication index. jobs > 1 runs them on worker threads;
// records land in index order so the estimate is identical either way.
SimulationEstimate estimate(const inventory::ConstellationConfig& cfg,
                            const inventory::ReplenishmentPolicy& policy,
                            const inventory::OOSTerms& oos,
                            const inventory::LaunchService& launch,
                            const orbital::PropulsionSpec& prop,
                            const economics::CostParams& costs, const SimConfig& sim,
                            int jobs = 1);

struct ValidationRow {
  std::string metric;
  double model = 0.0;
  double sim = 0.0;
  double error = 0.0; // percent for relative rows, %p for fill rates
  bool relative = true;
  bool defined = true; // false when the simulated mean of a relative row is 0
};

// Per-metric error table: relative |sim-model|/sim*100 for the eight scale
// metrics, absolute |sim-model|*100 (%p) for the two fill rates.
std::vector<ValidationRow> validation_errors(const inventory::EvaluationResult& analytic,
                                             const economics::CostParams& costs,
                                             const SimulationEstimate& sim);

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Range&, const Range&) = default;
};

struct IntRange {
  int lo = 0;
  int hi = 0;

  friend bool operator==(const IntRange&, const IntRange&) = default;
};

// Sampled ranges for the validation study. Defaults reproduce the published
// protocol; integers sample uniformly on the closed integer range, reals
// uniformly on the closed interval.
struct TradeSpace {
  Range t_lau{4.0, 16.0};            // weeks
  Range launch_wait{4.0, 16.0};      // mean stochastic delay 1/psi, weeks
  Range h_plane{500.0, 2000.0};      // km
  Range h_parking{400.0, 1000.0};    // km
  Range inclination{40.0, 80.0};     // deg
  Range sat_failure_rate{0.01, 0.2}; // per year
  IntRange n_plane{20, 40};
  IntRange n_parking{1, 20};
  IntRange n_sat{20, 60};
  IntRange s{1, 20};
  IntRange q{1, 40};
  IntRange k_s{1, 20};
  IntRange k_q{1, 40};
  Range mttr{1.0, 12.0}; // 1/mu_oos, weeks
  Range r_oos{0.1, 0.9};
  IntRange n_oos{1, 4};

  friend bool operator==(const TradeSpace&, const TradeSpace&) = default;
};

// Parameters held fixed across validation instances.
struct FixedParams {
  economics::CostParams costs{67.0, 0.5, 0.5, 0.01, 2.0, 0};
  orbital::PropulsionSpec prop{150.0, 1200.0, 1.3e-6};
  double lifespan_years = 30.0;
  double n_t = 52.0;
  double beta_plane_req = 0.98;
  double beta_parking_req = 0.98;

  friend bool operator==(const FixedParams&, const FixedParams&) = default;
};

struct ValidationInstance {
  inventory::ConstellationConfig cfg;
  inventory::ReplenishmentPolicy policy;
  inventory::OOSTerms oos;
  inventory::LaunchService launch;
};

struct SampleResult {
  std::vector<ValidationInstance> instances;
  long long attempts = 0;
  long long rejected = 0;
};

// Rejection-samples the trade space until `count` instances pass the
// analytical screening: both fill rates at their floors, disposal within the
// lifespan, s <= Q, and k_s <= k_Q. Throws SamplingExhausted past
// max_attempts draws.
SampleResult sample_validation_instances(int count, const TradeSpace& trade_space,
                                         const FixedParams& fixed, std::uint64_t seed,
                                         long long max_attempts = 100000);

}  // namespace constel::simulator
