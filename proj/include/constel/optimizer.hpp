#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "constel/economics.hpp"
#include "constel/inventory.hpp"

namespace constel::optimizer {

// Everything the solvers hold fixed: the constellation, the launch service,
// cost rates, the provider's cost-responsiveness curve, and the operator's
// requirements. costs.p_oos and costs.q_max are derived per candidate (the
// price from the decision, the capacity from the launch service).
struct ScenarioParams {
  inventory::ConstellationConfig cfg;
  inventory::LaunchService launch;
  orbital::PropulsionSpec prop;
  economics::CostParams costs;
  economics::CostResponsivenessParams cr;
  double r_oos = 0.0;
  double beta_plane_req = 0.98;
  double beta_parking_req = 0.98;
  // Cost ceiling for the provider problems; infinity disables it.
  double amc_ref = std::numeric_limits<double>::infinity();
};

// One candidate strategy: the operator's replenishment genes plus the
// provider's price and responsiveness. mu_oos = 1/mttr.
struct DecisionVector {
  int s = 1;
  int q = 1;
  int k_s = 1;
  int k_q = 1;
  int n_oos = 1;
  int n_parking = 1;
  double h_parking = 500.0; // km
  double p_oos = 0.5;       // $M per service
  double mttr = 12.0;       // weeks

  friend bool operator==(const DecisionVector&, const DecisionVector&) = default;
};

inline constexpr int kGeneCount = 9;

struct IntRange {
  int lo = 0;
  int hi = 0;

  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Range&, const Range&) = default;
};

// Inclusive decision bounds. mttr.lo must sit strictly above the ideal
// response time 1/mu_ideal or the service cost diverges.
struct Bounds {
  IntRange s{1, 20};
  IntRange q{1, 40};
  IntRange k_s{1, 20};
  IntRange k_q{1, 40};
  IntRange n_oos{1, 4};
  IntRange n_parking{1, 20};
  Range h_parking{500.0, 1000.0};
  Range p_oos{0.5, 5.5};
  Range mttr{2.0 + 1e-6, 12.0};
};

// Published ranges: order quantities capped by the launch capacity, price
// anchored at the minimum service cost, mttr floored just above the ideal
// response time.
Bounds default_bounds(const ScenarioParams& scenario);

struct ObjectivePoint {
  double amc = 0.0; // $M/year, minimized
  double ap = 0.0;  // $M/year, maximized
  // One entry per named feasibility check, zero when satisfied.
  std::vector<double> constraint_violations;
  bool feasible = false;
};

double total_violation(const ObjectivePoint& point);

// Constrained domination: a feasible point beats an infeasible one, two
// infeasibles compare by total violation, two feasibles by (amc down, ap up)
// with at least one strict.
bool dominates(const ObjectivePoint& a, const ObjectivePoint& b);

// Full evaluation of one candidate against the scenario: steady-state model,
// cost and disposal breakdowns, the named feasibility checks, and the
// compressed objective point the solvers rank by. The cost ceiling applies
// when scenario.amc_ref is finite, the price-coverage check when the
// scenario has a service flow (r_oos > 0).
struct Evaluation {
  inventory::EvaluationResult analytic;
  economics::CostBreakdown cost;
  economics::DisposalTimeBreakdown disposal;
  economics::FeasibilityReport report;
  ObjectivePoint point;
};

Evaluation evaluate_decision(const DecisionVector& decision,
                             const ScenarioParams& scenario);

// One solution with the summary figures the result tables report.
struct FrontEntry {
  DecisionVector decision;
  ObjectivePoint point;
  economics::CostBreakdown cost;
  double beta_plane = 1.0;
  double beta_parking = 1.0;
  double gamma0 = 1.0;
  double t_d_years = 0.0;
};

struct ParetoFront {
  // Mutually non-dominated feasible solutions, sorted by ascending amc.
  std::vector<FrontEntry> entries;
  // Dominated area against (amc_ref, 0), one value per population starting
  // with the initial one; empty when amc_ref is infinite.
  std::vector<double> hypervolume_history;
};

struct NsgaConfig {
  int population = 200;
  int generations = 300;
  double crossover_prob = 0.9;
  double mutation_prob = 1.0 / kGeneCount; // per gene
  double eta_crossover = 15.0;             // SBX distribution index
  double eta_mutation = 20.0;              // polynomial mutation index
  std::uint64_t seed = 0;
  int jobs = 1;

  friend bool operator==(const NsgaConfig&, const NsgaConfig&) = default;
};

// Deb's O(M N^2) ranking under constrained domination; fronts[0] holds the
// indices of the non-dominated points, each front in ascending index order.
std::vector<std::vector<std::size_t>> fast_non_dominated_sort(
    const std::vector<ObjectivePoint>& points);

// Area dominated by the feasible points inside the reference box of the
// (minimize amc, maximize ap) pair: the union of the rectangles
// [amc, ref_amc] x [ref_ap, ap].
double hypervolume(const std::vector<ObjectivePoint>& points, double ref_amc,
                   double ref_ap);

// Operator problem: minimize amc over the replenishment genes with the
// provider's quote (p_oos, mttr) frozen. The cost ceiling and the
// price-coverage condition are provider-side and not enforced here. Runs the
// genetic search, then hill-climbs from the incumbent, a handful of well
// separated survivors, and one restart per full launcher batch shape, until
// no +-1 integer move, +-5 km altitude move, or altitude line search
// improves the best point found. Throws NoFeasibleSolution when the search
// never saw a feasible point.
FrontEntry solve_p1(const ScenarioParams& scenario, double p_oos, double mttr,
                    const Bounds& bounds, const NsgaConfig& config);

// Provider problem: maximize ap over (p_oos, mttr) with the operator genes
// of `policy` frozen. For each mttr the profit-maximal price is the smaller
// of the price bound and the cost ceiling, so the search is one-dimensional:
// a grid over the mttr range refined by golden section around the best cell.
// Throws NoFeasibleSolution when no mttr admits a price covering its cost.
struct P2Config {
  int grid = 64;
  double tolerance_weeks = 1e-8;
};

FrontEntry solve_p2(const ScenarioParams& scenario, const DecisionVector& policy,
                    const Bounds& bounds, const P2Config& config = {});

// Bi-objective problem over all nine genes: NSGA-II with SBX and polynomial
// mutation on the continuous genes, uniform crossover and geometric +-steps
// on the integers, constrained-domination sorting, crowding truncation.
// Deterministic for a fixed config; parallel evaluation cannot shift the
// result because the variation stream is consumed sequentially. Throws
// NoFeasibleSolution when the final population has no feasible point.
ParetoFront solve_p3(const ScenarioParams& scenario, const Bounds& bounds,
                     const NsgaConfig& config);

}  // namespace constel::optimizer
