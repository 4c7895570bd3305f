#include "constel/optimizer.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>

namespace constel::optimizer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Keeps oos_service_cost off its pole when a bound sits exactly at the ideal
// response time.
constexpr double kMttrMargin = 1e-6;

// Candidates outside the model's structural domain (a parking orbit at the
// plane altitude, a diverging integrand) rank below every candidate with
// finite violations.
constexpr double kStructuralPenalty = 1e12;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

bool coin(std::mt19937_64& rng) { return uniform01(rng) < 0.5; }

struct IntGene {
  int DecisionVector::* value;
  IntRange Bounds::* range;
};

struct RealGene {
  double DecisionVector::* value;
  Range Bounds::* range;
};

constexpr std::array<IntGene, 6> kIntGenes = {{
    {&DecisionVector::s, &Bounds::s},
    {&DecisionVector::q, &Bounds::q},
    {&DecisionVector::k_s, &Bounds::k_s},
    {&DecisionVector::k_q, &Bounds::k_q},
    {&DecisionVector::n_oos, &Bounds::n_oos},
    {&DecisionVector::n_parking, &Bounds::n_parking},
}};

constexpr std::array<RealGene, 3> kRealGenes = {{
    {&DecisionVector::h_parking, &Bounds::h_parking},
    {&DecisionVector::p_oos, &Bounds::p_oos},
    {&DecisionVector::mttr, &Bounds::mttr},
}};

static_assert(kIntGenes.size() + kRealGenes.size() == kGeneCount);

void check_bounds(const Bounds& bounds) {
  for (const auto& gene : kIntGenes) {
    const auto& range = bounds.*(gene.range);
    if (range.lo > range.hi || range.lo < 1) {
      throw std::invalid_argument("integer decision bounds must be ordered and positive");
    }
  }
  for (const auto& gene : kRealGenes) {
    const auto& range = bounds.*(gene.range);
    if (!(range.lo <= range.hi)) {
      throw std::invalid_argument("continuous decision bounds must be ordered");
    }
  }
}

void check_config(const NsgaConfig& config) {
  if (config.population < 2) {
    throw std::invalid_argument("population must hold at least two candidates");
  }
  if (config.generations < 1) throw std::invalid_argument("generation budget must be positive");
  if (!(config.crossover_prob >= 0.0 && config.crossover_prob <= 1.0) ||
      !(config.mutation_prob >= 0.0 && config.mutation_prob <= 1.0)) {
    throw std::invalid_argument("variation probabilities must lie in [0, 1]");
  }
}

auto decision_key(const DecisionVector& d) {
  return std::tuple(d.s, d.q, d.k_s, d.k_q, d.n_oos, d.n_parking, d.h_parking, d.p_oos,
                    d.mttr);
}

bool decision_less(const DecisionVector& a, const DecisionVector& b) {
  return decision_key(a) < decision_key(b);
}

// Shared evaluation path. The ceiling and the price-coverage check vary by
// problem: the operator problem drops both, the provider problems keep them.
Evaluation evaluate_against(const DecisionVector& d, const ScenarioParams& in,
                            double amc_ref, bool price_check) {
  inventory::ReplenishmentPolicy policy;
  policy.s = d.s;
  policy.q = d.q;
  policy.k_s = d.k_s;
  policy.k_q = d.k_q;
  policy.n_oos = d.n_oos;
  policy.n_parking = d.n_parking;
  policy.parking_orbit = in.cfg.plane_orbit;
  policy.parking_orbit.altitude_km = d.h_parking;

  inventory::OOSTerms oos;
  oos.r_oos = in.r_oos;
  oos.mu_oos = 1.0 / d.mttr;
  oos.p_oos = d.p_oos;

  economics::CostParams costs = in.costs;
  costs.p_oos = d.p_oos;
  costs.q_max = in.launch.capacity;

  const bool services = in.r_oos > 0.0;
  const double service_cost =
      services ? economics::oos_service_cost(d.mttr, in.cr)
               : std::numeric_limits<double>::quiet_NaN();

  Evaluation out;
  out.analytic = inventory::evaluate_steady_state(in.cfg, policy, oos, in.launch, in.prop);
  out.cost = economics::annual_maintenance_cost(out.analytic, costs, out.analytic.fuel_kg);
  out.disposal = economics::mean_time_to_disposal(out.analytic, in.cfg, policy, oos);

  economics::Requirements requirements;
  requirements.beta_plane_req = in.beta_plane_req;
  requirements.beta_parking_req = in.beta_parking_req;
  requirements.amc_ref = amc_ref;
  if (services && price_check) requirements.c_oos = service_cost;
  out.report = economics::feasibility_check(out.analytic, in.cfg, policy, costs, requirements);

  out.point.amc = out.cost.amc;
  out.point.ap =
      services ? economics::oos_annual_profit(out.analytic, d.p_oos, service_cost) : 0.0;
  out.point.constraint_violations.reserve(out.report.checks.size());
  for (const auto& check : out.report.checks) {
    out.point.constraint_violations.push_back(check.violation);
  }
  out.point.feasible = out.report.feasible;
  return out;
}

ObjectivePoint structural_sentinel() {
  ObjectivePoint point;
  point.amc = kStructuralPenalty;
  point.ap = -kStructuralPenalty;
  point.constraint_violations = {kStructuralPenalty};
  return point;
}

ObjectivePoint evaluate_candidate(const DecisionVector& d, const ScenarioParams& in,
                                  double amc_ref, bool price_check) {
  try {
    ObjectivePoint point = evaluate_against(d, in, amc_ref, price_check).point;
    if (!std::isfinite(point.amc) || !std::isfinite(point.ap)) return structural_sentinel();
    return point;
  } catch (const Error&) {
    return structural_sentinel();
  } catch (const std::invalid_argument&) {
    return structural_sentinel();
  }
}

struct Candidate {
  DecisionVector decision;
  ObjectivePoint point;
};

void evaluate_all(std::vector<Candidate>& pop, const ScenarioParams& in, double amc_ref,
                  bool price_check, int jobs) {
  const int n = static_cast<int>(pop.size());
  const int workers = std::clamp(jobs, 1, n);
  if (workers == 1) {
    for (auto& candidate : pop) {
      candidate.point = evaluate_candidate(candidate.decision, in, amc_ref, price_check);
    }
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        auto& candidate = pop[static_cast<std::size_t>(i)];
        candidate.point = evaluate_candidate(candidate.decision, in, amc_ref, price_check);
      }
    });
  }
  for (auto& worker : pool) worker.join();
}

std::vector<ObjectivePoint> points_of(const std::vector<Candidate>& pop) {
  std::vector<ObjectivePoint> points;
  points.reserve(pop.size());
  for (const auto& candidate : pop) points.push_back(candidate.point);
  return points;
}

DecisionVector random_decision(const Bounds& bounds, std::mt19937_64& rng) {
  DecisionVector d;
  for (const auto& gene : kIntGenes) {
    const auto& range = bounds.*(gene.range);
    d.*(gene.value) = std::uniform_int_distribution<int>(range.lo, range.hi)(rng);
  }
  for (const auto& gene : kRealGenes) {
    const auto& range = bounds.*(gene.range);
    d.*(gene.value) = range.lo < range.hi
                          ? std::uniform_real_distribution<double>(range.lo, range.hi)(rng)
                          : range.lo;
  }
  return d;
}

// Deb's bounded simulated binary crossover on one gene pair; one spread draw
// feeds both children, each contracted toward its own bound.
void sbx_pair(double& a, double& b, double lo, double hi, double eta,
              std::mt19937_64& rng) {
  if (std::abs(a - b) < 1e-14) return;
  const double y1 = std::min(a, b);
  const double y2 = std::max(a, b);
  const double u = uniform01(rng);
  const auto spread = [&](double edge) {
    const double beta = 1.0 + 2.0 * edge / (y2 - y1);
    const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
    if (u <= 1.0 / alpha) return std::pow(u * alpha, 1.0 / (eta + 1.0));
    return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
  };
  double c1 = 0.5 * (y1 + y2 - spread(y1 - lo) * (y2 - y1));
  double c2 = 0.5 * (y1 + y2 + spread(hi - y2) * (y2 - y1));
  c1 = std::clamp(c1, lo, hi);
  c2 = std::clamp(c2, lo, hi);
  if (coin(rng)) std::swap(c1, c2);
  a = c1;
  b = c2;
}

void polynomial_mutate(double& value, double lo, double hi, double eta,
                       std::mt19937_64& rng) {
  const double span = hi - lo;
  if (!(span > 0.0)) return;
  const double u = uniform01(rng);
  const double power = 1.0 / (eta + 1.0);
  double delta;
  if (u < 0.5) {
    const double xy = 1.0 - (value - lo) / span;
    delta = std::pow(2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0), power) - 1.0;
  } else {
    const double xy = 1.0 - (hi - value) / span;
    delta =
        1.0 - std::pow(2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta + 1.0), power);
  }
  value = std::clamp(value + delta * span, lo, hi);
}

// Steps +-k with the geometric tail P(k) = 2^-k, so moves are mostly +-1 but
// occasionally escape a one-wide basin.
void integer_mutate(int& value, int lo, int hi, std::mt19937_64& rng) {
  if (lo >= hi) {
    value = lo;
    return;
  }
  int step = 1;
  const int span = hi - lo;
  while (step < span && coin(rng)) ++step;
  value = std::clamp(coin(rng) ? value + step : value - step, lo, hi);
}

void crossover(DecisionVector& a, DecisionVector& b, const Bounds& bounds, double eta,
               std::mt19937_64& rng) {
  for (const auto& gene : kIntGenes) {
    if (coin(rng)) std::swap(a.*(gene.value), b.*(gene.value));
  }
  for (const auto& gene : kRealGenes) {
    const auto& range = bounds.*(gene.range);
    if (range.lo < range.hi && coin(rng)) {
      sbx_pair(a.*(gene.value), b.*(gene.value), range.lo, range.hi, eta, rng);
    }
  }
}

void mutate(DecisionVector& d, const Bounds& bounds, const NsgaConfig& config,
            std::mt19937_64& rng) {
  for (const auto& gene : kIntGenes) {
    const auto& range = bounds.*(gene.range);
    if (uniform01(rng) < config.mutation_prob) {
      integer_mutate(d.*(gene.value), range.lo, range.hi, rng);
    }
  }
  for (const auto& gene : kRealGenes) {
    const auto& range = bounds.*(gene.range);
    if (uniform01(rng) < config.mutation_prob) {
      polynomial_mutate(d.*(gene.value), range.lo, range.hi, config.eta_mutation, rng);
    }
  }
}

// Crowding distances for one front, indexed by position within the front.
// Boundary points are infinite; interior points sum normalized neighbor gaps
// over both objectives.
std::vector<double> crowding_distance(const std::vector<ObjectivePoint>& points,
                                      const std::vector<std::size_t>& front) {
  const std::size_t n = front.size();
  std::vector<double> distance(n, 0.0);
  if (n <= 2) {
    std::fill(distance.begin(), distance.end(), kInf);
    return distance;
  }
  const auto accumulate = [&](auto key) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double ka = key(points[front[a]]);
      const double kb = key(points[front[b]]);
      return ka < kb || (ka == kb && front[a] < front[b]);
    });
    distance[order.front()] = kInf;
    distance[order.back()] = kInf;
    const double span =
        key(points[front[order.back()]]) - key(points[front[order.front()]]);
    if (!(span > 0.0)) return;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      distance[order[i]] +=
          (key(points[front[order[i + 1]]]) - key(points[front[order[i - 1]]])) / span;
    }
  };
  accumulate([](const ObjectivePoint& p) { return p.amc; });
  accumulate([](const ObjectivePoint& p) { return p.ap; });
  return distance;
}

struct Ranked {
  std::vector<int> rank;
  std::vector<double> crowding;
};

Ranked rank_population(const std::vector<ObjectivePoint>& points) {
  Ranked out;
  out.rank.assign(points.size(), 0);
  out.crowding.assign(points.size(), 0.0);
  const auto fronts = fast_non_dominated_sort(points);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    const auto distance = crowding_distance(points, fronts[f]);
    for (std::size_t i = 0; i < fronts[f].size(); ++i) {
      out.rank[fronts[f][i]] = static_cast<int>(f);
      out.crowding[fronts[f][i]] = distance[i];
    }
  }
  return out;
}

// Crowded binary tournament; the first pick wins exact ties.
std::size_t tournament(const Ranked& ranked, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, ranked.rank.size() - 1);
  const std::size_t a = pick(rng);
  const std::size_t b = pick(rng);
  if (ranked.rank[a] != ranked.rank[b]) return ranked.rank[a] < ranked.rank[b] ? a : b;
  if (ranked.crowding[a] != ranked.crowding[b]) {
    return ranked.crowding[a] > ranked.crowding[b] ? a : b;
  }
  return a;
}

template <typename Select>
std::vector<Candidate> make_offspring(const std::vector<Candidate>& pop, Select select,
                                      const Bounds& bounds, const NsgaConfig& config,
                                      std::mt19937_64& rng) {
  const int n = static_cast<int>(pop.size());
  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(out.size()) < n) {
    DecisionVector a = pop[select(rng)].decision;
    DecisionVector b = pop[select(rng)].decision;
    if (uniform01(rng) < config.crossover_prob) {
      crossover(a, b, bounds, config.eta_crossover, rng);
    }
    mutate(a, bounds, config, rng);
    mutate(b, bounds, config, rng);
    out.push_back({a, {}});
    if (static_cast<int>(out.size()) < n) out.push_back({b, {}});
  }
  return out;
}

// Elitist environmental selection: whole fronts while they fit, then the
// most crowded members of the split front.
std::vector<Candidate> truncate_by_fronts(std::vector<Candidate> merged, int target) {
  const auto points = points_of(merged);
  const auto fronts = fast_non_dominated_sort(points);
  std::vector<Candidate> next;
  next.reserve(static_cast<std::size_t>(target));
  for (const auto& front : fronts) {
    if (static_cast<int>(next.size()) == target) break;
    if (static_cast<int>(next.size() + front.size()) <= target) {
      for (const std::size_t i : front) next.push_back(merged[i]);
      continue;
    }
    const auto distance = crowding_distance(points, front);
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return distance[a] > distance[b] || (distance[a] == distance[b] && front[a] < front[b]);
    });
    for (std::size_t k = 0; static_cast<int>(next.size()) < target; ++k) {
      next.push_back(merged[front[order[k]]]);
    }
    break;
  }
  return next;
}

FrontEntry make_entry(const DecisionVector& d, const Evaluation& eval) {
  FrontEntry entry;
  entry.decision = d;
  entry.point = eval.point;
  entry.cost = eval.cost;
  entry.beta_plane = eval.analytic.plane.fill_rate;
  entry.beta_parking = eval.analytic.parking.fill_rate;
  entry.gamma0 = eval.analytic.gamma.gamma.empty() ? 1.0 : eval.analytic.gamma.gamma.front();
  entry.t_d_years = eval.disposal.t_d_years;
  return entry;
}

// Minimizes f over [lo, hi] by golden section, returning the best sampled
// point. f may be infinite where a candidate is infeasible; the endpoints
// are sampled explicitly so a boundary optimum is never missed.
template <typename F>
std::pair<double, double> golden_min(F f, double lo, double hi, double tol) {
  constexpr double kRatio = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double x1 = b - kRatio * (b - a);
  double x2 = a + kRatio * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  double best_x = f1 <= f2 ? x1 : x2;
  double best_f = std::min(f1, f2);
  for (const double edge : {lo, hi}) {
    const double fe = f(edge);
    if (fe < best_f) {
      best_f = fe;
      best_x = edge;
    }
  }
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kRatio * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kRatio * (b - a);
      f2 = f(x2);
    }
    if (f1 < best_f) {
      best_f = f1;
      best_x = x1;
    }
    if (f2 < best_f) {
      best_f = f2;
      best_x = x2;
    }
  }
  return {best_x, best_f};
}

// Strict improvement for the single-objective operator problem.
bool p1_better(const ObjectivePoint& a, const ObjectivePoint& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (!a.feasible) return total_violation(a) < total_violation(b);
  return a.amc < b.amc;
}

}  // namespace

Bounds default_bounds(const ScenarioParams& scenario) {
  Bounds bounds;
  const int q_max = std::max(1, scenario.launch.capacity);
  bounds.q = {1, q_max};
  bounds.k_q = {1, q_max};
  bounds.p_oos = {scenario.cr.c_min, scenario.cr.c_min + 5.0};
  const double ideal = scenario.cr.mu_ideal > 0.0 ? 1.0 / scenario.cr.mu_ideal : 0.0;
  bounds.mttr = {ideal + kMttrMargin, 12.0};
  return bounds;
}

double total_violation(const ObjectivePoint& point) {
  double total = 0.0;
  for (const double v : point.constraint_violations) total += v;
  return total;
}

bool dominates(const ObjectivePoint& a, const ObjectivePoint& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (!a.feasible) return total_violation(a) < total_violation(b);
  return a.amc <= b.amc && a.ap >= b.ap && (a.amc < b.amc || a.ap > b.ap);
}

Evaluation evaluate_decision(const DecisionVector& decision, const ScenarioParams& scenario) {
  return evaluate_against(decision, scenario, scenario.amc_ref, true);
}

std::vector<std::vector<std::size_t>> fast_non_dominated_sort(
    const std::vector<ObjectivePoint>& points) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> fronts;
  if (n == 0) return fronts;
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<int> blockers(n, 0);
  fronts.emplace_back();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (dominates(points[i], points[j])) {
        dominated[i].push_back(j);
      } else if (dominates(points[j], points[i])) {
        ++blockers[i];
      }
    }
    if (blockers[i] == 0) fronts.front().push_back(i);
  }
  while (!fronts.back().empty()) {
    std::vector<std::size_t> next;
    for (const std::size_t i : fronts.back()) {
      for (const std::size_t j : dominated[i]) {
        if (--blockers[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

double hypervolume(const std::vector<ObjectivePoint>& points, double ref_amc,
                   double ref_ap) {
  std::vector<std::pair<double, double>> inside;
  for (const auto& point : points) {
    if (point.feasible && point.amc < ref_amc && point.ap > ref_ap) {
      inside.emplace_back(point.amc, point.ap);
    }
  }
  std::sort(inside.begin(), inside.end());
  double area = 0.0;
  double best_ap = ref_ap;
  for (std::size_t i = 0; i < inside.size(); ++i) {
    best_ap = std::max(best_ap, inside[i].second);
    const double next_amc = i + 1 < inside.size() ? inside[i + 1].first : ref_amc;
    area += (next_amc - inside[i].first) * (best_ap - ref_ap);
  }
  return area;
}

FrontEntry solve_p1(const ScenarioParams& scenario, double p_oos, double mttr,
                    const Bounds& bounds, const NsgaConfig& config) {
  check_config(config);
  Bounds frozen = bounds;
  frozen.p_oos = {p_oos, p_oos};
  frozen.mttr = {mttr, mttr};
  check_bounds(frozen);

  const auto evaluate = [&](std::vector<Candidate>& pop) {
    evaluate_all(pop, scenario, kInf, false, config.jobs);
  };
  // The best fill-rate configurations sit on isolated feasible islands
  // surrounded by cheap candidates whose fills fall short by well under a
  // point; a strictly feasible-first rule would purge those neighbors and
  // strand the search on whichever island it saw first. Candidates inside
  // the shell tolerance therefore compare by cost, everything beyond it by
  // violation.
  constexpr double kShellTolerance = 0.05;
  const auto rank_before = [](const Candidate& a, const Candidate& b) {
    const double va = total_violation(a.point);
    const double vb = total_violation(b.point);
    const bool a_near = va <= kShellTolerance;
    const bool b_near = vb <= kShellTolerance;
    if (a_near != b_near) return a_near;
    if (a_near) {
      if (a.point.amc != b.point.amc) return a.point.amc < b.point.amc;
      if (va != vb) return va < vb;
      return decision_less(a.decision, b.decision);
    }
    if (va != vb) return va < vb;
    if (a.point.amc != b.point.amc) return a.point.amc < b.point.amc;
    return decision_less(a.decision, b.decision);
  };

  std::optional<Candidate> incumbent;
  const auto note_incumbent = [&](const std::vector<Candidate>& v) {
    for (const auto& candidate : v) {
      if (!candidate.point.feasible) continue;
      if (!incumbent || p1_better(candidate.point, incumbent->point)) {
        incumbent = candidate;
      }
    }
  };

  // Normalized gene distance for pairing children with parents.
  const auto gene_distance = [&](const DecisionVector& a, const DecisionVector& b) {
    double dist = 0.0;
    for (const auto& gene : kIntGenes) {
      const auto& range = frozen.*(gene.range);
      const double span = std::max(1, range.hi - range.lo);
      dist += std::abs(a.*(gene.value) - b.*(gene.value)) / span;
    }
    for (const auto& gene : kRealGenes) {
      const auto& range = frozen.*(gene.range);
      if (range.lo < range.hi) {
        dist += std::abs(a.*(gene.value) - b.*(gene.value)) / (range.hi - range.lo);
      }
    }
    return dist;
  };

  std::mt19937_64 rng(splitmix64(config.seed));
  std::vector<Candidate> pop(static_cast<std::size_t>(config.population));
  for (auto& candidate : pop) candidate.decision = random_decision(frozen, rng);
  evaluate(pop);
  note_incumbent(pop);

  // Deterministic crowding: each child competes only against the nearer of
  // its two parents, so distinct batch configurations evolve side by side
  // instead of collapsing onto whichever cluster takes an early lead.
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Candidate> children(pop.size() & ~std::size_t{1});
  for (int gen = 0; gen < config.generations; ++gen) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k + 1 < pop.size(); k += 2) {
      DecisionVector a = pop[order[k]].decision;
      DecisionVector b = pop[order[k + 1]].decision;
      if (uniform01(rng) < config.crossover_prob) {
        crossover(a, b, frozen, config.eta_crossover, rng);
      }
      mutate(a, frozen, config, rng);
      mutate(b, frozen, config, rng);
      children[k] = {a, {}};
      children[k + 1] = {b, {}};
    }
    evaluate(children);
    note_incumbent(children);
    for (std::size_t k = 0; k + 1 < pop.size(); k += 2) {
      Candidate& pa = pop[order[k]];
      Candidate& pb = pop[order[k + 1]];
      const Candidate& ca = children[k];
      const Candidate& cb = children[k + 1];
      const double straight = gene_distance(pa.decision, ca.decision) +
                              gene_distance(pb.decision, cb.decision);
      const double crossed = gene_distance(pa.decision, cb.decision) +
                             gene_distance(pb.decision, ca.decision);
      if (straight <= crossed) {
        if (rank_before(ca, pa)) pa = ca;
        if (rank_before(cb, pb)) pb = cb;
      } else {
        if (rank_before(cb, pa)) pa = cb;
        if (rank_before(ca, pb)) pb = ca;
      }
    }
  }
  std::sort(pop.begin(), pop.end(), rank_before);

  if (!incumbent) {
    throw NoFeasibleSolution("no feasible policy within the generation budget");
  }

  // Refinement descends until nothing in the +-1 integer box, no +-5 km
  // altitude move, and no altitude line search improves the incumbent. The
  // full box (all 3^6 combinations) lets coordinated moves cross cost
  // ridges that block single-coordinate descent.
  const auto probe = [&](const DecisionVector& d) {
    return evaluate_candidate(d, scenario, kInf, false);
  };
  const auto descend = [&](Candidate best) {
    bool improved = true;
    while (improved) {
      improved = false;
      Candidate champion = best;
      // The best altitude shifts with the integer configuration (the
      // in-plane fill limit moves with s and k_s), so every candidate gets
      // its own coarse line search before the comparison.
      const auto consider = [&](DecisionVector d) {
        auto point = probe(d);
        const auto at_h = [&](double h) {
          DecisionVector e = d;
          e.h_parking = h;
          const auto p = probe(e);
          return p.feasible ? p.amc : kInf;
        };
        const auto [h, amc] =
            golden_min(at_h, frozen.h_parking.lo, frozen.h_parking.hi, 0.5);
        if (amc < kInf) {
          DecisionVector e = d;
          e.h_parking = h;
          const auto polished = probe(e);
          if (p1_better(polished, point)) {
            d = e;
            point = polished;
          }
        }
        if (p1_better(point, champion.point)) champion = {d, point};
      };
      for (int code = 0; code < 729; ++code) {
        DecisionVector d = best.decision;
        int digits = code;
        bool inside = true;
        bool moved = false;
        for (const auto& gene : kIntGenes) {
          const int delta = digits % 3 - 1;
          digits /= 3;
          if (delta == 0) continue;
          moved = true;
          const auto& range = frozen.*(gene.range);
          d.*(gene.value) += delta;
          if (d.*(gene.value) < range.lo || d.*(gene.value) > range.hi) {
            inside = false;
            break;
          }
        }
        if (moved && inside) consider(d);
      }
      if (p1_better(champion.point, best.point)) {
        best = champion;
        improved = true;
      }
      for (const double delta : {-5.0, 5.0}) {
        DecisionVector d = best.decision;
        d.h_parking += delta;
        if (d.h_parking < frozen.h_parking.lo || d.h_parking > frozen.h_parking.hi) continue;
        const auto point = probe(d);
        if (p1_better(point, best.point)) {
          best = {d, point};
          improved = true;
        }
      }
      const auto cost_at = [&](double h) {
        DecisionVector d = best.decision;
        d.h_parking = h;
        const auto point = probe(d);
        return point.feasible ? point.amc : kInf;
      };
      const auto [h, amc] =
          golden_min(cost_at, frozen.h_parking.lo, frozen.h_parking.hi, 1e-4);
      if (amc < kInf) {
        DecisionVector d = best.decision;
        d.h_parking = h;
        const auto polished = probe(d);
        if (p1_better(polished, best.point)) {
          best = {d, polished};
          improved = true;
        }
      }
    }
    return best;
  };

  // The leading ranks mix the cheapest feasible survivors with cheap,
  // marginally infeasible ones; a start just off a feasible island usually
  // climbs onto it. Starts stay at least two integer steps apart so several
  // clusters get refined rather than one cluster many times.
  Candidate best = descend(*incumbent);
  std::vector<DecisionVector> seen = {incumbent->decision};
  for (const auto& candidate : pop) {
    if (seen.size() > 4) break;
    const auto near = [&](const DecisionVector& d) {
      int linf = 0;
      for (const auto& gene : kIntGenes) {
        linf = std::max(linf,
                        std::abs(candidate.decision.*(gene.value) - d.*(gene.value)));
      }
      return linf <= 1;
    };
    if (std::any_of(seen.begin(), seen.end(), near)) continue;
    seen.push_back(candidate.decision);
    const Candidate refined = descend(candidate);
    if (p1_better(refined.point, best.point)) best = refined;
  }

  // Competitive plans fill the launcher, and the full (q, k_q) pairs sit
  // far apart in the lattice (4 batches of 10 versus 5 batches of 8), so
  // +-1 descent cannot migrate between them. Each full shape seeds one
  // extra climb from the incumbent with its spare batches rescaled to the
  // new batch size; descent then pulls the seed onto that basin's island.
  if (scenario.launch.capacity > 0) {
    std::vector<std::pair<int, int>> shapes;  // k_q with the largest q mapping to it
    for (int q = frozen.q.lo; q <= frozen.q.hi; ++q) {
      const int k_q = std::clamp(scenario.launch.capacity / std::max(1, q),
                                 frozen.k_q.lo, frozen.k_q.hi);
      const auto match = std::find_if(shapes.begin(), shapes.end(),
                                      [&](const auto& s) { return s.first == k_q; });
      if (match == shapes.end()) {
        shapes.emplace_back(k_q, q);
      } else {
        match->second = std::max(match->second, q);
      }
    }
    for (const auto& [k_q, q] : shapes) {
      DecisionVector d = incumbent->decision;
      if (q == d.q && k_q == d.k_q) continue;
      const double scale = static_cast<double>(k_q) / std::max(1, d.k_q);
      d.k_s = std::clamp(static_cast<int>(std::lround(d.k_s * scale)), frozen.k_s.lo,
                         std::max(frozen.k_s.lo, std::min(frozen.k_s.hi, k_q)));
      d.s = std::clamp(d.s, frozen.s.lo,
                       std::max(frozen.s.lo, std::min(frozen.s.hi, q)));
      d.q = q;
      d.k_q = k_q;
      const Candidate refined = descend({d, probe(d)});
      if (p1_better(refined.point, best.point)) best = refined;
    }
  }

  return make_entry(best.decision, evaluate_against(best.decision, scenario, kInf, false));
}

FrontEntry solve_p2(const ScenarioParams& scenario, const DecisionVector& policy,
                    const Bounds& bounds, const P2Config& config) {
  if (config.grid < 2) throw std::invalid_argument("mttr grid needs at least two cells");
  if (!(config.tolerance_weeks > 0.0)) {
    throw std::invalid_argument("mttr tolerance must be positive");
  }
  const double ideal = scenario.cr.mu_ideal > 0.0 ? 1.0 / scenario.cr.mu_ideal : 0.0;
  const double lo = std::max(bounds.mttr.lo, ideal + kMttrMargin);
  const double hi = bounds.mttr.hi;
  if (!(hi >= lo)) throw std::invalid_argument("mttr range is empty");

  // Nudges the closed-form ceiling price down so the recomputed cost stays
  // strictly under amc_ref despite rounding.
  constexpr double kPriceSlack = 1e-9;

  struct Probe {
    bool feasible = false;
    double ap = -kInf;
    double p = 0.0;
  };
  const auto probe = [&](double mttr) -> Probe {
    Probe out;
    DecisionVector d = policy;
    d.mttr = mttr;
    d.p_oos = bounds.p_oos.lo;
    Evaluation base;
    try {
      base = evaluate_against(d, scenario, kInf, false);
    } catch (const Error&) {
      return out;
    } catch (const std::invalid_argument&) {
      return out;
    }
    // The cost is linear in the price: amc(p) = amc0 + p * calls.
    const double calls = base.analytic.f_oos * scenario.cfg.n_plane;
    const double amc0 = base.cost.amc - d.p_oos * calls;
    double price_cap = bounds.p_oos.hi;
    if (calls > 0.0) {
      if (std::isfinite(scenario.amc_ref)) {
        price_cap = std::min(price_cap, (scenario.amc_ref - amc0) / calls - kPriceSlack);
      }
    } else if (amc0 > scenario.amc_ref) {
      return out;
    }
    const double cost = scenario.r_oos > 0.0
                            ? economics::oos_service_cost(mttr, scenario.cr)
                            : scenario.cr.c_min;
    const double price_floor = std::max(bounds.p_oos.lo, cost);
    if (price_cap < price_floor) return out;
    out.feasible = true;
    out.p = price_cap;
    out.ap = (price_cap - cost) * calls;
    return out;
  };

  double best_mttr = lo;
  Probe best;
  const int cells = config.grid;
  for (int i = 0; i < cells; ++i) {
    const double mttr =
        cells > 1 ? lo + (hi - lo) * i / static_cast<double>(cells - 1) : lo;
    const Probe at = probe(mttr);
    if (at.feasible && (!best.feasible || at.ap > best.ap)) {
      best = at;
      best_mttr = mttr;
    }
  }
  if (!best.feasible) {
    throw NoFeasibleSolution("no responsiveness level lets the price cover its cost");
  }

  const double step = cells > 1 ? (hi - lo) / static_cast<double>(cells - 1) : 0.0;
  const double bracket_lo = std::max(lo, best_mttr - step);
  const double bracket_hi = std::min(hi, best_mttr + step);
  if (bracket_hi > bracket_lo) {
    const auto loss = [&](double mttr) {
      const Probe at = probe(mttr);
      return at.feasible ? -at.ap : kInf;
    };
    const auto [mttr, neg_ap] =
        golden_min(loss, bracket_lo, bracket_hi, config.tolerance_weeks);
    if (-neg_ap > best.ap) {
      best_mttr = mttr;
      best = probe(mttr);
    }
  }

  DecisionVector d = policy;
  d.mttr = best_mttr;
  d.p_oos = best.p;
  return make_entry(d, evaluate_decision(d, scenario));
}

ParetoFront solve_p3(const ScenarioParams& scenario, const Bounds& bounds,
                     const NsgaConfig& config) {
  check_config(config);
  check_bounds(bounds);

  std::mt19937_64 rng(splitmix64(config.seed));
  std::vector<Candidate> pop(static_cast<std::size_t>(config.population));
  for (auto& candidate : pop) candidate.decision = random_decision(bounds, rng);
  evaluate_all(pop, scenario, scenario.amc_ref, true, config.jobs);

  ParetoFront out;
  const auto record_hypervolume = [&] {
    if (!std::isfinite(scenario.amc_ref)) return;
    out.hypervolume_history.push_back(hypervolume(points_of(pop), scenario.amc_ref, 0.0));
  };
  record_hypervolume();

  Ranked ranked = rank_population(points_of(pop));
  for (int gen = 0; gen < config.generations; ++gen) {
    const auto select = [&](std::mt19937_64& r) { return tournament(ranked, r); };
    auto offspring = make_offspring(pop, select, bounds, config, rng);
    evaluate_all(offspring, scenario, scenario.amc_ref, true, config.jobs);
    pop.insert(pop.end(), offspring.begin(), offspring.end());
    pop = truncate_by_fronts(std::move(pop), config.population);
    ranked = rank_population(points_of(pop));
    record_hypervolume();
  }

  std::vector<DecisionVector> archive;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (ranked.rank[i] == 0 && pop[i].point.feasible) archive.push_back(pop[i].decision);
  }
  if (archive.empty()) {
    throw NoFeasibleSolution("no feasible candidate within the generation budget");
  }
  std::sort(archive.begin(), archive.end(), decision_less);
  archive.erase(std::unique(archive.begin(), archive.end()), archive.end());

  out.entries.reserve(archive.size());
  for (const auto& decision : archive) {
    out.entries.push_back(make_entry(decision, evaluate_decision(decision, scenario)));
  }
  std::sort(out.entries.begin(), out.entries.end(), [](const FrontEntry& a, const FrontEntry& b) {
    if (a.point.amc != b.point.amc) return a.point.amc < b.point.amc;
    if (a.point.ap != b.point.ap) return a.point.ap > b.point.ap;
    return decision_less(a.decision, b.decision);
  });
  return out;
}

}  // namespace constel::optimizer
