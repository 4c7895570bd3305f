#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "constel/scenario.hpp"

namespace {

using nlohmann::ordered_json;
using namespace constel;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string fmt(double v, int decimals) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, v);
  return buffer;
}

// Prints one value when the band collapses, otherwise "[lo, hi]" like the
// published result tables.
std::string fmt_band(double lo, double hi, int decimals) {
  const std::string a = fmt(lo, decimals);
  const std::string b = fmt(hi, decimals);
  if (a == b) return a;
  return "[" + a + ", " + b + "]";
}

using Rows = std::vector<std::pair<std::string, std::string>>;

std::string render_table(const Rows& rows) {
  std::size_t label_width = 0;
  std::size_t value_width = 0;
  for (const auto& [label, value] : rows) {
    if (!value.empty()) label_width = std::max(label_width, label.size());
    value_width = std::max(value_width, value.size());
  }
  std::string out;
  for (const auto& [label, value] : rows) {
    if (value.empty()) {
      out += label;
      out += "\n";
      continue;
    }
    out += label;
    out.append(label_width - label.size() + 2, ' ');
    out.append(value_width - value.size(), ' ');
    out += value;
    out += "\n";
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Collects this run's artifacts so the closing manifest lists exactly the
// files that were written.
class RunOutputs {
 public:
  explicit RunOutputs(std::string dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir_);
    const std::filesystem::path path = std::filesystem::path(dir_) / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw Error(path.string() + ": write failure");
    names_.push_back(name);
  }

  void write_manifest(const std::string& prefix, const std::string& input_bytes,
                      std::vector<std::uint64_t> seeds) {
    const auto manifest =
        scenario::make_manifest(input_bytes, std::move(seeds), names_);
    write(prefix + ".manifest.json", scenario::serialize(manifest));
  }

 private:
  std::string dir_;
  std::vector<std::string> names_;
};

ordered_json decision_json(const optimizer::DecisionVector& d) {
  return {
      {"s", d.s},
      {"q", d.q},
      {"k_s", d.k_s},
      {"k_q", d.k_q},
      {"n_oos", d.n_oos},
      {"n_parking", d.n_parking},
      {"h_parking_km", d.h_parking},
      {"p_oos_musd", d.p_oos},
      {"mttr_weeks", d.mttr},
  };
}

ordered_json cost_json(const economics::CostBreakdown& c) {
  return {
      {"launch", c.a_lau},       {"maneuver", c.a_maneuv}, {"manufacturing", c.a_manufac},
      {"holding", c.a_hold},     {"oos", c.a_oos},         {"total", c.amc},
  };
}

ordered_json disposal_json(const economics::DisposalTimeBreakdown& t) {
  return {
      {"parking_weeks", t.t_parking}, {"transfer_weeks", t.t_trans},
      {"plane_weeks", t.t_plane},     {"operational_weeks", t.t_opr},
      {"oos_weeks", t.t_oos},         {"total_weeks", t.t_d},
      {"years", t.t_d_years},
  };
}

ordered_json echelon_json(const inventory::EchelonMetrics& m) {
  return {
      {"mean_stock", m.mean_stock},
      {"order_frequency_per_year", m.order_frequency},
      {"expected_shortage", m.expected_shortage},
      {"fill_rate", m.fill_rate},
  };
}

ordered_json feasibility_json(const economics::FeasibilityReport& report) {
  ordered_json checks = ordered_json::array();
  for (const auto& check : report.checks) {
    checks.push_back({{"name", check.name}, {"pass", check.pass}, {"violation", check.violation}});
  }
  return {{"feasible", report.feasible}, {"checks", std::move(checks)}};
}

ordered_json evaluation_json(const optimizer::Evaluation& ev) {
  const auto& a = ev.analytic;
  return {
      {"decision", decision_json({a.policy.s, a.policy.q, a.policy.k_s, a.policy.k_q,
                                  a.policy.n_oos, a.policy.n_parking,
                                  a.policy.parking_orbit.altitude_km, a.oos.p_oos,
                                  a.oos.mu_oos > 0.0 ? 1.0 / a.oos.mu_oos : 0.0})},
      {"objectives", {{"amc_musd_per_year", ev.point.amc}, {"ap_musd_per_year", ev.point.ap}}},
      {"cost_musd_per_year", cost_json(ev.cost)},
      {"disposal", disposal_json(ev.disposal)},
      {"steady_state",
       {
           {"gamma0", a.gamma.gamma.empty() ? 1.0 : a.gamma.gamma.front()},
           {"gamma", a.gamma.gamma},
           {"wait_stock_per_plane", a.gamma.s_wait_total},
           {"lambda_plane_per_week", a.lambda_plane},
           {"lambda_parking_per_week", a.lambda_parking},
           {"synodic_period_weeks", a.synodic_period_weeks},
           {"delta_v_km_s", a.delta_v_km_s},
           {"fuel_kg", a.fuel_kg},
           {"transfer_time_weeks", a.t_trans_weeks},
           {"mean_lead_plane_weeks", a.mean_lead_plane_weeks},
           {"mean_lead_parking_weeks", a.mean_lead_parking_weeks},
           {"plane", echelon_json(a.plane)},
           {"parking", echelon_json(a.parking)},
           {"service_frequency_per_plane_year", a.f_oos},
       }},
      {"feasibility", feasibility_json(ev.report)},
  };
}

Rows evaluation_rows(const optimizer::Evaluation& ev) {
  const auto& a = ev.analytic;
  const double gamma0 = a.gamma.gamma.empty() ? 1.0 : a.gamma.gamma.front();
  Rows rows;
  rows.emplace_back("Result, Unit", "Value");
  rows.emplace_back("Decision Variables", "");
  rows.emplace_back("s, satellites", std::to_string(a.policy.s));
  rows.emplace_back("Q, satellites", std::to_string(a.policy.q));
  rows.emplace_back("k_s, -", std::to_string(a.policy.k_s));
  rows.emplace_back("k_Q, -", std::to_string(a.policy.k_q));
  rows.emplace_back("N_parking, planes", std::to_string(a.policy.n_parking));
  rows.emplace_back("h_parking, km", fmt(a.policy.parking_orbit.altitude_km, 1));
  rows.emplace_back("N_oos, -", std::to_string(a.policy.n_oos));
  rows.emplace_back("p_oos, $M", fmt(a.oos.p_oos, 2));
  rows.emplace_back("1/mu_oos, weeks",
                    fmt(a.oos.mu_oos > 0.0 ? 1.0 / a.oos.mu_oos : 0.0, 2));
  rows.emplace_back("Performance Outputs", "");
  rows.emplace_back("AMC, $M/year", fmt(ev.point.amc, 1));
  rows.emplace_back("AP, $M/year", fmt(ev.point.ap, 1));
  rows.emplace_back("A_lau, $M/year", fmt(ev.cost.a_lau, 1));
  rows.emplace_back("A_maneuv, $M/year", fmt(ev.cost.a_maneuv, 1));
  rows.emplace_back("A_hold, $M/year", fmt(ev.cost.a_hold, 1));
  rows.emplace_back("A_manufac, $M/year", fmt(ev.cost.a_manufac, 1));
  rows.emplace_back("A_oos, $M/year", fmt(ev.cost.a_oos, 1));
  rows.emplace_back("t_d/N_t, years", fmt(ev.disposal.t_d_years, 1));
  rows.emplace_back("beta_plane, %", fmt(a.plane.fill_rate * 100.0, 1));
  rows.emplace_back("beta_parking, %", fmt(a.parking.fill_rate * 100.0, 1));
  rows.emplace_back("gamma_0, %", fmt(gamma0 * 100.0, 1));
  rows.emplace_back("Feasibility", "");
  for (const auto& check : ev.report.checks) {
    rows.emplace_back(check.name,
                      check.pass ? "pass" : "violated (" + fmt(check.violation * 100.0, 2) + "%)");
  }
  rows.emplace_back("overall", ev.report.feasible ? "feasible" : "infeasible");
  return rows;
}

// ---------------------------------------------------------------- evaluate

int cmd_evaluate(const std::string& scenario_path, const std::string& decision_path,
                 const std::string& out_dir) {
  const std::string scenario_bytes = read_file(scenario_path);
  const auto file = scenario::parse_scenario_text(scenario_bytes, scenario_path);
  const auto decision = scenario::parse_decision(decision_path);
  const auto ev = optimizer::evaluate_decision(decision, scenario::solver_params(file));

  const std::string table = render_table(evaluation_rows(ev));
  RunOutputs outputs(out_dir);
  outputs.write("evaluate.json", evaluation_json(ev).dump(2) + "\n");
  outputs.write("evaluate.txt", table);
  outputs.write_manifest("evaluate", scenario_bytes, {});

  std::cout << table;
  if (!ev.report.feasible) {
    std::cout << "violated:";
    for (const auto& check : ev.report.checks) {
      if (!check.pass) std::cout << " " << check.name;
    }
    std::cout << "\n";
  }
  return ev.report.feasible ? 0 : 3;
}

// ---------------------------------------------------------------- simulate

simulator::SimConfig apply_sim_flags(simulator::SimConfig sim, int replications, double years,
                                     double warmup, bool seed_given, std::uint64_t seed) {
  if (replications >= 0) sim.replications = replications;
  if (!std::isnan(years)) sim.horizon_years = years;
  if (!std::isnan(warmup)) sim.warmup_years = warmup;
  if (seed_given) sim.rng_seed = seed;
  if (sim.replications < 1) throw UsageError("--replications must be at least 1");
  if (!(sim.horizon_years > 0.0)) throw UsageError("--years must be positive");
  if (sim.warmup_years < 0.0) throw UsageError("--warmup-years must be non-negative");
  if (sim.warmup_years >= sim.horizon_years) {
    throw UsageError("--warmup-years must end before the horizon");
  }
  return sim;
}

int cmd_simulate(const std::string& scenario_path, const std::string& decision_path,
                 const std::string& out_dir, const simulator::SimConfig& overridden, int jobs) {
  const std::string scenario_bytes = read_file(scenario_path);
  const auto file = scenario::parse_scenario_text(scenario_bytes, scenario_path);
  const auto d = scenario::parse_decision(decision_path);

  inventory::ReplenishmentPolicy policy;
  policy.s = d.s;
  policy.q = d.q;
  policy.k_s = d.k_s;
  policy.k_q = d.k_q;
  policy.n_oos = d.n_oos;
  policy.n_parking = d.n_parking;
  policy.parking_orbit = file.cfg.plane_orbit;
  policy.parking_orbit.altitude_km = d.h_parking;

  inventory::OOSTerms oos;
  oos.r_oos = file.r_oos;
  oos.mu_oos = d.mttr > 0.0 ? 1.0 / d.mttr : 0.0;
  oos.p_oos = d.p_oos;

  economics::CostParams costs = file.costs;
  costs.p_oos = d.p_oos;
  costs.q_max = file.launch.capacity_sats;

  const auto est = simulator::estimate(file.cfg, policy, oos, scenario::launch_service(file),
                                       file.prop, costs, overridden, jobs);

  ordered_json metrics;
  Rows rows;
  rows.emplace_back("Metric", "Mean        StdErr");
  for (std::size_t i = 0; i < simulator::kMetricNames.size(); ++i) {
    const auto& stat = est.metrics[i];
    metrics[simulator::kMetricNames[i]] = {{"mean", stat.mean}, {"std_error", stat.std_error}};
    rows.emplace_back(simulator::kMetricNames[i],
                      fmt(stat.mean, 4) + "  " + fmt(stat.std_error, 4));
  }
  ordered_json result = {
      {"config",
       {
           {"replications", overridden.replications},
           {"years", overridden.horizon_years},
           {"warmup_years", overridden.warmup_years},
           {"step_days", overridden.step_days},
           {"seed", overridden.rng_seed},
           {"jobs", jobs},
       }},
      {"decision", decision_json(d)},
      {"metrics", std::move(metrics)},
  };

  std::string csv =
      "replication,s_plane,s_parking,s_wait,f_plane,f_parking,f_oos,beta_plane,beta_parking,"
      "t_d_years,amc,failures,disposals,services_started,services_completed,orders_plane,"
      "launches,batch_misses,all_empty_waits\n";
  for (int i = 0; i < est.replications; ++i) {
    const auto& rec = est.records[static_cast<std::size_t>(i)];
    csv += std::to_string(i);
    for (const double v : simulator::metric_values(rec)) csv += "," + fmt17(v);
    for (const long long v : {rec.failures, rec.disposals, rec.services_started,
                              rec.services_completed, rec.orders_plane, rec.launches,
                              rec.batch_misses, rec.all_empty_waits}) {
      csv += "," + std::to_string(v);
    }
    csv += "\n";
  }

  const std::string table = render_table(rows);
  RunOutputs outputs(out_dir);
  outputs.write("simulate.json", result.dump(2) + "\n");
  outputs.write("simulate.replications.csv", csv);
  outputs.write_manifest("simulate", scenario_bytes, {overridden.rng_seed});

  std::cout << table;
  return 0;
}

// ---------------------------------------------------------------- validate

struct MetricErrorRow {
  std::string metric;
  bool relative = true;
  double sum = 0.0;
  int count = 0;
};

int cmd_validate(const std::string& fixed_path, const std::string& space_path, int count,
                 std::uint64_t seed, const simulator::SimConfig& sim, int jobs,
                 const std::string& out_dir) {
  if (count < 1) throw UsageError("--count must be at least 1");
  const std::string fixed_bytes = read_file(fixed_path);
  const std::string space_bytes = read_file(space_path);
  const auto fixed = scenario::parse_fixed_params(fixed_path);
  const auto space = scenario::parse_trade_space(space_path);

  const auto sample = simulator::sample_validation_instances(count, space, fixed, seed);

  std::vector<MetricErrorRow> means;
  ordered_json instances = ordered_json::array();
  std::vector<std::uint64_t> seeds = {seed};
  std::vector<std::vector<simulator::ValidationRow>> tables;

  for (std::size_t i = 0; i < sample.instances.size(); ++i) {
    const auto& inst = sample.instances[i];
    const auto analytic = inventory::evaluate_steady_state(inst.cfg, inst.policy, inst.oos,
                                                           inst.launch, fixed.prop);
    auto inst_sim = sim;
    inst_sim.rng_seed = seed + 1 + i;
    seeds.push_back(inst_sim.rng_seed);
    const auto est = simulator::estimate(inst.cfg, inst.policy, inst.oos, inst.launch,
                                         fixed.prop, fixed.costs, inst_sim, jobs);
    const auto rows = simulator::validation_errors(analytic, fixed.costs, est);
    tables.push_back(rows);

    ordered_json row_json = ordered_json::array();
    for (const auto& row : rows) {
      row_json.push_back({
          {"metric", row.metric},
          {"model", row.model},
          {"sim", row.sim},
          {"error", row.error},
          {"relative", row.relative},
          {"defined", row.defined},
      });
      auto it = std::find_if(means.begin(), means.end(),
                             [&](const MetricErrorRow& m) { return m.metric == row.metric; });
      if (it == means.end()) {
        means.push_back({row.metric, row.relative, 0.0, 0});
        it = std::prev(means.end());
      }
      if (row.defined) {
        it->sum += row.error;
        it->count += 1;
      }
    }
    instances.push_back({
        {"index", static_cast<int>(i)},
        {"sim_seed", inst_sim.rng_seed},
        {"parameters",
         {
             {"planes", inst.cfg.n_plane},
             {"sats_per_plane", inst.cfg.n_sat},
             {"altitude_km", inst.cfg.plane_orbit.altitude_km},
             {"inclination_deg", inst.cfg.plane_orbit.inclination_deg},
             {"sat_failure_rate_per_year", inst.cfg.sat_failure_rate},
             {"s", inst.policy.s},
             {"q", inst.policy.q},
             {"k_s", inst.policy.k_s},
             {"k_q", inst.policy.k_q},
             {"n_oos", inst.policy.n_oos},
             {"n_parking", inst.policy.n_parking},
             {"h_parking_km", inst.policy.parking_orbit.altitude_km},
             {"serviceable_fraction", inst.oos.r_oos},
             {"mttr_weeks", inst.oos.mu_oos > 0.0 ? 1.0 / inst.oos.mu_oos : 0.0},
             {"order_lead_time_weeks", inst.launch.t_lau},
             {"mean_wait_weeks", inst.launch.psi_lau > 0.0 ? 1.0 / inst.launch.psi_lau : 0.0},
             {"capacity_sats", inst.launch.capacity},
         }},
        {"errors", std::move(row_json)},
    });
  }

  ordered_json mean_json;
  for (const auto& m : means) {
    mean_json[m.metric] = {
        {"mean_error", m.count > 0 ? m.sum / m.count : kNaN},
        {"relative", m.relative},
        {"instances", m.count},
    };
  }

  ordered_json result = {
      {"count", count},
      {"sample", {{"seed", seed}, {"attempts", sample.attempts}, {"rejected", sample.rejected}}},
      {"config",
       {
           {"replications", sim.replications},
           {"years", sim.horizon_years},
           {"warmup_years", sim.warmup_years},
           {"step_days", sim.step_days},
           {"jobs", jobs},
       }},
      {"mean_errors", std::move(mean_json)},
      {"instances", std::move(instances)},
  };

  static const std::map<std::string, std::string> kLabels = {
      {"s_plane", "Mean stock level at in-plane spare"},
      {"s_parking", "Mean stock level at parking spare"},
      {"s_wait", "Mean stock level of failed satellites waiting for service"},
      {"f_plane", "Order frequency at in-plane spare"},
      {"f_parking", "Order frequency at parking spare"},
      {"f_oos", "Service frequency"},
      {"t_d_years", "Mean time to disposal of satellites serviced up to the maximum"},
      {"amc", "Annual maintenance cost"},
      {"beta_plane", "Order fill rate at in-plane spare"},
      {"beta_parking", "Order fill rate at parking spare"},
  };
  Rows rows;
  rows.emplace_back("Result", "Mean Error");
  rows.emplace_back("Relative Errors (%)", "");
  for (const auto& m : means) {
    if (!m.relative) continue;
    const auto it = kLabels.find(m.metric);
    rows.emplace_back((it != kLabels.end() ? it->second : m.metric) + "  [" + m.metric + "]",
                      m.count > 0 ? fmt(m.sum / m.count, 2) : "n/a");
  }
  rows.emplace_back("Absolute Errors (%p)", "");
  for (const auto& m : means) {
    if (m.relative) continue;
    const auto it = kLabels.find(m.metric);
    rows.emplace_back((it != kLabels.end() ? it->second : m.metric) + "  [" + m.metric + "]",
                      m.count > 0 ? fmt(m.sum / m.count, 2) : "n/a");
  }
  std::string text = render_table(rows);
  text += "\nPer-instance errors\n";
  std::string header = "instance";
  if (!tables.empty()) {
    for (const auto& row : tables.front()) header += "," + row.metric;
  }
  text += header + "\n";
  for (std::size_t i = 0; i < tables.size(); ++i) {
    std::string line = std::to_string(i);
    for (const auto& row : tables[i]) {
      line += ",";
      line += row.defined ? fmt(row.error, 4) : "n/a";
    }
    text += line + "\n";
  }

  RunOutputs outputs(out_dir);
  outputs.write("validate.json", result.dump(2) + "\n");
  outputs.write("validate.txt", text);
  outputs.write_manifest("validate", fixed_bytes + space_bytes, std::move(seeds));

  std::cout << text;
  return 0;
}

// ---------------------------------------------------------------- optimize

ordered_json entry_json(const optimizer::FrontEntry& entry) {
  return {
      {"decision", decision_json(entry.decision)},
      {"amc_musd_per_year", entry.point.amc},
      {"ap_musd_per_year", entry.point.ap},
      {"cost_musd_per_year", cost_json(entry.cost)},
      {"beta_plane", entry.beta_plane},
      {"beta_parking", entry.beta_parking},
      {"gamma0", entry.gamma0},
      {"t_d_years", entry.t_d_years},
  };
}

std::string front_csv(const optimizer::ParetoFront& front) {
  std::string csv =
      "s,q,k_s,k_q,n_oos,n_parking,h_parking_km,p_oos_musd,mttr_weeks,amc,ap,a_lau,a_maneuv,"
      "a_manufac,a_hold,a_oos,beta_plane,beta_parking,gamma0,t_d_years\n";
  for (const auto& entry : front.entries) {
    const auto& d = entry.decision;
    csv += std::to_string(d.s) + "," + std::to_string(d.q) + "," + std::to_string(d.k_s) + "," +
           std::to_string(d.k_q) + "," + std::to_string(d.n_oos) + "," +
           std::to_string(d.n_parking) + "," + fmt17(d.h_parking) + "," + fmt17(d.p_oos) + "," +
           fmt17(d.mttr) + "," + fmt17(entry.point.amc) + "," + fmt17(entry.point.ap) + "," +
           fmt17(entry.cost.a_lau) + "," + fmt17(entry.cost.a_maneuv) + "," +
           fmt17(entry.cost.a_manufac) + "," + fmt17(entry.cost.a_hold) + "," +
           fmt17(entry.cost.a_oos) + "," + fmt17(entry.beta_plane) + "," +
           fmt17(entry.beta_parking) + "," + fmt17(entry.gamma0) + "," +
           fmt17(entry.t_d_years) + "\n";
  }
  return csv;
}

Rows front_summary_rows(const optimizer::ParetoFront& front) {
  struct Band {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void note(double v) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  };
  Band s, q, k_s, k_q, n_parking, h, n_oos, p, mttr;
  Band amc, ap, a_lau, a_hold, a_manufac, a_oos, t_d, beta_plane, beta_parking, gamma0;
  for (const auto& e : front.entries) {
    s.note(e.decision.s);
    q.note(e.decision.q);
    k_s.note(e.decision.k_s);
    k_q.note(e.decision.k_q);
    n_parking.note(e.decision.n_parking);
    h.note(e.decision.h_parking);
    n_oos.note(e.decision.n_oos);
    p.note(e.decision.p_oos);
    mttr.note(e.decision.mttr);
    amc.note(e.point.amc);
    ap.note(e.point.ap);
    a_lau.note(e.cost.a_lau);
    a_hold.note(e.cost.a_hold);
    a_manufac.note(e.cost.a_manufac);
    a_oos.note(e.cost.a_oos);
    t_d.note(e.t_d_years);
    beta_plane.note(e.beta_plane * 100.0);
    beta_parking.note(e.beta_parking * 100.0);
    gamma0.note(e.gamma0 * 100.0);
  }
  Rows rows;
  rows.emplace_back("Result, Unit", "Range");
  rows.emplace_back("Decision Variables", "");
  rows.emplace_back("s, satellites", fmt_band(s.lo, s.hi, 0));
  rows.emplace_back("Q, satellites", fmt_band(q.lo, q.hi, 0));
  rows.emplace_back("k_s, -", fmt_band(k_s.lo, k_s.hi, 0));
  rows.emplace_back("k_Q, -", fmt_band(k_q.lo, k_q.hi, 0));
  rows.emplace_back("N_parking, planes", fmt_band(n_parking.lo, n_parking.hi, 0));
  rows.emplace_back("h_parking, km", fmt_band(h.lo, h.hi, 1));
  rows.emplace_back("N_oos, -", fmt_band(n_oos.lo, n_oos.hi, 0));
  rows.emplace_back("p_oos, $M", fmt_band(p.lo, p.hi, 1));
  rows.emplace_back("1/mu_oos, weeks", fmt_band(mttr.lo, mttr.hi, 1));
  rows.emplace_back("Performance Outputs", "");
  rows.emplace_back("AMC, $M/year", fmt_band(amc.lo, amc.hi, 1));
  rows.emplace_back("AP, $M/year", fmt_band(ap.lo, ap.hi, 1));
  rows.emplace_back("A_lau, $M/year", fmt_band(a_lau.lo, a_lau.hi, 1));
  rows.emplace_back("A_hold, $M/year", fmt_band(a_hold.lo, a_hold.hi, 1));
  rows.emplace_back("A_manufac, $M/year", fmt_band(a_manufac.lo, a_manufac.hi, 1));
  rows.emplace_back("A_oos, $M/year", fmt_band(a_oos.lo, a_oos.hi, 1));
  rows.emplace_back("t_d/N_t, years", fmt_band(t_d.lo, t_d.hi, 1));
  rows.emplace_back("beta_plane, %", fmt_band(beta_plane.lo, beta_plane.hi, 1));
  rows.emplace_back("beta_parking, %", fmt_band(beta_parking.lo, beta_parking.hi, 1));
  rows.emplace_back("gamma_0, %", fmt_band(gamma0.lo, gamma0.hi, 1));
  return rows;
}

int cmd_optimize(const std::string& problem, const std::string& scenario_path,
                 const std::string& decision_path, double p_oos_flag, double mttr_flag,
                 bool seed_given, std::uint64_t seed, int population, int generations, int jobs,
                 const std::string& out_dir) {
  if (problem != "p1" && problem != "p2" && problem != "p3") {
    throw UsageError("unknown problem '" + problem + "'; valid problems are p1, p2, p3");
  }
  const std::string scenario_bytes = read_file(scenario_path);
  const auto file = scenario::parse_scenario_text(scenario_bytes, scenario_path);
  const auto sp = scenario::solver_params(file);
  const auto bounds = scenario::solver_bounds(file);

  auto config = file.nsga;
  if (seed_given) config.seed = seed;
  if (population > 0) config.population = population;
  if (generations > 0) config.generations = generations;
  config.jobs = jobs;

  RunOutputs outputs(out_dir);

  if (problem == "p1") {
    // Default quote: the slowest admissible service at its cost-covering
    // price, the cheapest terms a provider can sustain.
    double mttr = std::isnan(mttr_flag) ? bounds.mttr.hi : mttr_flag;
    if (!(mttr > (sp.cr.mu_ideal > 0.0 ? 1.0 / sp.cr.mu_ideal : 0.0)) || mttr <= 0.0) {
      throw UsageError("--mttr must exceed the ideal response time");
    }
    double p_oos = p_oos_flag;
    if (std::isnan(p_oos)) {
      p_oos = sp.r_oos > 0.0 ? economics::oos_service_cost(mttr, sp.cr) : 0.0;
    }
    if (p_oos < 0.0) throw UsageError("--p-oos must be non-negative");

    const auto entry = optimizer::solve_p1(sp, p_oos, mttr, bounds, config);
    const auto ev = optimizer::evaluate_decision(entry.decision, sp);
    ordered_json result = {
        {"problem", "p1"},
        {"quote", {{"p_oos_musd", p_oos}, {"mttr_weeks", mttr}}},
        {"config",
         {{"population", config.population},
          {"generations", config.generations},
          {"seed", config.seed}}},
        {"solution", entry_json(entry)},
    };
    const std::string table = render_table(evaluation_rows(ev));
    outputs.write("optimize_p1.json", result.dump(2) + "\n");
    outputs.write("optimize_p1.txt", table);
    outputs.write_manifest("optimize_p1", scenario_bytes, {config.seed});
    std::cout << table;
    return 0;
  }

  if (problem == "p2") {
    if (decision_path.empty()) {
      throw UsageError("optimize p2 requires --decision with the operator policy to freeze");
    }
    const auto policy = scenario::parse_decision(decision_path);
    const auto entry = optimizer::solve_p2(sp, policy, bounds);
    ordered_json result = {
        {"problem", "p2"},
        {"policy", decision_json(policy)},
        {"solution", entry_json(entry)},
    };
    Rows rows;
    rows.emplace_back("Result, Unit", "Value");
    rows.emplace_back("p_oos, $M", fmt(entry.decision.p_oos, 4));
    rows.emplace_back("1/mu_oos, weeks", fmt(entry.decision.mttr, 4));
    rows.emplace_back("AP, $M/year", fmt(entry.point.ap, 1));
    rows.emplace_back("AMC, $M/year", fmt(entry.point.amc, 1));
    const std::string table = render_table(rows);
    outputs.write("optimize_p2.json", result.dump(2) + "\n");
    outputs.write("optimize_p2.txt", table);
    outputs.write_manifest("optimize_p2", scenario_bytes, {});
    std::cout << table;
    return 0;
  }

  const auto front = optimizer::solve_p3(sp, bounds, config);
  ordered_json entries = ordered_json::array();
  for (const auto& entry : front.entries) entries.push_back(entry_json(entry));
  ordered_json result = {
      {"problem", "p3"},
      {"config",
       {{"population", config.population},
        {"generations", config.generations},
        {"seed", config.seed}}},
      {"hypervolume", front.hypervolume_history},
      {"entries", std::move(entries)},
  };
  std::string plot = "amc,ap\n";
  for (const auto& entry : front.entries) {
    plot += fmt17(entry.point.amc) + "," + fmt17(entry.point.ap) + "\n";
  }
  const std::string table =
      "Pareto front: " + std::to_string(front.entries.size()) + " solutions\n" +
      render_table(front_summary_rows(front));
  outputs.write("optimize_p3.front.csv", front_csv(front));
  outputs.write("optimize_p3.front.json", result.dump(2) + "\n");
  outputs.write("optimize_p3.plot.csv", plot);
  outputs.write("optimize_p3.txt", table);
  outputs.write_manifest("optimize_p3", scenario_bytes, {config.seed});
  std::cout << table;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maintenance strategy evaluation for OOS-supported satellite constellations"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string decision_path;
  std::string out_dir = ".";
  int jobs = 1;
  int replications = -1;
  double years = kNaN;
  double warmup = kNaN;
  std::uint64_t seed = 0;

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate one decision vector analytically");
  evaluate->add_option("scenario", scenario_path, "Scenario file")->required();
  evaluate->add_option("--decision", decision_path, "Decision vector file")->required();
  evaluate->add_option("--out", out_dir, "Output directory");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation of one decision vector");
  simulate->add_option("scenario", scenario_path, "Scenario file")->required();
  simulate->add_option("--decision", decision_path, "Decision vector file")->required();
  simulate->add_option("--replications", replications, "Replication count");
  simulate->add_option("--years", years, "Horizon in years");
  simulate->add_option("--warmup-years", warmup, "Warm-up span excluded from estimates");
  auto* sim_seed = simulate->add_option("--seed", seed, "Simulation seed");
  simulate->add_option("--jobs", jobs, "Worker threads")->envname("CONSTEL_MAINT_JOBS");
  simulate->add_option("--out", out_dir, "Output directory");

  std::string fixed_path;
  std::string space_path;
  int count = 25;
  auto* validate = app.add_subcommand("validate", "Model-versus-simulation error study");
  validate->add_option("fixed", fixed_path, "Fixed-parameter file")->required();
  validate->add_option("trade_space", space_path, "Sampled trade-space file")->required();
  validate->add_option("--count", count, "Feasible instances to sample");
  auto* val_seed = validate->add_option("--seed", seed, "Sampling seed");
  validate->add_option("--replications", replications, "Replications per instance");
  validate->add_option("--years", years, "Horizon in years");
  validate->add_option("--warmup-years", warmup, "Warm-up span excluded from estimates");
  validate->add_option("--jobs", jobs, "Worker threads")->envname("CONSTEL_MAINT_JOBS");
  validate->add_option("--out", out_dir, "Output directory");

  std::string problem;
  double p_oos_flag = kNaN;
  double mttr_flag = kNaN;
  int population = 0;
  int generations = 0;
  auto* optimize = app.add_subcommand("optimize", "Solve p1, p2, or p3 on a scenario");
  optimize->add_option("problem", problem, "One of p1, p2, p3")->required();
  optimize->add_option("scenario", scenario_path, "Scenario file")->required();
  optimize->add_option("--decision", decision_path, "Operator policy to freeze (p2)");
  optimize->add_option("--p-oos", p_oos_flag, "Quoted service price for p1");
  optimize->add_option("--mttr", mttr_flag, "Quoted response time for p1, weeks");
  auto* opt_seed = optimize->add_option("--seed", seed, "Search seed");
  optimize->add_option("--population", population, "Population override");
  optimize->add_option("--generations", generations, "Generation override");
  optimize->add_option("--jobs", jobs, "Worker threads")->envname("CONSTEL_MAINT_JOBS");
  optimize->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 2;
  }

  try {
    if (jobs < 1) throw UsageError("--jobs must be at least 1");
    if (evaluate->parsed()) {
      return cmd_evaluate(scenario_path, decision_path, out_dir);
    }
    if (simulate->parsed()) {
      const auto file_sim =
          scenario::parse_scenario(scenario_path).sim;
      const auto sim = apply_sim_flags(file_sim, replications, years, warmup,
                                       sim_seed->count() > 0, seed);
      return cmd_simulate(scenario_path, decision_path, out_dir, sim, jobs);
    }
    if (validate->parsed()) {
      simulator::SimConfig sim;
      sim.replications = 100;
      sim.horizon_years = 60.0;
      sim.warmup_years = 15.0;
      sim = apply_sim_flags(sim, replications, years, warmup, false, 0);
      if (val_seed->count() == 0) seed = 0;
      return cmd_validate(fixed_path, space_path, count, seed, sim, jobs, out_dir);
    }
    return cmd_optimize(problem, scenario_path, decision_path, p_oos_flag, mttr_flag,
                        opt_seed->count() > 0, seed, population, generations, jobs, out_dir);
  } catch (const ScenarioError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  } catch (const SamplingExhausted& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 4;
  } catch (const NoFeasibleSolution& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 4;
  } catch (const Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 4;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 4;
  }
}
