#include "constel/scenario.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <utility>

namespace constel::scenario {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr const char* kSectionNames[] = {
    "constellation", "satellite",       "launch", "oos",    "costs",
    "cost_responsiveness", "requirements", "decision_bounds", "solver", "simulation"};

std::string required_sections_list() {
  std::string out;
  for (const char* name : kSectionNames) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& part : parts) {
    if (!out.empty()) out += "; ";
    out += part;
  }
  return out;
}

// 1-based line of the first `"key"` occurrence at or after `from`; 0 when
// the key does not appear (e.g. it is missing, which is the complaint).
int line_of_key(const std::string& text, const std::string& key, std::size_t from) {
  const std::size_t at = text.find("\"" + key + "\"", from);
  if (at == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(at), '\n'));
}

struct Issues {
  const std::string* text = nullptr;
  std::string origin;
  std::vector<std::string> schema;
  std::vector<std::string> unit;

  std::string tag(const std::string& section, const std::string& key) const {
    std::string path = section;
    if (!key.empty()) path = path.empty() ? key : path + "." + key;
    std::size_t from = 0;
    if (!section.empty()) {
      const std::size_t at = text->find("\"" + section + "\"");
      if (at != std::string::npos) from = at;
    }
    const int line = line_of_key(*text, key.empty() ? section : key, from);
    if (line > 0) path += " (line " + std::to_string(line) + ")";
    return path;
  }

  void add_schema(const std::string& section, const std::string& key, const std::string& msg) {
    schema.push_back(tag(section, key) + ": " + msg);
  }

  void add_unit(const std::string& section, const std::string& key, const std::string& msg) {
    unit.push_back(tag(section, key) + ": " + msg);
  }

  void throw_schema_if_any() const {
    if (!schema.empty()) throw SchemaError(origin + ": " + join(schema));
  }

  void throw_unit_if_any() const {
    if (!unit.empty()) throw UnitError(origin + ": " + join(unit));
  }
};

// One object node with strict key accounting: every accessor marks its key
// consumed, finish() reports the leftovers as unknown.
class Section {
 public:
  Section(const ordered_json* node, std::string label, Issues& issues)
      : node_(node), label_(std::move(label)), issues_(&issues) {}

  bool present() const { return node_ != nullptr; }
  const std::string& label() const { return label_; }

  const ordered_json* fetch(const char* key, bool required) {
    if (!node_) return nullptr;
    seen_.push_back(key);
    const auto it = node_->find(key);
    if (it == node_->end()) {
      if (required) issues_->add_schema(label_, key, "required key is missing");
      return nullptr;
    }
    return &*it;
  }

  Section object(const char* key) {
    const auto* value = fetch(key, true);
    if (!value) return Section(nullptr, key, *issues_);
    if (!value->is_object()) {
      issues_->add_schema(label_, key, "must be an object");
      return Section(nullptr, key, *issues_);
    }
    return Section(value, key, *issues_);
  }

  double real(const char* key) {
    const auto* value = fetch(key, true);
    if (!value) return 0.0;
    if (!value->is_number()) {
      issues_->add_schema(label_, key, "must be a number");
      return 0.0;
    }
    return value->get<double>();
  }

  double real_or(const char* key, double fallback) {
    const auto* value = fetch(key, false);
    if (!value) return fallback;
    if (!value->is_number()) {
      issues_->add_schema(label_, key, "must be a number");
      return fallback;
    }
    return value->get<double>();
  }

  // null stands for "no ceiling" and maps to infinity.
  double real_or_null(const char* key) {
    const auto* value = fetch(key, true);
    if (!value || value->is_null()) return kInf;
    if (!value->is_number()) {
      issues_->add_schema(label_, key, "must be a number or null");
      return kInf;
    }
    return value->get<double>();
  }

  int integer(const char* key, int floor) {
    const auto* value = fetch(key, true);
    return read_int(value, key, floor, floor);
  }

  int integer_or(const char* key, int floor, int fallback) {
    const auto* value = fetch(key, false);
    if (!value) return fallback;
    return read_int(value, key, floor, fallback);
  }

  std::uint64_t seed(const char* key) {
    const auto* value = fetch(key, true);
    if (!value) return 0;
    if (value->is_number_unsigned()) return value->get<std::uint64_t>();
    if (value->is_number_integer() && value->get<long long>() >= 0) {
      return static_cast<std::uint64_t>(value->get<long long>());
    }
    issues_->add_schema(label_, key, "must be a non-negative integer");
    return 0;
  }

  optimizer::IntRange int_range(const char* key) {
    const auto* value = fetch(key, true);
    if (!value) return {1, 1};
    if (!value->is_array() || value->size() != 2 || !(*value)[0].is_number_integer() ||
        !(*value)[1].is_number_integer()) {
      issues_->add_schema(label_, key, "must be an array of two integers [lo, hi]");
      return {1, 1};
    }
    const optimizer::IntRange range{(*value)[0].get<int>(), (*value)[1].get<int>()};
    if (range.lo < 1) {
      issues_->add_schema(label_, key, "lower bound must be at least 1");
    } else if (range.lo > range.hi) {
      issues_->add_schema(label_, key, "inverted range, lower bound exceeds upper bound");
    }
    return range;
  }

  optimizer::Range real_range(const char* key) {
    const auto* value = fetch(key, true);
    if (!value) return {0.0, 0.0};
    if (!value->is_array() || value->size() != 2 || !(*value)[0].is_number() ||
        !(*value)[1].is_number()) {
      issues_->add_schema(label_, key, "must be an array of two numbers [lo, hi]");
      return {0.0, 0.0};
    }
    const optimizer::Range range{(*value)[0].get<double>(), (*value)[1].get<double>()};
    if (range.lo > range.hi) {
      issues_->add_schema(label_, key, "inverted range, lower bound exceeds upper bound");
    }
    return range;
  }

  void finish() {
    if (!node_) return;
    for (auto it = node_->begin(); it != node_->end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
        issues_->add_schema(label_, it.key(), "unknown key");
      }
    }
  }

 private:
  int read_int(const ordered_json* value, const char* key, int floor, int fallback) {
    if (!value) return fallback;
    if (!value->is_number_integer()) {
      issues_->add_schema(label_, key, "must be an integer");
      return fallback;
    }
    const long long raw = value->get<long long>();
    if (raw < floor) {
      issues_->add_schema(label_, key, "must be at least " + std::to_string(floor));
      return fallback;
    }
    if (raw > std::numeric_limits<int>::max()) {
      issues_->add_schema(label_, key, "out of range");
      return fallback;
    }
    return static_cast<int>(raw);
  }

  const ordered_json* node_ = nullptr;
  std::string label_;
  Issues* issues_;
  std::vector<std::string> seen_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw ParseError(path + ": read failure");
  return buffer.str();
}

ordered_json parse_json(const std::string& text, const std::string& origin) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& error) {
    throw ParseError(origin + ": " + error.what());
  }
}

bool blank(const std::string& text) {
  return std::all_of(text.begin(), text.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

void require_positive(Issues& issues, const std::string& section, const char* key, double v) {
  if (!(v > 0.0)) issues.add_unit(section, key, "must be positive");
}

void require_nonnegative(Issues& issues, const std::string& section, const char* key, double v) {
  if (!(v >= 0.0)) issues.add_unit(section, key, "must be non-negative");
}

void require_fraction(Issues& issues, const std::string& section, const char* key, double v) {
  if (!(v >= 0.0 && v <= 1.0)) issues.add_unit(section, key, "must lie in [0, 1]");
}

void require_inclination(Issues& issues, const std::string& section, const char* key, double v) {
  if (!(v >= 0.0 && v <= 180.0)) issues.add_unit(section, key, "must lie in [0, 180] degrees");
}

void check_scenario_values(const ScenarioFile& f, Issues& issues) {
  require_positive(issues, "constellation", "altitude_km", f.cfg.plane_orbit.altitude_km);
  require_inclination(issues, "constellation", "inclination_deg",
                      f.cfg.plane_orbit.inclination_deg);
  require_nonnegative(issues, "constellation", "sat_failure_rate_per_year",
                      f.cfg.sat_failure_rate);
  require_positive(issues, "constellation", "lifespan_years", f.cfg.lifespan_years);
  require_positive(issues, "constellation", "time_units_per_year", f.cfg.n_t);

  require_positive(issues, "satellite", "dry_mass_kg", f.prop.dry_mass_kg);
  require_positive(issues, "satellite", "isp_s", f.prop.isp_s);
  require_positive(issues, "satellite", "fuel_flow_kg_per_s", f.prop.mass_flow_kg_s);

  require_nonnegative(issues, "launch", "order_lead_time_weeks", f.launch.order_lead_time_weeks);
  require_positive(issues, "launch", "mean_wait_weeks", f.launch.mean_wait_weeks);
  require_nonnegative(issues, "launch", "cost_musd", f.launch.cost_musd);

  require_fraction(issues, "oos", "serviceable_fraction", f.r_oos);

  require_nonnegative(issues, "costs", "satellite_musd", f.costs.c_manufac);
  require_nonnegative(issues, "costs", "holding_musd_per_sat_year", f.costs.c_hold);
  require_nonnegative(issues, "costs", "fuel_musd_per_kg", f.costs.eps_fuel);

  require_nonnegative(issues, "cost_responsiveness", "min_cost_musd", f.cr.c_min);
  require_positive(issues, "cost_responsiveness", "ideal_rate_per_week", f.cr.mu_ideal);
  require_positive(issues, "cost_responsiveness", "alpha1", f.cr.alpha1);
  require_positive(issues, "cost_responsiveness", "alpha2", f.cr.alpha2);

  require_fraction(issues, "requirements", "beta_plane_min", f.beta_plane_req);
  require_fraction(issues, "requirements", "beta_parking_min", f.beta_parking_req);
  if (std::isfinite(f.amc_ref)) {
    require_positive(issues, "requirements", "amc_ref_musd_per_year", f.amc_ref);
  }

  require_positive(issues, "decision_bounds", "h_parking_km", f.bounds.h_parking_km.lo);
  require_nonnegative(issues, "decision_bounds", "p_oos_spread_musd", f.bounds.p_oos_spread_musd);
  require_positive(issues, "decision_bounds", "mttr_max_weeks", f.bounds.mttr_max_weeks);

  require_fraction(issues, "solver", "crossover_prob", f.nsga.crossover_prob);
  require_fraction(issues, "solver", "mutation_prob", f.nsga.mutation_prob);
  require_positive(issues, "solver", "eta_crossover", f.nsga.eta_crossover);
  require_positive(issues, "solver", "eta_mutation", f.nsga.eta_mutation);

  require_positive(issues, "simulation", "years", f.sim.horizon_years);
  require_nonnegative(issues, "simulation", "warmup_years", f.sim.warmup_years);

  // Cross-field coherence; both sides were unit-checked above, so only
  // report when the endpoints themselves are sound.
  if (f.cr.mu_ideal > 0.0 && f.bounds.mttr_max_weeks > 0.0 &&
      f.bounds.mttr_max_weeks <= 1.0 / f.cr.mu_ideal) {
    issues.add_schema("decision_bounds", "mttr_max_weeks",
                      "must exceed the ideal response time 1/ideal_rate_per_week");
  }
  if (f.sim.horizon_years > 0.0 && f.sim.warmup_years >= f.sim.horizon_years) {
    issues.add_schema("simulation", "warmup_years", "warm-up must end before the horizon");
  }
}

ScenarioFile parse_scenario_tree(const ordered_json& root, const std::string& text,
                                 const std::string& origin) {
  Issues issues{&text, origin, {}, {}};
  if (!root.is_object()) {
    throw SchemaError(origin + ": top level must be an object with the sections " +
                      required_sections_list());
  }

  ScenarioFile out;
  Section top(&root, "", issues);

  {
    Section sec = top.object("constellation");
    out.cfg.n_plane = sec.integer("planes", 1);
    out.cfg.n_sat = sec.integer("sats_per_plane", 1);
    out.cfg.plane_orbit.altitude_km = sec.real("altitude_km");
    out.cfg.plane_orbit.inclination_deg = sec.real("inclination_deg");
    out.cfg.sat_failure_rate = sec.real("sat_failure_rate_per_year");
    out.cfg.lifespan_years = sec.real("lifespan_years");
    out.cfg.n_t = sec.real_or("time_units_per_year", 52.0);
    sec.finish();
  }
  {
    Section sec = top.object("satellite");
    out.prop.dry_mass_kg = sec.real("dry_mass_kg");
    out.prop.isp_s = sec.real("isp_s");
    out.prop.mass_flow_kg_s = sec.real("fuel_flow_kg_per_s");
    sec.finish();
  }
  {
    Section sec = top.object("launch");
    out.launch.order_lead_time_weeks = sec.real("order_lead_time_weeks");
    out.launch.mean_wait_weeks = sec.real("mean_wait_weeks");
    out.launch.cost_musd = sec.real("cost_musd");
    out.launch.capacity_sats = sec.integer("capacity_sats", 1);
    sec.finish();
  }
  {
    Section sec = top.object("oos");
    out.r_oos = sec.real("serviceable_fraction");
    sec.finish();
  }
  {
    Section sec = top.object("costs");
    out.costs.c_manufac = sec.real("satellite_musd");
    out.costs.c_hold = sec.real("holding_musd_per_sat_year");
    out.costs.eps_fuel = sec.real("fuel_musd_per_kg");
    sec.finish();
  }
  {
    Section sec = top.object("cost_responsiveness");
    out.cr.c_min = sec.real("min_cost_musd");
    out.cr.mu_ideal = sec.real("ideal_rate_per_week");
    out.cr.alpha1 = sec.real("alpha1");
    out.cr.alpha2 = sec.real("alpha2");
    sec.finish();
  }
  {
    Section sec = top.object("requirements");
    out.beta_plane_req = sec.real("beta_plane_min");
    out.beta_parking_req = sec.real("beta_parking_min");
    out.amc_ref = sec.real_or_null("amc_ref_musd_per_year");
    sec.finish();
  }
  {
    Section sec = top.object("decision_bounds");
    out.bounds.s = sec.int_range("s");
    out.bounds.k_s = sec.int_range("k_s");
    out.bounds.n_oos = sec.int_range("n_oos");
    out.bounds.n_parking = sec.int_range("n_parking");
    out.bounds.h_parking_km = sec.real_range("h_parking_km");
    out.bounds.p_oos_spread_musd = sec.real("p_oos_spread_musd");
    out.bounds.mttr_max_weeks = sec.real("mttr_max_weeks");
    sec.finish();
  }
  {
    Section sec = top.object("solver");
    out.nsga.population = sec.integer("population", 2);
    out.nsga.generations = sec.integer("generations", 1);
    out.nsga.crossover_prob = sec.real("crossover_prob");
    out.nsga.mutation_prob = sec.real("mutation_prob");
    out.nsga.eta_crossover = sec.real("eta_crossover");
    out.nsga.eta_mutation = sec.real("eta_mutation");
    out.nsga.seed = sec.seed("seed");
    sec.finish();
  }
  {
    Section sec = top.object("simulation");
    out.sim.replications = sec.integer("replications", 1);
    out.sim.horizon_years = sec.real("years");
    out.sim.warmup_years = sec.real("warmup_years");
    out.sim.step_days = sec.integer_or("step_days", 1, 1);
    out.sim.rng_seed = sec.seed("seed");
    sec.finish();
  }
  top.finish();
  issues.throw_schema_if_any();

  out.costs.c_lau = out.launch.cost_musd;

  check_scenario_values(out, issues);
  issues.throw_schema_if_any();
  issues.throw_unit_if_any();
  return out;
}

ordered_json range_json(const optimizer::IntRange& range) {
  return ordered_json::array({range.lo, range.hi});
}

ordered_json range_json(const optimizer::Range& range) {
  return ordered_json::array({range.lo, range.hi});
}

simulator::Range to_sim_range(const optimizer::Range& r) { return {r.lo, r.hi}; }

simulator::IntRange to_sim_range(const optimizer::IntRange& r) { return {r.lo, r.hi}; }

}  // namespace

ScenarioFile parse_scenario_text(const std::string& text, const std::string& origin) {
  if (blank(text)) {
    throw SchemaError(origin + ": scenario file is empty; required sections: " +
                      required_sections_list());
  }
  return parse_scenario_tree(parse_json(text, origin), text, origin);
}

ScenarioFile parse_scenario(const std::string& path) {
  return parse_scenario_text(read_file(path), path);
}

std::string serialize(const ScenarioFile& f) {
  ordered_json j;
  j["constellation"] = {
      {"planes", f.cfg.n_plane},
      {"sats_per_plane", f.cfg.n_sat},
      {"altitude_km", f.cfg.plane_orbit.altitude_km},
      {"inclination_deg", f.cfg.plane_orbit.inclination_deg},
      {"sat_failure_rate_per_year", f.cfg.sat_failure_rate},
      {"lifespan_years", f.cfg.lifespan_years},
      {"time_units_per_year", f.cfg.n_t},
  };
  j["satellite"] = {
      {"dry_mass_kg", f.prop.dry_mass_kg},
      {"isp_s", f.prop.isp_s},
      {"fuel_flow_kg_per_s", f.prop.mass_flow_kg_s},
  };
  j["launch"] = {
      {"order_lead_time_weeks", f.launch.order_lead_time_weeks},
      {"mean_wait_weeks", f.launch.mean_wait_weeks},
      {"cost_musd", f.launch.cost_musd},
      {"capacity_sats", f.launch.capacity_sats},
  };
  j["oos"] = {
      {"serviceable_fraction", f.r_oos},
  };
  j["costs"] = {
      {"satellite_musd", f.costs.c_manufac},
      {"holding_musd_per_sat_year", f.costs.c_hold},
      {"fuel_musd_per_kg", f.costs.eps_fuel},
  };
  j["cost_responsiveness"] = {
      {"min_cost_musd", f.cr.c_min},
      {"ideal_rate_per_week", f.cr.mu_ideal},
      {"alpha1", f.cr.alpha1},
      {"alpha2", f.cr.alpha2},
  };
  j["requirements"] = {
      {"beta_plane_min", f.beta_plane_req},
      {"beta_parking_min", f.beta_parking_req},
      {"amc_ref_musd_per_year",
       std::isfinite(f.amc_ref) ? ordered_json(f.amc_ref) : ordered_json(nullptr)},
  };
  j["decision_bounds"] = {
      {"s", range_json(f.bounds.s)},
      {"k_s", range_json(f.bounds.k_s)},
      {"n_oos", range_json(f.bounds.n_oos)},
      {"n_parking", range_json(f.bounds.n_parking)},
      {"h_parking_km", range_json(f.bounds.h_parking_km)},
      {"p_oos_spread_musd", f.bounds.p_oos_spread_musd},
      {"mttr_max_weeks", f.bounds.mttr_max_weeks},
  };
  j["solver"] = {
      {"population", f.nsga.population},
      {"generations", f.nsga.generations},
      {"crossover_prob", f.nsga.crossover_prob},
      {"mutation_prob", f.nsga.mutation_prob},
      {"eta_crossover", f.nsga.eta_crossover},
      {"eta_mutation", f.nsga.eta_mutation},
      {"seed", f.nsga.seed},
  };
  j["simulation"] = {
      {"replications", f.sim.replications},
      {"years", f.sim.horizon_years},
      {"warmup_years", f.sim.warmup_years},
      {"step_days", f.sim.step_days},
      {"seed", f.sim.rng_seed},
  };
  return j.dump(2) + "\n";
}

inventory::LaunchService launch_service(const ScenarioFile& f) {
  inventory::LaunchService launch;
  launch.t_lau = f.launch.order_lead_time_weeks;
  launch.psi_lau = f.launch.mean_wait_weeks > 0.0 ? 1.0 / f.launch.mean_wait_weeks : 0.0;
  launch.cost = f.launch.cost_musd;
  launch.capacity = f.launch.capacity_sats;
  return launch;
}

optimizer::ScenarioParams solver_params(const ScenarioFile& f) {
  optimizer::ScenarioParams sp;
  sp.cfg = f.cfg;
  sp.launch = launch_service(f);
  sp.prop = f.prop;
  sp.costs = f.costs;
  sp.cr = f.cr;
  sp.r_oos = f.r_oos;
  sp.beta_plane_req = f.beta_plane_req;
  sp.beta_parking_req = f.beta_parking_req;
  sp.amc_ref = f.amc_ref;
  return sp;
}

optimizer::Bounds solver_bounds(const ScenarioFile& f) {
  optimizer::Bounds bounds = optimizer::default_bounds(solver_params(f));
  bounds.s = f.bounds.s;
  bounds.k_s = f.bounds.k_s;
  bounds.n_oos = f.bounds.n_oos;
  bounds.n_parking = f.bounds.n_parking;
  bounds.h_parking = f.bounds.h_parking_km;
  bounds.p_oos = {f.cr.c_min, f.cr.c_min + f.bounds.p_oos_spread_musd};
  bounds.mttr.hi = f.bounds.mttr_max_weeks;
  return bounds;
}

optimizer::DecisionVector parse_decision(const std::string& path) {
  const std::string text = read_file(path);
  if (blank(text)) {
    throw SchemaError(path + ": decision file is empty; required keys: s, q, k_s, k_q, "
                      "n_oos, n_parking, h_parking_km, p_oos_musd, mttr_weeks");
  }
  const ordered_json root = parse_json(text, path);
  if (!root.is_object()) throw SchemaError(path + ": top level must be an object");

  Issues issues{&text, path, {}, {}};
  Section sec(&root, "", issues);
  optimizer::DecisionVector d;
  d.s = sec.integer("s", 1);
  d.q = sec.integer("q", 1);
  d.k_s = sec.integer("k_s", 1);
  d.k_q = sec.integer("k_q", 1);
  d.n_oos = sec.integer("n_oos", 0);
  d.n_parking = sec.integer("n_parking", 1);
  d.h_parking = sec.real("h_parking_km");
  d.p_oos = sec.real("p_oos_musd");
  d.mttr = sec.real("mttr_weeks");
  sec.finish();
  issues.throw_schema_if_any();

  require_positive(issues, "", "h_parking_km", d.h_parking);
  require_nonnegative(issues, "", "p_oos_musd", d.p_oos);
  require_positive(issues, "", "mttr_weeks", d.mttr);
  issues.throw_unit_if_any();
  return d;
}

std::string serialize(const optimizer::DecisionVector& d) {
  ordered_json j = {
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
  return j.dump(2) + "\n";
}

simulator::FixedParams parse_fixed_params(const std::string& path) {
  const std::string text = read_file(path);
  if (blank(text)) {
    throw SchemaError(path + ": fixed-parameter file is empty; required: costs, satellite, "
                      "lifespan_years, time_units_per_year, beta_plane_min, beta_parking_min");
  }
  const ordered_json root = parse_json(text, path);
  if (!root.is_object()) throw SchemaError(path + ": top level must be an object");

  Issues issues{&text, path, {}, {}};
  Section top(&root, "", issues);
  simulator::FixedParams fixed;
  {
    Section sec = top.object("costs");
    fixed.costs.c_lau = sec.real("launch_musd");
    fixed.costs.c_manufac = sec.real("satellite_musd");
    fixed.costs.c_hold = sec.real("holding_musd_per_sat_year");
    fixed.costs.eps_fuel = sec.real("fuel_musd_per_kg");
    fixed.costs.p_oos = sec.real("oos_price_musd");
    sec.finish();
  }
  {
    Section sec = top.object("satellite");
    fixed.prop.dry_mass_kg = sec.real("dry_mass_kg");
    fixed.prop.isp_s = sec.real("isp_s");
    fixed.prop.mass_flow_kg_s = sec.real("fuel_flow_kg_per_s");
    sec.finish();
  }
  fixed.lifespan_years = top.real("lifespan_years");
  fixed.n_t = top.real("time_units_per_year");
  fixed.beta_plane_req = top.real("beta_plane_min");
  fixed.beta_parking_req = top.real("beta_parking_min");
  top.finish();
  issues.throw_schema_if_any();

  require_nonnegative(issues, "costs", "launch_musd", fixed.costs.c_lau);
  require_nonnegative(issues, "costs", "satellite_musd", fixed.costs.c_manufac);
  require_nonnegative(issues, "costs", "holding_musd_per_sat_year", fixed.costs.c_hold);
  require_nonnegative(issues, "costs", "fuel_musd_per_kg", fixed.costs.eps_fuel);
  require_nonnegative(issues, "costs", "oos_price_musd", fixed.costs.p_oos);
  require_positive(issues, "satellite", "dry_mass_kg", fixed.prop.dry_mass_kg);
  require_positive(issues, "satellite", "isp_s", fixed.prop.isp_s);
  require_positive(issues, "satellite", "fuel_flow_kg_per_s", fixed.prop.mass_flow_kg_s);
  require_positive(issues, "", "lifespan_years", fixed.lifespan_years);
  require_positive(issues, "", "time_units_per_year", fixed.n_t);
  require_fraction(issues, "", "beta_plane_min", fixed.beta_plane_req);
  require_fraction(issues, "", "beta_parking_min", fixed.beta_parking_req);
  issues.throw_unit_if_any();
  return fixed;
}

simulator::TradeSpace parse_trade_space(const std::string& path) {
  const std::string text = read_file(path);
  if (blank(text)) throw SchemaError(path + ": trade-space file is empty");
  const ordered_json root = parse_json(text, path);
  if (!root.is_object()) throw SchemaError(path + ": top level must be an object");

  Issues issues{&text, path, {}, {}};
  Section sec(&root, "", issues);
  simulator::TradeSpace space;
  space.t_lau = to_sim_range(sec.real_range("order_lead_time_weeks"));
  space.launch_wait = to_sim_range(sec.real_range("mean_wait_weeks"));
  space.h_plane = to_sim_range(sec.real_range("h_plane_km"));
  space.h_parking = to_sim_range(sec.real_range("h_parking_km"));
  space.inclination = to_sim_range(sec.real_range("inclination_deg"));
  space.sat_failure_rate = to_sim_range(sec.real_range("sat_failure_rate_per_year"));
  space.n_plane = to_sim_range(sec.int_range("planes"));
  space.n_parking = to_sim_range(sec.int_range("n_parking"));
  space.n_sat = to_sim_range(sec.int_range("sats_per_plane"));
  space.s = to_sim_range(sec.int_range("s"));
  space.q = to_sim_range(sec.int_range("q"));
  space.k_s = to_sim_range(sec.int_range("k_s"));
  space.k_q = to_sim_range(sec.int_range("k_q"));
  space.mttr = to_sim_range(sec.real_range("mttr_weeks"));
  space.r_oos = to_sim_range(sec.real_range("serviceable_fraction"));
  space.n_oos = to_sim_range(sec.int_range("n_oos"));
  sec.finish();
  issues.throw_schema_if_any();

  require_nonnegative(issues, "", "order_lead_time_weeks", space.t_lau.lo);
  require_positive(issues, "", "mean_wait_weeks", space.launch_wait.lo);
  require_positive(issues, "", "h_plane_km", space.h_plane.lo);
  require_positive(issues, "", "h_parking_km", space.h_parking.lo);
  require_inclination(issues, "", "inclination_deg", space.inclination.lo);
  require_inclination(issues, "", "inclination_deg", space.inclination.hi);
  require_nonnegative(issues, "", "sat_failure_rate_per_year", space.sat_failure_rate.lo);
  require_positive(issues, "", "mttr_weeks", space.mttr.lo);
  require_fraction(issues, "", "serviceable_fraction", space.r_oos.lo);
  require_fraction(issues, "", "serviceable_fraction", space.r_oos.hi);
  issues.throw_unit_if_any();
  return space;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 digest failure");
  }
  std::string hex(static_cast<std::size_t>(length) * 2, '0');
  static constexpr char kDigits[] = "0123456789abcdef";
  for (unsigned int i = 0; i < length; ++i) {
    hex[2 * i] = kDigits[digest[i] >> 4];
    hex[2 * i + 1] = kDigits[digest[i] & 0x0f];
  }
  return hex;
}

RunManifest make_manifest(const std::string& scenario_bytes,
                          std::vector<std::uint64_t> seeds,
                          std::vector<std::string> outputs) {
  RunManifest manifest;
  manifest.scenario_sha256 = sha256_hex(scenario_bytes);
  manifest.seeds = std::move(seeds);
  manifest.outputs = std::move(outputs);
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);
  manifest.created_utc = stamp;
  return manifest;
}

std::string serialize(const RunManifest& manifest) {
  ordered_json j = {
      {"tool_version", manifest.tool_version},
      {"scenario_sha256", manifest.scenario_sha256},
      {"seeds", manifest.seeds},
      {"created_utc", manifest.created_utc},
      {"outputs", manifest.outputs},
  };
  return j.dump(2) + "\n";
}

}  // namespace constel::scenario
