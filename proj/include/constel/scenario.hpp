#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "constel/optimizer.hpp"
#include "constel/simulator.hpp"

namespace constel::scenario {

inline constexpr const char* kToolVersion = "1.0.0";

// Decision ranges the file states directly. The remaining ranges are coupled
// to other scenario parameters and derived at solve time: order quantities
// run up to the launch capacity, the price spans [c_min, c_min + spread],
// and the response time runs from just above the ideal response time
// 1/mu_ideal up to mttr_max_weeks.
struct DecisionBounds {
  optimizer::IntRange s{1, 20};
  optimizer::IntRange k_s{1, 20};
  optimizer::IntRange n_oos{1, 4};
  optimizer::IntRange n_parking{1, 20};
  optimizer::Range h_parking_km{500.0, 1000.0};
  double p_oos_spread_musd = 5.0;
  double mttr_max_weeks = 12.0;

  friend bool operator==(const DecisionBounds&, const DecisionBounds&) = default;
};

// Launch section in the file's own parameterization: the stochastic delay
// appears as a mean wait in weeks, not as the rate the model consumes, so a
// serialize/parse round trip never takes a double reciprocal.
struct LaunchSection {
  double order_lead_time_weeks = 0.0;
  double mean_wait_weeks = 0.0;
  double cost_musd = 0.0;
  int capacity_sats = 1;

  friend bool operator==(const LaunchSection&, const LaunchSection&) = default;
};

// In-memory form of a scenario file, one field group per file section.
// costs.c_lau mirrors launch.cost_musd; costs.p_oos and costs.q_max stay
// zero because both are supplied per decision vector. nsga.jobs and
// sim.audit are runtime concerns and never serialized.
struct ScenarioFile {
  inventory::ConstellationConfig cfg;
  orbital::PropulsionSpec prop;
  LaunchSection launch;
  double r_oos = 0.0;
  economics::CostParams costs;
  economics::CostResponsivenessParams cr;
  double beta_plane_req = 0.0;
  double beta_parking_req = 0.0;
  // Cost ceiling for the provider-side problems; infinity when the file
  // carries null.
  double amc_ref = std::numeric_limits<double>::infinity();
  DecisionBounds bounds;
  optimizer::NsgaConfig nsga;
  simulator::SimConfig sim;

  friend bool operator==(const ScenarioFile&, const ScenarioFile&) = default;
};

// Reads and validates a scenario file. Malformed JSON raises ParseError with
// the parser's line and column; structural offences (missing, unknown, or
// mistyped keys, inverted ranges) raise SchemaError listing every offence
// with the line it sits on; quantities outside their physical domain raise
// UnitError. A missing or unreadable file raises ParseError. The only
// defaulted keys are constellation.time_units_per_year (52) and
// simulation.step_days (1).
ScenarioFile parse_scenario(const std::string& path);

// Same validation on in-memory text; `origin` names the source in messages.
ScenarioFile parse_scenario_text(const std::string& text, const std::string& origin);

// Canonical form: fixed section and key order, two-space indent, shortest
// round-trip number formatting, trailing newline. parse(serialize(x)) == x.
std::string serialize(const ScenarioFile& file);

inventory::LaunchService launch_service(const ScenarioFile& file);

// Scenario slice the solvers consume.
optimizer::ScenarioParams solver_params(const ScenarioFile& file);

// File ranges merged with the derived ones (launch capacity, price anchor,
// response-time floor).
optimizer::Bounds solver_bounds(const ScenarioFile& file);

// Decision-vector file for the evaluate and simulate commands. All nine
// genes are required; n_oos 0 switches servicing off for the evaluation.
optimizer::DecisionVector parse_decision(const std::string& path);
std::string serialize(const optimizer::DecisionVector& decision);

// Validation-study inputs: the fixed-parameter file and the sampled
// trade-space file.
simulator::FixedParams parse_fixed_params(const std::string& path);
simulator::TradeSpace parse_trade_space(const std::string& path);

std::string sha256_hex(const std::string& bytes);

// Provenance record written next to every command's outputs. The hash binds
// the record to the exact scenario bytes, so re-running the recorded tool
// version on the recorded inputs with the recorded seeds reproduces the
// outputs.
struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string scenario_sha256;
  std::vector<std::uint64_t> seeds;
  std::string created_utc; // second resolution, ISO 8601 Zulu
  std::vector<std::string> outputs;
};

RunManifest make_manifest(const std::string& scenario_bytes,
                          std::vector<std::uint64_t> seeds,
                          std::vector<std::string> outputs);

std::string serialize(const RunManifest& manifest);

}  // namespace constel::scenario
