#pragma once

// Parameter sweeps over the evaluation scenarios, emitted as CSV or JSON
// rows in grid order.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chargraph/functions.hpp"
#include "chargraph/topology.hpp"
#include "json.hpp"

namespace chargraph {

struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  std::vector<double> values() const;
  void validate(const std::string& name) const;
  static Grid parse(const std::string& text);  // "a,b,count" or "a"
};

struct ScenarioConfig {
  std::string scenario = "s1";  // s1 | s2-table2 | s2-diniz | s3 | multilinear | custom
  std::vector<Topology> topologies;
  Grid eps{0.5, 0.5, 1};
  std::optional<Grid> rho;
  std::optional<Grid> p;
  // s2-table2 only: "grid" sweeps p, "independent" ties p = 1 - eps.
  std::string coupling = "grid";
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 20240607;
  // custom only
  std::optional<nlohmann::json> demand;
  std::optional<Placement> placement;
  std::string source = "iid";  // iid | diniz

  void validate() const;
};

ScenarioConfig config_from_json(const nlohmann::json& j);

struct ScenarioRow {
  Topology t;
  double eps = 0.0;
  double param = 0.0;  // rho or p; NaN when the scenario has none
  double r_graph = 0.0, r_lin = 0.0, r_sw = 0.0;
  double eta_lin = 0.0, eta_sw = 0.0;
};

/// Evaluates every grid point (in parallel, CHARGRAPH_THREADS) and returns
/// rows in grid order: topology, then eps, then param.
std::vector<ScenarioRow> run_scenario(const ScenarioConfig& cfg);

void write_csv(std::ostream& os, const std::vector<ScenarioRow>& rows);
nlohmann::json rows_to_json(const std::vector<ScenarioRow>& rows);

/// "%.9g", with nan / inf / -inf spelled out.
std::string format_number(double v);

}  // namespace chargraph
