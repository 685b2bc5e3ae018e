// chargraph: placements, graph entropies, scenario sweeps and zero-error
// simulation from the command line.
//
// Exit codes: 0 ok, 2 invalid input, 3 desk-scale guard, 4 solver did not
// converge, 1 anything else.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "chargraph/errors.hpp"
#include "chargraph/functions.hpp"
#include "chargraph/graph.hpp"
#include "chargraph/probability.hpp"
#include "chargraph/rates.hpp"
#include "chargraph/scenarios.hpp"
#include "chargraph/simulator.hpp"
#include "chargraph/topology.hpp"
#include "json.hpp"

using namespace chargraph;
using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw ValidationError("cannot write " + out);
  f << text;
}

std::vector<int> parse_servers(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      v.push_back(std::stoi(tok) - 1);
    } catch (const std::exception&) {
      throw ValidationError("bad server list '" + s + "'");
    }
  }
  return v;
}

struct TopoFlags {
  int n = 0, k = 0, kc = 1, m = 0, nr = 0;
  Topology get() const {
    Topology t{n, k, kc, m, nr};
    t.validate();
    return t.with_cyclic_storage();
  }
};

int cmd_placement(const TopoFlags& f) {
  Topology t = f.get();
  Placement p = cyclic_placement(t);
  json j = p;
  j["derived"] = derived_params(t);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_entropy(const std::string& file, const SolverOptions& opts) {
  json spec = read_json(file);
  CharGraph g = graph_from_json(spec);
  GraphEntropyResult r;
  json j;
  if (spec.contains("side")) {
    // Rows follow the file's vertex order; drop those pruned for zero mass.
    auto rows = spec.at("side").at("joint").get<std::vector<std::vector<double>>>();
    auto pmf = spec.at("pmf").get<std::vector<double>>();
    if (rows.size() != pmf.size())
      throw ValidationError("side.joint needs one row per vertex");
    std::vector<std::vector<double>> kept;
    for (std::size_t v = 0; v < rows.size(); ++v)
      if (pmf[v] > 0.0) kept.push_back(rows[v]);
    r = conditional_graph_entropy(g, kept, opts);
    j = r;
    j["kind"] = "conditional";
  } else {
    r = g.edge_count() == 0 ? GraphEntropyResult{0.0, true, 0, 0.0, 0.0, {}, {}}
                            : graph_entropy(g, opts);
    j = r;
    j["kind"] = "graph";
    j["restart_spread"] = r.restart_spread;
  }
  j["source_entropy"] = g.source_entropy();
  if (g.size() <= kMaxExactColoring) j["chromatic_entropy"] = chromatic_entropy(g);
  std::cout << j.dump(2) << "\n";
  if (!r.converged) {
    std::cerr << "error: solver stopped at its iteration cap\n";
    return 4;
  }
  return 0;
}

struct ScenarioFlags {
  std::string config, scenario, eps, rho, p, out, format, coupling;
  std::optional<std::uint64_t> seed;
};

int cmd_scenario(const ScenarioFlags& f, const TopoFlags& tf, bool topo_given) {
  ScenarioConfig cfg;
  if (!f.config.empty()) {
    cfg = config_from_json(read_json(f.config));
  }
  if (!f.scenario.empty()) cfg.scenario = f.scenario;
  if (topo_given) cfg.topologies = {tf.get()};
  if (!f.eps.empty()) cfg.eps = Grid::parse(f.eps);
  if (!f.rho.empty()) cfg.rho = Grid::parse(f.rho);
  if (!f.p.empty()) cfg.p = Grid::parse(f.p);
  if (!f.out.empty()) cfg.out = f.out;
  if (!f.format.empty()) cfg.format = f.format;
  if (!f.coupling.empty()) cfg.coupling = f.coupling;
  if (f.seed) cfg.seed = *f.seed;
  cfg.validate();
  auto rows = run_scenario(cfg);
  std::ostringstream os;
  if (cfg.format == "json")
    os << rows_to_json(rows).dump(2) << "\n";
  else
    write_csv(os, rows);
  emit(os.str(), cfg.out);
  return 0;
}

struct SimFlags {
  std::string instance = "s2";
  std::string demand_file, subset;
  double eps = 0.5;
  std::optional<double> rho;
  int blocklength = 1;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 20240607;
  std::string out;
};

int cmd_simulate(const SimFlags& f, TopoFlags tf, bool topo_given) {
  Topology t;
  Demand d = Demand::multilinear(3);
  if (f.instance == "s2") {
    t = Topology{3, 3, 2, 2, 2};
    d = Demand::linear({{0, 1, 0}, {0, 1, 1}}, 2);
  } else if (f.instance == "multilinear") {
    if (!topo_given) tf = TopoFlags{3, 3, 1, 0, 2};
    t = tf.get();
    d = Demand::multilinear(t.k, 2);
  } else if (f.instance == "custom") {
    if (!topo_given || f.demand_file.empty())
      throw ValidationError("custom simulation needs --n --k --nr and --demand");
    t = tf.get();
    d = demand_from_json(read_json(f.demand_file), t.k);
  } else {
    throw ValidationError("unknown instance '" + f.instance + "'");
  }
  Placement p = cyclic_placement(t);
  JointPmf joint = f.rho ? diniz_bits(t.k, f.eps, *f.rho)
                         : JointPmf::iid(t.k, Pmf::bernoulli(f.eps));
  auto encs = build_encoders(t, p, d, joint, f.blocklength);
  std::vector<int> failing;
  bool verified = verify_zero_error(encs, t, p, d, joint, &failing);
  std::vector<int> subset = f.subset.empty() ? std::vector<int>{} : parse_servers(f.subset);
  if (subset.empty())
    for (int i = 0; i < t.nr; ++i) subset.push_back(i);
  DecodeTable table = build_decode_table(encs, t, p, d, joint, subset);
  SimResult r = run_simulation(encs, table, joint, f.blocklength, f.trials, f.seed);
  json j = r;
  j["verified_all_subsets"] = verified;
  j["decode_subset"] = json::array();
  for (int s : subset) j["decode_subset"].push_back(s + 1);
  j["encoders"] = encs;
  emit(j.dump(2) + "\n", f.out);
  if (!verified) {
    std::cerr << "error: zero-error verification failed\n";
    return 2;
  }
  return r.errors == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Characteristic-graph rates for distributed multi-function computation"};
  app.require_subcommand(1);

  TopoFlags tf;
  auto add_topology = [&tf](CLI::App* c, bool required) {
    auto* n = c->add_option("--n", tf.n, "servers N");
    auto* k = c->add_option("--k", tf.k, "datasets K");
    c->add_option("--kc", tf.kc, "demanded functions Kc");
    c->add_option("--m", tf.m, "datasets per server M (checked)");
    auto* nr = c->add_option("--nr", tf.nr, "recovery threshold Nr");
    if (required) {
      n->required();
      k->required();
      nr->required();
    }
    return n;
  };

  auto* placement = app.add_subcommand("placement", "print the cyclic placement");
  add_topology(placement, true);

  std::string graph_file;
  SolverOptions opts;
  auto* entropy = app.add_subcommand("entropy", "graph entropy of a graph spec");
  entropy->add_option("file", graph_file, "graph JSON")->required()->check(CLI::ExistingFile);
  entropy->add_option("--tol", opts.tol, "certified gap tolerance (bits)");
  entropy->add_option("--max-iters", opts.max_iters);
  entropy->add_option("--restarts", opts.restarts);
  entropy->add_option("--seed", opts.seed);

  ScenarioFlags sf;
  auto* scenario = app.add_subcommand("scenario", "sweep a scenario to CSV/JSON");
  scenario->add_option("--config", sf.config, "config JSON")->check(CLI::ExistingFile);
  scenario->add_option("--scenario", sf.scenario,
                       "s1 | s2-table2 | s2-diniz | s3 | multilinear | custom");
  auto* sn = add_topology(scenario, false);
  scenario->add_option("--eps-grid", sf.eps, "start,stop,count");
  scenario->add_option("--rho-grid", sf.rho, "start,stop,count");
  scenario->add_option("--p-grid", sf.p, "start,stop,count");
  scenario->add_option("--coupling", sf.coupling, "grid | independent");
  scenario->add_option("--out", sf.out, "output path (default stdout)");
  scenario->add_option("--seed", sf.seed);
  scenario->add_option("--format", sf.format)->check(CLI::IsMember({"csv", "json"}));

  SimFlags mf;
  auto* simulate = app.add_subcommand("simulate", "zero-error block coding simulation");
  simulate->add_option("--instance", mf.instance, "s2 | multilinear | custom");
  auto* mn = add_topology(simulate, false);
  simulate->add_option("--demand", mf.demand_file, "demand JSON (custom)");
  simulate->add_option("--eps", mf.eps);
  simulate->add_option("--rho", mf.rho, "correlated source instead of i.i.d.");
  simulate->add_option("--blocklength", mf.blocklength);
  simulate->add_option("--trials", mf.trials);
  simulate->add_option("--seed", mf.seed);
  simulate->add_option("--subset", mf.subset, "decoding servers, 1-based, comma-separated");
  simulate->add_option("--out", mf.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*placement) return cmd_placement(tf);
    if (*entropy) return cmd_entropy(graph_file, opts);
    if (*scenario) return cmd_scenario(sf, tf, sn->count() > 0);
    if (*simulate) return cmd_simulate(mf, tf, mn->count() > 0);
  } catch (const GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DecodeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
