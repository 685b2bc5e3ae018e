#include "chargraph/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "chargraph/errors.hpp"
#include "chargraph/probability.hpp"
#include "chargraph/rates.hpp"
#include "chargraph/simulator.hpp"

namespace chargraph {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kMaxRows = 1000000;

Topology scenario2_topology() { return Topology{3, 3, 2, 2, 2}; }

Topology topology_from_json(const nlohmann::json& j) {
  Topology t;
  try {
    t.n = j.at("N").get<int>();
    t.k = j.at("K").get<int>();
    t.kc = j.value("Kc", 1);
    t.m = j.value("M", 0);
    t.nr = j.at("Nr").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("topology JSON: ") + e.what());
  }
  return t.with_cyclic_storage();
}

Grid grid_from_json(const nlohmann::json& j, const std::string& name) {
  Grid g;
  try {
    if (j.is_number()) {
      g.start = g.stop = j.get<double>();
    } else if (j.is_array()) {
      if (j.size() != 3) throw ValidationError(name + ": expected [start, stop, count]");
      g = Grid{j[0].get<double>(), j[1].get<double>(), j[2].get<int>()};
    } else if (j.is_string()) {
      g = Grid::parse(j.get<std::string>());
    } else {
      g = Grid{j.at("start").get<double>(), j.at("stop").get<double>(),
               j.at("count").get<int>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(name + ": " + e.what());
  }
  g.validate(name);
  return g;
}

ScenarioRow custom_row(const ScenarioConfig& cfg, const Topology& t,
                       double eps, double rho) {
  Demand d = demand_from_json(*cfg.demand, t.k);
  if (d.q() != 2)
    throw ValidationError("custom scenario: binary sources only (q = 2)");
  Placement p = cfg.placement ? *cfg.placement : cyclic_placement(t);
  JointPmf joint = cfg.source == "diniz"
                       ? diniz_bits(t.k, eps, rho)
                       : JointPmf::iid(t.k, Pmf::bernoulli(eps));
  SolverOptions opts;
  opts.seed = cfg.seed;
  RateReport chain =
      chain_rate_best(t, p, d, joint, all_orderings(t.n, t.nr), opts);
  if (!chain.metadata.value("converged", true))
    throw ConvergenceError("graph entropy solver hit its iteration cap at eps = " +
                           format_number(eps));
  ScenarioRow r;
  r.t = t;
  r.t.kc = d.kc();
  r.eps = eps;
  r.param = cfg.source == "diniz" ? rho : kNaN;
  r.r_graph = chain.sum_rate;
  r.r_lin = kNaN;
  r.r_sw = joint.entropy();
  r.eta_lin = kNaN;
  r.eta_sw = gain_ratio(r.r_sw, r.r_graph);
  return r;
}

struct Job {
  Topology t;
  double eps;
  double param;
};

ScenarioRow evaluate(const ScenarioConfig& cfg, const Job& job) {
  ScenarioRates s;
  const std::string& id = cfg.scenario;
  if (id == "s1") {
    s = scenario1(job.t, job.eps, job.param);
  } else if (id == "s2-table2") {
    s = scenario2_table2(job.eps, job.param);
  } else if (id == "s2-diniz") {
    s = scenario2_diniz(job.eps, job.param);
  } else if (id == "s3") {
    s = scenario3(job.t, job.eps);
  } else if (id == "multilinear") {
    s = multilinear_rates(job.t, job.eps);
  } else {
    return custom_row(cfg, job.t, job.eps, job.param);
  }
  return ScenarioRow{job.t, job.eps, job.param, s.graph, s.lin,
                     s.sw,  s.eta_lin, s.eta_sw};
}

}  // namespace

std::vector<double> Grid::values() const {
  if (count == 1) return {start};
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i)
    v[i] = start + (stop - start) * static_cast<double>(i) / (count - 1);
  v.back() = stop;
  return v;
}

void Grid::validate(const std::string& name) const {
  if (count < 1) throw ValidationError(name + ": count must be at least 1");
  if (!(start >= 0.0 && start <= 1.0 && stop >= 0.0 && stop <= 1.0))
    throw ValidationError(name + ": bounds must lie in [0, 1]");
}

Grid Grid::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string s; std::getline(ss, s, ',');) parts.push_back(s);
  try {
    if (parts.size() == 1) {
      double v = std::stod(parts[0]);
      return Grid{v, v, 1};
    }
    if (parts.size() == 3)
      return Grid{std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[2])};
  } catch (const std::exception&) {
  }
  throw ValidationError("grid '" + text + "': expected start,stop,count");
}

void ScenarioConfig::validate() const {
  static const std::vector<std::string> ids = {"s1", "s2-table2", "s2-diniz",
                                               "s3", "multilinear", "custom"};
  if (std::find(ids.begin(), ids.end(), scenario) == ids.end())
    throw ValidationError("unknown scenario '" + scenario + "'");
  if (format != "csv" && format != "json")
    throw ValidationError("format must be csv or json");
  if (coupling != "grid" && coupling != "independent")
    throw ValidationError("coupling must be grid or independent");
  if (source != "iid" && source != "diniz")
    throw ValidationError("source must be iid or diniz");
  eps.validate("eps grid");
  if (rho) rho->validate("rho grid");
  if (p) p->validate("p grid");
  const bool needs_topology =
      scenario == "s1" || scenario == "s3" || scenario == "multilinear" ||
      scenario == "custom";
  if (needs_topology && topologies.empty())
    throw ValidationError("scenario " + scenario + " needs a topology");
  for (const auto& t : topologies) t.validate();
  if (scenario == "custom") {
    if (!demand) throw ValidationError("custom scenario needs a demand");
    if (topologies.size() != 1)
      throw ValidationError("custom scenario takes exactly one topology");
  }
}

ScenarioConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  ScenarioConfig c;
  try {
    c.scenario = j.value("scenario", c.scenario);
    if (j.contains("topologies"))
      for (const auto& t : j.at("topologies"))
        c.topologies.push_back(topology_from_json(t));
    if (j.contains("topology"))
      c.topologies.push_back(topology_from_json(j.at("topology")));
    if (j.contains("eps_grid")) c.eps = grid_from_json(j.at("eps_grid"), "eps grid");
    if (j.contains("rho_grid")) c.rho = grid_from_json(j.at("rho_grid"), "rho grid");
    if (j.contains("p_grid")) c.p = grid_from_json(j.at("p_grid"), "p grid");
    c.coupling = j.value("coupling", c.coupling);
    c.out = j.value("out", c.out);
    c.format = j.value("format", c.format);
    c.seed = j.value("seed", c.seed);
    c.source = j.value("source", c.source);
    if (j.contains("demand")) c.demand = j.at("demand");
    if (j.contains("placement")) c.placement = j.at("placement").get<Placement>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::vector<ScenarioRow> run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<Topology> tops = cfg.topologies;
  if (cfg.scenario == "s2-table2" || cfg.scenario == "s2-diniz")
    tops = {scenario2_topology()};

  const std::vector<double> eps = cfg.eps.values();
  std::vector<Job> jobs;
  for (const auto& t : tops) {
    Topology tt = t.with_cyclic_storage();
    if (cfg.scenario == "s1" || cfg.scenario == "multilinear") tt.kc = 1;
    for (double e : eps) {
      std::vector<double> params;
      if (cfg.scenario == "s2-table2") {
        if (cfg.coupling == "independent")
          params = {1.0 - e};
        else
          params = cfg.p ? cfg.p->values() : std::vector<double>{0.5};
      } else if (cfg.scenario == "s1" || cfg.scenario == "s2-diniz" ||
                 (cfg.scenario == "custom" && cfg.source == "diniz")) {
        params = cfg.rho ? cfg.rho->values() : std::vector<double>{0.0};
      } else {
        params = {kNaN};
      }
      for (double pr : params) jobs.push_back({tt, e, pr});
      if (jobs.size() > kMaxRows) throw GuardError("more than 1e6 grid points");
    }
  }

  std::vector<ScenarioRow> rows(jobs.size());
  std::vector<std::exception_ptr> errs(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        rows[i] = evaluate(cfg, jobs[i]);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const int nt = static_cast<int>(
      std::min<std::size_t>(worker_threads(), std::max<std::size_t>(jobs.size(), 1)));
  std::vector<std::thread> pool;
  for (int i = 1; i < nt; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<ScenarioRow>& rows) {
  os << "N,K,Kc,M,Nr,eps,param,r_graph,r_lin,r_sw,eta_lin,eta_sw\n";
  for (const auto& r : rows) {
    os << r.t.n << ',' << r.t.k << ',' << r.t.kc << ',' << r.t.m << ','
       << r.t.nr << ',' << format_number(r.eps) << ','
       << format_number(r.param) << ',' << format_number(r.r_graph) << ','
       << format_number(r.r_lin) << ',' << format_number(r.r_sw) << ','
       << format_number(r.eta_lin) << ',' << format_number(r.eta_sw) << '\n';
  }
}

nlohmann::json rows_to_json(const std::vector<ScenarioRow>& rows) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rows)
    a.push_back({{"N", r.t.n},
                 {"K", r.t.k},
                 {"Kc", r.t.kc},
                 {"M", r.t.m},
                 {"Nr", r.t.nr},
                 {"eps", num(r.eps)},
                 {"param", num(r.param)},
                 {"r_graph", num(r.r_graph)},
                 {"r_lin", num(r.r_lin)},
                 {"r_sw", num(r.r_sw)},
                 {"eta_lin", num(r.eta_lin)},
                 {"eta_sw", num(r.eta_sw)}});
  return a;
}

}  // namespace chargraph
