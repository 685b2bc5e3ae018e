// Python bindings. Structured results cross the boundary as JSON text and
// are decoded in chargraph/__init__.py.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "chargraph/errors.hpp"
#include "chargraph/graph.hpp"
#include "chargraph/probability.hpp"
#include "chargraph/rates.hpp"
#include "chargraph/scenarios.hpp"
#include "chargraph/simulator.hpp"
#include "chargraph/topology.hpp"
#include "json.hpp"

namespace py = pybind11;
using namespace chargraph;
using nlohmann::json;

namespace {

Topology topo(int n, int k, int nr, int kc, int m) {
  Topology t{n, k, kc, m, nr};
  t.validate();
  return t.with_cyclic_storage();
}

CharGraph make_graph(const std::vector<double>& pmf,
                     const std::vector<std::pair<int, int>>& edges) {
  for (auto [u, v] : edges)
    if (u < 0 || v < 0 || u >= static_cast<int>(pmf.size()) ||
        v >= static_cast<int>(pmf.size()) || u == v)
      throw ValidationError("edge (" + std::to_string(u) + ", " +
                            std::to_string(v) + ") is not a pair of distinct vertices");
  Pmf check(pmf);
  (void)check;
  return CharGraph(pmf, edges);
}

SolverOptions solver(double tol, int restarts, std::uint64_t seed) {
  SolverOptions o;
  o.tol = tol;
  o.restarts = restarts;
  o.seed = seed;
  return o;
}

std::string rates_json(const ScenarioRates& s) {
  auto num = [](double v) -> json {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  return json{{"graph", num(s.graph)}, {"lin", num(s.lin)}, {"sw", num(s.sw)},
              {"eta_lin", num(s.eta_lin)}, {"eta_sw", num(s.eta_sw)}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "chargraph native core";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<GuardError>(m, "GuardError", base.ptr());
  py::register_exception<DecodeError>(m, "DecodeError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

  m.def("binary_entropy", &binary_entropy, py::arg("p"));
  m.def("parity_param", &parity_param, py::arg("l"), py::arg("eps"));
  m.def("diniz_parity_param", &diniz_parity_param, py::arg("l"), py::arg("eps"),
        py::arg("rho"));

  m.def("placement_json", [](int n, int k, int nr, int kc, int mm) {
    Topology t = topo(n, k, nr, kc, mm);
    json j = cyclic_placement(t);
    j["derived"] = derived_params(t);
    return j.dump();
  }, py::arg("n"), py::arg("k"), py::arg("nr"), py::arg("kc") = 1, py::arg("m") = 0);

  m.def("graph_entropy_json",
        [](const std::vector<double>& pmf, const std::vector<std::pair<int, int>>& edges,
           double tol, int restarts, std::uint64_t seed) {
          CharGraph g = make_graph(pmf, edges);
          GraphEntropyResult r = g.edge_count() == 0
                                     ? GraphEntropyResult{0.0, true, 0, 0.0, 0.0, {}, {}}
                                     : graph_entropy(g, solver(tol, restarts, seed));
          json j = r;
          j["restart_spread"] = r.restart_spread;
          return j.dump();
        },
        py::arg("pmf"), py::arg("edges"), py::arg("tol") = 1e-9,
        py::arg("restarts") = 8, py::arg("seed") = 20240607);

  m.def("conditional_graph_entropy_json",
        [](const std::vector<double>& pmf, const std::vector<std::pair<int, int>>& edges,
           const std::vector<std::vector<double>>& joint, double tol, int restarts,
           std::uint64_t seed) {
          CharGraph g = make_graph(pmf, edges);
          json j = conditional_graph_entropy(g, joint, solver(tol, restarts, seed));
          return j.dump();
        },
        py::arg("pmf"), py::arg("edges"), py::arg("joint"), py::arg("tol") = 1e-9,
        py::arg("restarts") = 8, py::arg("seed") = 20240607);

  m.def("chromatic_entropy",
        [](const std::vector<double>& pmf, const std::vector<std::pair<int, int>>& edges) {
          return chromatic_entropy(make_graph(pmf, edges));
        },
        py::arg("pmf"), py::arg("edges"));

  m.def("prop1_json", [](int n, int k, int nr, int kc) {
    json j = prop1_rate(topo(n, k, nr, 1, 0), kc);
    return j.dump();
  }, py::arg("n"), py::arg("k"), py::arg("nr"), py::arg("kc"));

  m.def("prop3_json", [](int n, int k, int nr, double eps) {
    json j = prop3_rate(topo(n, k, nr, 1, 0), eps);
    return j.dump();
  }, py::arg("n"), py::arg("k"), py::arg("nr"), py::arg("eps"));

  m.def("scenario_rates_json",
        [](const std::string& id, double eps, double param, int n, int k, int nr, int kc) {
          if (id == "s2-iid") return rates_json(scenario2_iid(eps));
          if (id == "s2-table2") return rates_json(scenario2_table2(eps, param));
          if (id == "s2-diniz") return rates_json(scenario2_diniz(eps, param));
          if (id == "s1") return rates_json(scenario1(topo(n, k, nr, 1, 0), eps, param));
          if (id == "s3") return rates_json(scenario3(topo(n, k, nr, kc, 0), eps));
          if (id == "multilinear")
            return rates_json(multilinear_rates(topo(n, k, nr, 1, 0), eps));
          throw ValidationError("unknown scenario '" + id + "'");
        },
        py::arg("scenario"), py::arg("eps"), py::arg("param") = 0.0, py::arg("n") = 0,
        py::arg("k") = 0, py::arg("nr") = 0, py::arg("kc") = 1);

  m.def("run_scenario_json", [](const std::string& config) {
    json cfg;
    try {
      cfg = json::parse(config);
    } catch (const json::exception& e) {
      throw ValidationError(e.what());
    }
    std::vector<ScenarioRow> rows;
    {
      py::gil_scoped_release release;
      rows = run_scenario(config_from_json(cfg));
    }
    std::ostringstream os;
    write_csv(os, rows);
    return py::make_tuple(rows_to_json(rows).dump(), os.str());
  }, py::arg("config"));

  m.def("simulate_json",
        [](const std::string& instance, double eps, int blocklength, std::uint64_t trials,
           std::uint64_t seed) {
          Topology t;
          Demand d = Demand::multilinear(3);
          if (instance == "s2") {
            t = Topology{3, 3, 2, 2, 2};
            d = Demand::linear({{0, 1, 0}, {0, 1, 1}}, 2);
          } else if (instance == "multilinear") {
            t = topo(3, 3, 2, 1, 0);
            d = Demand::multilinear(3, 2);
          } else {
            throw ValidationError("unknown instance '" + instance + "'");
          }
          py::gil_scoped_release release;
          Placement p = cyclic_placement(t);
          JointPmf joint = JointPmf::iid(t.k, Pmf::bernoulli(eps));
          auto encs = build_encoders(t, p, d, joint, blocklength);
          bool verified = verify_zero_error(encs, t, p, d, joint);
          std::vector<int> subset;
          for (int i = 0; i < t.nr; ++i) subset.push_back(i);
          DecodeTable tab = build_decode_table(encs, t, p, d, joint, subset);
          json j = run_simulation(encs, tab, joint, blocklength, trials, seed);
          j["verified_all_subsets"] = verified;
          j["encoders"] = encs;
          return j.dump();
        },
        py::arg("instance") = "s2", py::arg("eps") = 0.5, py::arg("blocklength") = 1,
        py::arg("trials") = 100000, py::arg("seed") = 20240607);
}
