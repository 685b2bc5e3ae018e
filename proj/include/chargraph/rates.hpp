#pragma once

// Sum-rate evaluations: the general characteristic-graph bound over a
// codebook, the linearly separable baseline, the Boolean two-MIS bound,
// the multi-linear closed form, ordered chains of conditional graph
// entropies, the Slepian-Wolf baseline and the gain ratios.

#include <optional>
#include <string>
#include <vector>

#include "chargraph/functions.hpp"
#include "chargraph/graph.hpp"
#include "chargraph/probability.hpp"
#include "chargraph/topology.hpp"
#include "json.hpp"

namespace chargraph {

struct RateReport {
  std::string method;               // theorem1 | prop1 | prop2 | prop3 | chain | slepian_wolf | linear
  std::vector<int> servers;         // 0-based server ids, aligned with per_server
  std::vector<double> per_server;
  double sum_rate = 0.0;
  std::string unit = "bits";        // "bits" or "symbols" (q-ary)
  double log2_q = 1.0;
  nlohmann::json metadata = nlohmann::json::object();

  double sum_bits() const { return unit == "bits" ? sum_rate : sum_rate * log2_q; }
  double sum_symbols() const { return unit == "symbols" ? sum_rate : sum_rate / log2_q; }
};

RateReport make_report(std::string method, std::vector<int> servers,
                       std::vector<double> per_server);

struct GainReport {
  double eta_lin = 0.0;
  double eta_sw = 0.0;
  RateReport graph, lin, sw;
};

/// lin / graph and sw / graph on bit sums. A zero graph rate gives +inf
/// (NaN when the numerator is zero as well). NaN inputs propagate.
GainReport gains(const RateReport& graph, const RateReport& lin,
                 const RateReport& sw);
double gain_ratio(double numerator, double graph_rate);

/// Per-server candidate encoders g_i: local code (mixed radix over
/// q^{|Z_i|}) -> color id.
struct Codebook {
  std::vector<std::vector<std::vector<int>>> candidates;
};

/// The default codebook: one minimum-entropy coloring of each server's
/// union graph; zero-mass local symbols are sent to color 0.
Codebook default_codebook(const Demand& d, const Placement& p,
                          const JointPmf& joint);

/// Local code -> vertex-coloring lift used by codebooks and encoders.
std::vector<int> lift_coloring(const SourceGraph& sg, const Placement& p,
                               int server, int q,
                               const std::vector<int>& vertex_color);

/// Graph entropy of server i's image graph under g: vertices are the
/// colors of positive-mass symbols with the pushforward PMF.
double image_graph_entropy(const Demand& d, const Placement& p,
                           const JointPmf& joint, int server,
                           const std::vector<int>& g,
                           const SolverOptions& opts = {});

/// True iff, for every Nr-subset of servers, the chosen encoders' outputs
/// determine every demanded function on the support of `joint`.
bool profile_decodable(const Demand& d, const Placement& p,
                       const JointPmf& joint,
                       const std::vector<std::vector<int>>& profile, int nr,
                       std::vector<int>* failing_subset = nullptr);

/// Theorem-1 sum rate. Each server's rate is the minimum image-graph
/// entropy over its candidates; the chosen profile must be decodable by
/// every Nr-subset (DecodeError otherwise). The sum runs over `servers`
/// (default: the first Nr).
RateReport theorem1_sum_rate(const Topology& t, const Placement& p,
                             const Demand& d, const JointPmf& joint,
                             const Codebook& cb,
                             std::optional<std::vector<int>> servers = {},
                             const SolverOptions& opts = {});

/// Same per-server rates, summed over the cheapest Nr-subset that can
/// decode on its own.
RateReport theorem1_best_subset(const Topology& t, const Placement& p,
                                const Demand& d, const JointPmf& joint,
                                const Codebook& cb,
                                const SolverOptions& opts = {});

/// Linearly separable demands, i.i.d. uniform subfunctions, cyclic
/// placement; q-ary symbols.
RateReport prop1_rate(const Topology& t, int kc);

/// Boolean demands over binary subfunctions. Each candidate must be a
/// Boolean valid coloring of the server's union graph, which must have at
/// most two MISs (PremiseError otherwise). Rate_i = min_g h(P(g(X_i) = 1)).
/// An empty candidate list uses the MIS indicator.
RateReport prop2_rate(const Topology& t, const Placement& p, const Demand& d,
                      const JointPmf& joint, const Codebook& cb,
                      std::optional<std::vector<int>> servers = {});

/// Multi-linear demand, i.i.d. Bern(eps), cyclic placement: closed form.
RateReport prop3_rate(const Topology& t, double eps);

/// Servers 1, 1 + (N - Nr + 1), ..., plus the extra server when
/// delta_N > 0 (0-based ids): disjoint cover of the datasets.
std::vector<int> disjoint_cover_ordering(const Topology& t);

struct ChainStep {
  int server = 0;
  double rate = 0.0;
  int slices = 0;       // number of previous-transmission values seen
  int colors = 0;       // largest per-slice color count
};

/// Ordered chain: the first server sends at the graph entropy of its union
/// graph; each later server sends at the conditional graph entropy given
/// all previous transmissions (evaluated slice by slice). Transmissions
/// are per-slice minimum-entropy colorings. DecodeError when the ordering
/// cannot determine the demand.
RateReport chain_rate(const Topology& t, const Placement& p, const Demand& d,
                      const JointPmf& joint, const std::vector<int>& ordering,
                      const SolverOptions& opts = {},
                      std::vector<ChainStep>* steps = nullptr);

/// Minimum over the given orderings; undecodable orderings are skipped.
/// DecodeError when none decodes.
RateReport chain_rate_best(const Topology& t, const Placement& p,
                           const Demand& d, const JointPmf& joint,
                           const std::vector<std::vector<int>>& orderings,
                           const SolverOptions& opts = {});

/// All orderings of all Nr-subsets (requires Nr <= 6).
std::vector<std::vector<int>> all_orderings(int n, int nr);

/// H(W_1..W_K); per-server entries follow the chain rule over the
/// datasets each server newly covers, in server order.
RateReport slepian_wolf_rate(const JointPmf& joint, const Topology& t,
                             const Placement& p);
RateReport slepian_wolf_value(double joint_entropy);

// Scenario formulas --------------------------------------------------------

struct ScenarioRates {
  double graph = 0.0;
  double lin = 0.0;
  double sw = 0.0;
  double eta_lin = 0.0;
  double eta_sw = 0.0;
};

/// Modulo-2 sum of all K bits under the correlation model with rho
/// (rho = 0: i.i.d.). graph = N* h(e_M) + 1{delta_N > 0} h(e_xi),
/// lin = Nr h(e_M), sw = H(W_1..W_K).
ScenarioRates scenario1(const Topology& t, double eps, double rho);

/// Scenario II with i.i.d. bits: graph 2h(eps), lin h(eps) + h(2 eps (1-eps)).
ScenarioRates scenario2_iid(double eps);
/// Scenario II with the crossover table (W_1 independent Bern(eps)).
ScenarioRates scenario2_table2(double eps, double p);
/// Scenario II with the pairwise correlation model.
ScenarioRates scenario2_diniz(double eps, double rho);
/// Scenario III: lin Nr h(eps_M), graph Kc N* h(eps), sw K h(eps).
ScenarioRates scenario3(const Topology& t, double eps);
/// Multi-linear: graph from the closed form, sw K h(eps), lin undefined.
ScenarioRates multilinear_rates(const Topology& t, double eps);

GainReport scenario3_rates(const Topology& t, double eps, int kc);

/// eta_lin of the Scenario II closed forms.
double scenario2_gain_iid(double eps);
double scenario2_gain_table2(double eps, double p);
double scenario2_gain_diniz(double eps, double rho);

void to_json(nlohmann::json& j, const RateReport& r);
void to_json(nlohmann::json& j, const GainReport& g);

}  // namespace chargraph
