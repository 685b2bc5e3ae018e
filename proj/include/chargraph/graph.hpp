#pragma once

// Characteristic graphs: construction from a demand and a joint PMF,
// union and OR-power graphs, maximal independent sets, colorings,
// chromatic entropy, graph entropy and conditional graph entropy.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chargraph/functions.hpp"
#include "chargraph/probability.hpp"
#include "chargraph/topology.hpp"
#include "json.hpp"

namespace chargraph {

inline constexpr std::size_t kMaxMisVertices = 64;
inline constexpr std::size_t kMaxExactColoring = 12;
inline constexpr std::size_t kMaxPowerVertices = 100000;
inline constexpr std::size_t kMaxPowerEdges = 20000000;
inline constexpr std::size_t kMaxMisCount = 200000;

class CharGraph {
 public:
  CharGraph() = default;
  /// Vertices 0..n-1 with the given masses; zero-mass vertices are kept
  /// here (use prune_zero_mass to drop them). Labels default to {v}.
  CharGraph(std::vector<double> pmf,
            const std::vector<std::pair<int, int>>& edges,
            std::vector<std::vector<int>> labels = {});

  /// Adopts prebuilt adjacency lists (sorted, symmetric, loop-free).
  static CharGraph from_adjacency(std::vector<double> pmf,
                                  std::vector<std::vector<int>> adj,
                                  std::vector<std::vector<int>> labels);

  std::size_t size() const { return pmf_.size(); }
  std::size_t edge_count() const;
  const std::vector<double>& pmf() const { return pmf_; }
  const std::vector<std::vector<int>>& labels() const { return labels_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  bool adjacent(int u, int v) const;
  std::vector<std::pair<int, int>> edges() const;

  /// Adjacency bitmasks; requires size() <= 64.
  std::vector<std::uint64_t> masks() const;

  /// Induced subgraph on the listed vertices, masses renormalized.
  CharGraph induced(std::span<const int> vertices) const;

  /// Shannon entropy of the vertex PMF.
  double source_entropy() const { return entropy_bits(pmf_); }

  /// Throws ValidationError on self-loops, asymmetric adjacency,
  /// non-positive masses or masses not summing to 1 within 1e-9.
  void validate() const;

 private:
  std::vector<double> pmf_;
  std::vector<std::vector<int>> labels_;
  std::vector<std::vector<int>> adj_;
};

/// Drops zero-mass vertices (and their edges), renormalizing the rest.
CharGraph prune_zero_mass(const CharGraph& g);

/// A graph built from a joint PMF together with the map from joint cells
/// to vertex ids (-1 for zero-mass cells).
struct SourceGraph {
  CharGraph graph;
  std::vector<int> cell_vertex;
};

using VertexKeyFn = std::function<std::vector<int>(std::span<const int> w)>;
using OutputFn = std::function<std::uint64_t(std::span<const int> w)>;

/// Generic confusability graph. Every positive-mass cell w of `joint` is
/// split into the coordinates in `local` and the complementary ones r;
/// its vertex is key(w). Two vertices are adjacent iff some r appears
/// with both and the outputs of the two merged tuples differ. Vertices
/// are ordered by key.
SourceGraph build_source_graph(const JointPmf& joint,
                               std::span<const int> local,
                               const VertexKeyFn& key, const OutputFn& outputs);

/// Characteristic graph of server i (0-based) for the listed demanded
/// functions (0-based; empty means all). Vertices are the positive-mass
/// local tuples, ordered by mixed-radix code.
CharGraph build_char_graph(const Demand& d, const Placement& p,
                           const JointPmf& joint, int server,
                           std::span<const int> demand_subset = {});

SourceGraph build_char_source_graph(const Demand& d, const Placement& p,
                                    const JointPmf& joint, int server,
                                    std::span<const int> demand_subset = {});

CharGraph union_graph(const std::vector<CharGraph>& gs);

/// n-th OR power; guards |V|^n <= 1e5 and edge count <= 2e7.
CharGraph or_power(const CharGraph& g, int n);

struct MisFamily {
  std::vector<std::vector<int>> sets;         // ascending vertex ids
  std::vector<std::vector<int>> of_vertex;    // MIS ids containing v
};

/// All maximal independent sets (maximal cliques of the complement,
/// pivoting Bron-Kerbosch). Requires |V| <= 64.
MisFamily enumerate_mis(const CharGraph& g);

struct Coloring {
  std::vector<int> color;  // per vertex, colors 0..count-1
  int count = 0;
  double entropy = 0.0;    // H(c(X)) under the vertex PMF
};

bool is_valid_coloring(const CharGraph& g, std::span<const int> color);
double coloring_entropy(const CharGraph& g, std::span<const int> color);

/// Exact minimum-entropy coloring over partitions into independent sets.
/// Requires |V| <= 12.
Coloring min_entropy_coloring(const CharGraph& g);
double chromatic_entropy(const CharGraph& g);

/// Greedy coloring in decreasing-degree order, ties by vertex id.
Coloring greedy_coloring(const CharGraph& g);

/// Minimum number of colors, ties broken by smaller color entropy; exact
/// for |V| <= 12, greedy otherwise.
Coloring min_count_coloring(const CharGraph& g);

/// Minimum-entropy coloring when exact search is possible, greedy
/// otherwise.
Coloring best_coloring(const CharGraph& g);

struct SolverOptions {
  double tol = 1e-9;
  int max_iters = 100000;
  int restarts = 8;
  std::uint64_t seed = 20240607;
};

struct GraphEntropyResult {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  double gap = 0.0;            // certified optimality gap (graph entropy)
  double restart_spread = 0.0; // max - min over restarts
  std::vector<std::vector<int>> mis;
  // conditional_pmf[v] = list of (MIS id, P(u | v)) with P > 0.
  std::vector<std::vector<std::pair<int, double>>> conditional_pmf;
};

GraphEntropyResult graph_entropy(const CharGraph& g,
                                 const SolverOptions& opts = {});

/// H_G(X | Y) for a Markov chain U - X - Y. joint_xy[v][y] = P(X = v, Y = y);
/// its row sums must match g's vertex PMF within 1e-9.
GraphEntropyResult conditional_graph_entropy(
    const CharGraph& g, const std::vector<std::vector<double>>& joint_xy,
    const SolverOptions& opts = {});

/// Same, with an arity-2 JointPmf whose first coordinate is the vertex id.
GraphEntropyResult conditional_graph_entropy(const CharGraph& g,
                                             const JointPmf& joint,
                                             const SolverOptions& opts = {});

std::string to_dot(const CharGraph& g, const std::string& name = "G");

void to_json(nlohmann::json& j, const GraphEntropyResult& r);
void to_json(nlohmann::json& j, const CharGraph& g);

/// Reads {"vertices":[labels], "pmf":[..], "edges":[[a,b],..]}; edges
/// refer to labels. Zero-mass vertices are pruned.
CharGraph graph_from_json(const nlohmann::json& j);

}  // namespace chargraph
