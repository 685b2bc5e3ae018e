#pragma once

// Zero-error block coding: servers color length-n blocks of their local
// symbols with colorings of the OR power of their union graph; the user
// decodes from the colors of a recovery subset.

#include <cstdint>
#include <map>
#include <vector>

#include "chargraph/functions.hpp"
#include "chargraph/graph.hpp"
#include "chargraph/probability.hpp"
#include "chargraph/topology.hpp"
#include "json.hpp"

namespace chargraph {

struct Encoder {
  int server = 0;
  int n = 1;                        // blocklength
  int q = 2;
  std::vector<int> coords;          // 0-based subfunction coordinates
  std::vector<int> vertex_of_code;  // local code -> union-graph vertex, -1 if zero mass
  std::size_t vertices = 0;         // union-graph size m
  std::vector<int> color;           // block index over m^n -> color id
  int count = 0;
  double block_entropy = 0.0;       // exact H(color) of one block
  double graph_entropy = 0.0;       // H_G of the union graph

  /// Color of a block given the local codes of its n symbols.
  int encode(std::span<const std::size_t> local_codes) const;
  double rate() const { return block_entropy / n; }
};

/// One encoder per server: the fewer-color of a minimum-count coloring of
/// G^n and the n-fold product of the exact single-letter coloring (ties
/// by entropy).
std::vector<Encoder> build_encoders(const Topology& t, const Placement& p,
                                    const Demand& d, const JointPmf& joint,
                                    int n, const SolverOptions& opts = {});

struct DecodeTable {
  std::vector<int> subset;  // 0-based servers
  int n = 1;
  Demand demand = Demand::multilinear(1);
  Placement placement;
  std::map<std::vector<int>, std::vector<std::uint64_t>> entries;

  const std::vector<std::uint64_t>* lookup(const std::vector<int>& colors) const;
};

/// Exhaustive over positive-probability length-n input sequences.
/// DecodeError when two inputs share a color profile but not their outputs.
DecodeTable build_decode_table(const std::vector<Encoder>& encoders,
                               const Topology& t, const Placement& p,
                               const Demand& d, const JointPmf& joint,
                               const std::vector<int>& subset);

/// Builds a table for every Nr-subset; returns false at the first collision.
bool verify_zero_error(const std::vector<Encoder>& encoders, const Topology& t,
                       const Placement& p, const Demand& d,
                       const JointPmf& joint,
                       std::vector<int>* failing_subset = nullptr);

struct SimResult {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  int n = 1;
  std::uint64_t seed = 0;
  std::vector<int> servers;
  std::vector<double> empirical;      // bits per source symbol
  std::vector<double> theoretical;    // exact color entropy / n
  std::vector<double> graph_entropy;  // single-letter H_G
};

/// Monte-Carlo over i.i.d. length-n blocks. Work is split into 8 chunks
/// seeded seed + chunk and run on CHARGRAPH_THREADS threads, so results do
/// not depend on the thread count.
SimResult run_simulation(const std::vector<Encoder>& encoders,
                         const DecodeTable& table, const JointPmf& joint,
                         int n, std::uint64_t trials, std::uint64_t seed);

/// CHARGRAPH_THREADS if set and positive, else hardware concurrency.
int worker_threads();

void to_json(nlohmann::json& j, const SimResult& r);
void to_json(nlohmann::json& j, const Encoder& e);

}  // namespace chargraph
