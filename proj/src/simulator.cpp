#include "chargraph/simulator.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

#include "chargraph/errors.hpp"

namespace chargraph {

namespace {

constexpr int kChunks = 8;
constexpr double kMaxSequences = 1e7;

std::vector<std::uint64_t> output_codes(const Demand& d) {
  auto tables = d.tabulate();
  std::vector<std::uint64_t> out(tables[0].size(), 0);
  for (std::size_t c = 0; c < out.size(); ++c)
    for (const auto& t : tables)
      out[c] = out[c] * static_cast<std::uint64_t>(d.q()) + t[c];
  return out;
}

// local[cell][e] = local code of cell under encoder e.
std::vector<std::vector<std::size_t>> local_codes(
    const std::vector<Encoder>& encs, const JointPmf& joint) {
  std::vector<std::vector<std::size_t>> lc(
      joint.cells(), std::vector<std::size_t>(encs.size(), 0));
  std::vector<int> w(joint.arity());
  for (std::size_t cell = 0; cell < joint.cells(); ++cell) {
    joint.decode(cell, w);
    for (std::size_t e = 0; e < encs.size(); ++e) {
      std::size_t c = 0;
      for (int k : encs[e].coords) c = c * encs[e].q + w[k];
      lc[cell][e] = c;
    }
  }
  return lc;
}

void check_encoders(const std::vector<Encoder>& encs, const Placement& p) {
  if (static_cast<int>(encs.size()) != p.n)
    throw ValidationError("simulator: need one encoder per server");
  for (std::size_t i = 0; i < encs.size(); ++i)
    if (encs[i].server != static_cast<int>(i) || encs[i].n != encs[0].n)
      throw ValidationError("simulator: encoders out of order or mixed n");
}

}  // namespace

int Encoder::encode(std::span<const std::size_t> local) const {
  std::size_t idx = 0;
  for (std::size_t c : local) {
    int v = vertex_of_code[c];
    if (v < 0) return 0;
    idx = idx * vertices + static_cast<std::size_t>(v);
  }
  return color[idx];
}

std::vector<Encoder> build_encoders(const Topology& t, const Placement& p,
                                    const Demand& d, const JointPmf& joint,
                                    int n, const SolverOptions& opts) {
  t.validate();
  if (n < 1) throw ValidationError("blocklength must be positive");
  if (p.n != t.n) throw ValidationError("placement does not match topology");
  std::vector<Encoder> encs;
  for (int i = 0; i < p.n; ++i) {
    SourceGraph sg = build_char_source_graph(d, p, joint, i);
    const CharGraph& g = sg.graph;
    Encoder e;
    e.server = i;
    e.n = n;
    e.q = d.q();
    e.coords = server_view(p, i, d.q()).coords;
    e.vertex_of_code.assign(pow_size(e.q, e.coords.size()), -1);
    for (std::size_t v = 0; v < g.size(); ++v)
      e.vertex_of_code[encode_tuple(g.labels()[v], e.q)] = static_cast<int>(v);
    e.vertices = g.size();

    CharGraph power = or_power(g, n);
    Coloring single = min_count_coloring(g);
    Coloring best = n == 1 ? single : min_count_coloring(power);
    if (n > 1) {
      std::vector<int> prod(power.size());
      for (std::size_t b = 0; b < power.size(); ++b) {
        std::size_t rest = b, scale = 1;
        int c = 0;
        for (int k = 0; k < n; ++k) {
          c += single.color[rest % g.size()] * static_cast<int>(scale);
          rest /= g.size();
          scale *= single.count;
        }
        prod[b] = c;
      }
      int count = 1;
      for (int k = 0; k < n; ++k) count *= single.count;
      double h = coloring_entropy(power, prod);
      if (count < best.count ||
          (count == best.count && h < best.entropy - 1e-12))
        best = Coloring{std::move(prod), count, h};
    }
    e.color = std::move(best.color);
    e.count = best.count;
    e.block_entropy = best.entropy;
    e.graph_entropy = g.edge_count() == 0 ? 0.0 : graph_entropy(g, opts).value;
    encs.push_back(std::move(e));
  }
  return encs;
}

const std::vector<std::uint64_t>* DecodeTable::lookup(
    const std::vector<int>& colors) const {
  auto it = entries.find(colors);
  return it == entries.end() ? nullptr : &it->second;
}

DecodeTable build_decode_table(const std::vector<Encoder>& encs,
                               const Topology& t, const Placement& p,
                               const Demand& d, const JointPmf& joint,
                               const std::vector<int>& subset) {
  t.validate();
  check_encoders(encs, p);
  if (subset.empty()) throw ValidationError("decode table: empty subset");
  for (int s : subset)
    if (s < 0 || s >= p.n) throw ValidationError("decode table: bad server");
  const int n = encs[0].n;
  std::vector<std::size_t> support;
  for (std::size_t c = 0; c < joint.cells(); ++c)
    if (joint.at(c) > kSupportFloor) support.push_back(c);
  if (std::pow(static_cast<double>(support.size()), n) > kMaxSequences)
    throw GuardError("decode table over " + std::to_string(support.size()) +
                     "^" + std::to_string(n) + " input sequences");
  auto out = output_codes(d);
  auto lc = local_codes(encs, joint);

  DecodeTable tab{subset, n, d, p, {}};
  const std::size_t s = support.size();
  std::size_t total = 1;
  for (int k = 0; k < n; ++k) total *= s;
  std::vector<std::size_t> seq(n), block(n);
  std::vector<int> key(subset.size());
  std::vector<std::uint64_t> outs(n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t r = idx;
    for (int k = n - 1; k >= 0; --k) {
      seq[k] = support[r % s];
      r /= s;
    }
    for (std::size_t j = 0; j < subset.size(); ++j) {
      for (int k = 0; k < n; ++k) block[k] = lc[seq[k]][subset[j]];
      key[j] = encs[subset[j]].encode(block);
    }
    for (int k = 0; k < n; ++k) outs[k] = out[seq[k]];
    auto [it, fresh] = tab.entries.emplace(key, outs);
    if (!fresh && it->second != outs) {
      std::string ss;
      for (int x : subset) ss += (ss.empty() ? "" : ",") + std::to_string(x + 1);
      throw DecodeError("color collision for server subset {" + ss +
                        "}: two inputs share colors but not outputs");
    }
  }
  return tab;
}

bool verify_zero_error(const std::vector<Encoder>& encs, const Topology& t,
                       const Placement& p, const Demand& d,
                       const JointPmf& joint, std::vector<int>* failing) {
  if (binomial(p.n, t.nr) > 1e6)
    throw GuardError("verification over C(" + std::to_string(p.n) + ", " +
                     std::to_string(t.nr) + ") subsets");
  bool ok = true;
  for_each_subset(p.n, t.nr, [&](const std::vector<int>& s) {
    try {
      build_decode_table(encs, t, p, d, joint, s);
    } catch (const DecodeError&) {
      ok = false;
      if (failing) *failing = s;
    }
    return ok;
  });
  return ok;
}

int worker_threads() {
  if (const char* env = std::getenv("CHARGRAPH_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SimResult run_simulation(const std::vector<Encoder>& encs,
                         const DecodeTable& table, const JointPmf& joint,
                         int n, std::uint64_t trials, std::uint64_t seed) {
  check_encoders(encs, table.placement);
  if (n != encs[0].n || n != table.n)
    throw ValidationError("simulation: blocklength differs from encoders");
  auto out = output_codes(table.demand);
  auto lc = local_codes(encs, joint);
  const std::size_t ne = encs.size();

  struct Tally {
    std::uint64_t trials = 0, errors = 0;
    std::vector<std::vector<std::uint64_t>> hist;
  };
  std::vector<Tally> tallies(kChunks);
  std::atomic<int> next{0};

  auto work = [&] {
    std::vector<std::size_t> seq(n), block(n);
    std::vector<int> colors(ne), key(table.subset.size());
    std::vector<std::uint64_t> truth(n);
    for (int c; (c = next.fetch_add(1)) < kChunks;) {
      Tally& tl = tallies[c];
      tl.hist.resize(ne);
      for (std::size_t e = 0; e < ne; ++e) tl.hist[e].assign(encs[e].count, 0);
      tl.trials = trials / kChunks + (static_cast<std::uint64_t>(c) < trials % kChunks);
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(c));
      std::discrete_distribution<std::size_t> draw(joint.mass().begin(),
                                                   joint.mass().end());
      for (std::uint64_t tr = 0; tr < tl.trials; ++tr) {
        for (int k = 0; k < n; ++k) {
          seq[k] = draw(rng);
          truth[k] = out[seq[k]];
        }
        for (std::size_t e = 0; e < ne; ++e) {
          for (int k = 0; k < n; ++k) block[k] = lc[seq[k]][e];
          colors[e] = encs[e].encode(block);
          ++tl.hist[e][colors[e]];
        }
        for (std::size_t j = 0; j < key.size(); ++j)
          key[j] = colors[table.subset[j]];
        const auto* got = table.lookup(key);
        if (!got || *got != truth) ++tl.errors;
      }
    }
  };
  const int nt = std::min(worker_threads(), kChunks);
  std::vector<std::thread> pool;
  for (int i = 1; i < nt; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  SimResult r;
  r.n = n;
  r.seed = seed;
  std::vector<std::vector<std::uint64_t>> hist(ne);
  for (std::size_t e = 0; e < ne; ++e) hist[e].assign(encs[e].count, 0);
  for (const auto& tl : tallies) {
    r.trials += tl.trials;
    r.errors += tl.errors;
    for (std::size_t e = 0; e < ne; ++e)
      for (std::size_t k = 0; k < hist[e].size(); ++k) hist[e][k] += tl.hist[e][k];
  }
  for (std::size_t e = 0; e < ne; ++e) {
    double h = 0.0;
    for (std::uint64_t c : hist[e])
      if (c > 0) {
        double f = static_cast<double>(c) / static_cast<double>(r.trials);
        h -= f * std::log2(f);
      }
    r.servers.push_back(encs[e].server);
    r.empirical.push_back(r.trials ? h / n : 0.0);
    r.theoretical.push_back(encs[e].rate());
    r.graph_entropy.push_back(encs[e].graph_entropy);
  }
  return r;
}

void to_json(nlohmann::json& j, const SimResult& r) {
  std::vector<int> servers;
  for (int s : r.servers) servers.push_back(s + 1);
  j = nlohmann::json{{"trials", r.trials},         {"errors", r.errors},
                     {"empirical", r.empirical},   {"theoretical", r.theoretical},
                     {"graph_entropy", r.graph_entropy},
                     {"servers", servers},         {"n", r.n},
                     {"seed", r.seed}};
}

void to_json(nlohmann::json& j, const Encoder& e) {
  j = nlohmann::json{{"server", e.server + 1},
                     {"n", e.n},
                     {"colors", e.count},
                     {"rate", e.rate()},
                     {"graph_entropy", e.graph_entropy}};
}

}  // namespace chargraph
