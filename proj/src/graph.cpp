#include "chargraph/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "chargraph/errors.hpp"

namespace chargraph {

namespace {

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

// Symmetric edge accumulator: dense bit rows for small graphs, a hash set
// of packed pairs otherwise.
class EdgeSet {
 public:
  explicit EdgeSet(std::size_t n) : n_(n) {
    if (n <= 16384) {
      words_ = (n + 63) / 64;
      bits_.assign(n * words_, 0);
    }
  }
  void add(int u, int v) {
    if (u == v) return;
    if (u > v) std::swap(u, v);
    if (!bits_.empty()) {
      bits_[u * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
    } else {
      hashed_.insert((static_cast<std::uint64_t>(u) << 32) |
                     static_cast<std::uint32_t>(v));
    }
  }
  std::vector<std::vector<int>> lists() const {
    std::vector<std::vector<int>> adj(n_);
    if (!bits_.empty()) {
      for (std::size_t u = 0; u < n_; ++u)
        for (std::size_t w = 0; w < words_; ++w) {
          std::uint64_t b = bits_[u * words_ + w];
          while (b) {
            int v = static_cast<int>(w * 64 + std::countr_zero(b));
            b &= b - 1;
            adj[u].push_back(v);
            adj[v].push_back(static_cast<int>(u));
          }
        }
    } else {
      for (std::uint64_t e : hashed_) {
        int u = static_cast<int>(e >> 32), v = static_cast<int>(e & 0xffffffffu);
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
  }

 private:
  std::size_t n_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::unordered_set<std::uint64_t> hashed_;
};

}  // namespace

// ----------------------------------------------------------- CharGraph

CharGraph::CharGraph(std::vector<double> pmf,
                     const std::vector<std::pair<int, int>>& edges,
                     std::vector<std::vector<int>> labels)
    : pmf_(std::move(pmf)), labels_(std::move(labels)) {
  const int n = static_cast<int>(pmf_.size());
  if (labels_.empty())
    for (int v = 0; v < n; ++v) labels_.push_back({v});
  if (static_cast<int>(labels_.size()) != n)
    throw ValidationError("graph: one label per vertex required");
  EdgeSet es(n);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw ValidationError("graph: edge endpoint out of range");
    if (u == v) throw ValidationError("graph: self-loop");
    es.add(u, v);
  }
  adj_ = es.lists();
}

CharGraph CharGraph::from_adjacency(std::vector<double> pmf,
                                    std::vector<std::vector<int>> adj,
                                    std::vector<std::vector<int>> labels) {
  CharGraph g;
  g.pmf_ = std::move(pmf);
  g.adj_ = std::move(adj);
  g.labels_ = std::move(labels);
  if (g.labels_.empty())
    for (int v = 0; v < static_cast<int>(g.pmf_.size()); ++v)
      g.labels_.push_back({v});
  if (g.adj_.size() != g.pmf_.size() || g.labels_.size() != g.pmf_.size())
    throw ValidationError("graph: adjacency/label/pmf size mismatch");
  return g;
}

std::size_t CharGraph::edge_count() const {
  std::size_t d = 0;
  for (const auto& a : adj_) d += a.size();
  return d / 2;
}

bool CharGraph::adjacent(int u, int v) const {
  const auto& a = adj_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

std::vector<std::pair<int, int>> CharGraph::edges() const {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < static_cast<int>(adj_.size()); ++u)
    for (int v : adj_[u])
      if (u < v) e.emplace_back(u, v);
  return e;
}

std::vector<std::uint64_t> CharGraph::masks() const {
  if (size() > 64)
    throw GuardError("bitmask graph view needs |V| <= 64, got " +
                     std::to_string(size()));
  std::vector<std::uint64_t> m(size(), 0);
  for (std::size_t u = 0; u < size(); ++u)
    for (int v : adj_[u]) m[u] |= std::uint64_t{1} << v;
  return m;
}

CharGraph CharGraph::induced(std::span<const int> vertices) const {
  std::vector<int> pos(size(), -1);
  std::vector<double> pmf;
  std::vector<std::vector<int>> labels;
  double total = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    int v = vertices[i];
    if (v < 0 || v >= static_cast<int>(size()) || pos[v] >= 0)
      throw ValidationError("induced: bad vertex list");
    pos[v] = static_cast<int>(i);
    pmf.push_back(pmf_[v]);
    labels.push_back(labels_[v]);
    total += pmf_[v];
  }
  if (total > 0.0)
    for (double& m : pmf) m /= total;
  std::vector<std::vector<int>> adj(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (int w : adj_[vertices[i]])
      if (pos[w] >= 0) adj[i].push_back(pos[w]);
    std::sort(adj[i].begin(), adj[i].end());
  }
  return from_adjacency(std::move(pmf), std::move(adj), std::move(labels));
}

void CharGraph::validate() const {
  double s = 0.0;
  for (double m : pmf_) {
    if (!(m > 0.0)) throw ValidationError("graph: vertex with zero mass");
    s += m;
  }
  if (std::abs(s - 1.0) > kModelTol)
    throw ValidationError("graph: vertex masses sum to " + std::to_string(s));
  for (int u = 0; u < static_cast<int>(adj_.size()); ++u)
    for (int v : adj_[u]) {
      if (v == u) throw ValidationError("graph: self-loop");
      if (!adjacent(v, u)) throw ValidationError("graph: asymmetric edge");
    }
}

CharGraph prune_zero_mass(const CharGraph& g) {
  std::vector<int> keep;
  for (int v = 0; v < static_cast<int>(g.size()); ++v)
    if (g.pmf()[v] > kSupportFloor) keep.push_back(v);
  if (keep.empty()) throw ValidationError("graph: empty support");
  return g.induced(keep);
}

// ---------------------------------------------------------- construction

SourceGraph build_source_graph(const JointPmf& joint,
                               std::span<const int> local,
                               const VertexKeyFn& key,
                               const OutputFn& outputs) {
  const std::size_t arity = joint.arity();
  std::vector<bool> is_local(arity, false);
  for (int c : local) {
    if (c < 0 || static_cast<std::size_t>(c) >= arity || is_local[c])
      throw ValidationError("source graph: bad local coordinate list");
    is_local[c] = true;
  }
  std::vector<std::size_t> rest;
  for (std::size_t c = 0; c < arity; ++c)
    if (!is_local[c]) rest.push_back(c);

  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> cell_key(joint.cells());
  std::vector<int> w(arity);
  for (std::size_t cell = 0; cell < joint.cells(); ++cell) {
    if (joint.at(cell) <= kSupportFloor) continue;
    joint.decode(cell, w);
    cell_key[cell] = key(w);
    ids.emplace(cell_key[cell], 0);
  }
  if (ids.empty()) throw ValidationError("source graph: empty support");
  int next = 0;
  std::vector<std::vector<int>> labels;
  for (auto& [k, id] : ids) {
    id = next++;
    labels.push_back(k);
  }

  SourceGraph sg;
  sg.cell_vertex.assign(joint.cells(), -1);
  std::vector<double> pmf(ids.size(), 0.0);
  std::unordered_map<std::size_t, std::vector<std::pair<int, std::uint64_t>>>
      groups;
  for (std::size_t cell = 0; cell < joint.cells(); ++cell) {
    if (joint.at(cell) <= kSupportFloor) continue;
    joint.decode(cell, w);
    int v = ids.at(cell_key[cell]);
    sg.cell_vertex[cell] = v;
    pmf[v] += joint.at(cell);
    std::size_t rcode = 0;
    for (std::size_t c : rest)
      rcode = rcode * joint.radices()[c] + static_cast<std::size_t>(w[c]);
    groups[rcode].emplace_back(v, outputs(w));
  }
  double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
  for (double& m : pmf) m /= total;

  EdgeSet es(ids.size());
  for (auto& [r, members] : groups) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        if (members[a].first != members[b].first &&
            members[a].second != members[b].second)
          es.add(members[a].first, members[b].first);
  }
  sg.graph = CharGraph::from_adjacency(std::move(pmf), es.lists(),
                                       std::move(labels));
  return sg;
}

SourceGraph build_char_source_graph(const Demand& d, const Placement& p,
                                    const JointPmf& joint, int server,
                                    std::span<const int> demand_subset) {
  p.validate();
  if (p.k != d.k() || static_cast<int>(joint.arity()) != d.k())
    throw ValidationError("char graph: K differs across demand, placement, PMF");
  for (std::size_t r : joint.radices())
    if (static_cast<int>(r) != d.q())
      throw ValidationError("char graph: PMF alphabet differs from q");
  if (server < 0 || server >= p.n)
    throw ValidationError("char graph: server index out of range");
  std::vector<int> fs(demand_subset.begin(), demand_subset.end());
  if (fs.empty()) {
    fs.resize(d.kc());
    std::iota(fs.begin(), fs.end(), 0);
  }
  for (int f : fs)
    if (f < 0 || f >= d.kc())
      throw ValidationError("char graph: demanded function index out of range");
  auto tables = d.tabulate();
  const std::vector<int> local = server_view(p, server, d.q()).coords;
  const int q = d.q();
  auto key = [&](std::span<const int> w) {
    std::vector<int> x;
    x.reserve(local.size());
    for (int c : local) x.push_back(w[c]);
    return x;
  };
  auto out = [&](std::span<const int> w) {
    std::size_t cell = encode_tuple(w, q);
    std::uint64_t o = 0;
    for (int f : fs) o = o * static_cast<std::uint64_t>(q) + tables[f][cell];
    return o;
  };
  return build_source_graph(joint, local, key, out);
}

CharGraph build_char_graph(const Demand& d, const Placement& p,
                           const JointPmf& joint, int server,
                           std::span<const int> demand_subset) {
  return build_char_source_graph(d, p, joint, server, demand_subset).graph;
}

CharGraph union_graph(const std::vector<CharGraph>& gs) {
  if (gs.empty()) throw ValidationError("union_graph: no graphs");
  const CharGraph& g0 = gs[0];
  EdgeSet es(g0.size());
  for (const auto& g : gs) {
    if (g.size() != g0.size() || g.labels() != g0.labels())
      throw ValidationError("union_graph: vertex sets differ");
    for (std::size_t v = 0; v < g.size(); ++v)
      if (std::abs(g.pmf()[v] - g0.pmf()[v]) > kConstructionTol)
        throw ValidationError("union_graph: vertex PMFs differ");
    for (auto [u, v] : g.edges()) es.add(u, v);
  }
  return CharGraph::from_adjacency(g0.pmf(), es.lists(), g0.labels());
}

CharGraph or_power(const CharGraph& g, int n) {
  if (n < 1) throw ValidationError("or_power: n must be positive");
  const std::size_t m = g.size();
  double cells = std::pow(static_cast<double>(m), n);
  if (cells > static_cast<double>(kMaxPowerVertices))
    throw GuardError("OR power with |V|^n = " + std::to_string(m) + "^" +
                     std::to_string(n) + " vertices");
  if (n == 1) return g;
  const std::size_t total = static_cast<std::size_t>(cells);

  // Non-adjacent ordered pairs per coordinate (including equal symbols)
  // multiply; edges are the rest.
  double non_adj = std::pow(static_cast<double>(m * m - 2 * g.edge_count()), n);
  double edges = (static_cast<double>(total) * total - non_adj) / 2.0;
  if (edges > static_cast<double>(kMaxPowerEdges))
    throw GuardError("OR power with " + std::to_string(edges) + " edges");

  std::vector<double> pmf(total);
  std::vector<std::vector<int>> labels(total);
  std::vector<std::vector<int>> digits(total, std::vector<int>(n));
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t c = t;
    for (int i = n - 1; i >= 0; --i) {
      digits[t][i] = static_cast<int>(c % m);
      c /= m;
    }
    double p = 1.0;
    for (int i = 0; i < n; ++i) {
      int s = digits[t][i];
      p *= g.pmf()[s];
      labels[t].insert(labels[t].end(), g.labels()[s].begin(),
                       g.labels()[s].end());
    }
    pmf[t] = p;
  }

  // Per symbol: neighbors, and "free" symbols (equal or non-adjacent).
  std::vector<std::vector<int>> nb(m), fr(m);
  for (std::size_t s = 0; s < m; ++s) {
    nb[s] = g.neighbors(static_cast<int>(s));
    for (std::size_t r = 0; r < m; ++r)
      if (!g.adjacent(static_cast<int>(s), static_cast<int>(r)))
        fr[s].push_back(static_cast<int>(r));
  }
  std::vector<std::vector<int>> adj(total);
  std::vector<int> cur(n);
  for (std::size_t t = 0; t < total; ++t) {
    const auto& u = digits[t];
    // Depth-first over coordinates; `hit` records an adjacent coordinate.
    std::function<void(int, bool, std::size_t)> rec = [&](int i, bool hit,
                                                          std::size_t code) {
      if (i == n) {
        if (hit) adj[t].push_back(static_cast<int>(code));
        return;
      }
      if (hit) {
        for (std::size_t s = 0; s < m; ++s) rec(i + 1, true, code * m + s);
        return;
      }
      for (int s : nb[u[i]]) rec(i + 1, true, code * m + s);
      for (int s : fr[u[i]]) rec(i + 1, false, code * m + s);
    };
    rec(0, false, 0);
    std::sort(adj[t].begin(), adj[t].end());
  }
  return CharGraph::from_adjacency(std::move(pmf), std::move(adj),
                                   std::move(labels));
}

// ------------------------------------------------------------------ MIS

MisFamily enumerate_mis(const CharGraph& g) {
  const std::size_t n = g.size();
  if (n > kMaxMisVertices)
    throw GuardError("MIS enumeration needs |V| <= 64, got " +
                     std::to_string(n));
  MisFamily fam;
  fam.of_vertex.resize(n);
  if (n == 0) return fam;
  const std::uint64_t all =
      n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  auto adj = g.masks();
  std::vector<std::uint64_t> comp(n);
  for (std::size_t v = 0; v < n; ++v)
    comp[v] = all & ~adj[v] & ~(std::uint64_t{1} << v);

  std::vector<std::uint64_t> found;
  std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)> bk =
      [&](std::uint64_t r, std::uint64_t p, std::uint64_t x) {
        if (p == 0) {
          if (x == 0) {
            found.push_back(r);
            if (found.size() > kMaxMisCount)
              throw GuardError("more than " + std::to_string(kMaxMisCount) +
                               " maximal independent sets");
          }
          return;
        }
        std::uint64_t px = p | x;
        int pivot = -1, best = -1;
        while (px) {
          int u = std::countr_zero(px);
          px &= px - 1;
          int c = std::popcount(p & comp[u]);
          if (c > best) {
            best = c;
            pivot = u;
          }
        }
        std::uint64_t cand = p & ~comp[pivot];
        while (cand) {
          int v = std::countr_zero(cand);
          cand &= cand - 1;
          std::uint64_t bit = std::uint64_t{1} << v;
          bk(r | bit, p & comp[v], x & comp[v]);
          p &= ~bit;
          x |= bit;
        }
      };
  bk(0, all, 0);
  std::sort(found.begin(), found.end(), [](std::uint64_t a, std::uint64_t b) {
    // Order by smallest member first (lexicographic on ascending ids).
    while (a && b) {
      int ia = std::countr_zero(a), ib = std::countr_zero(b);
      if (ia != ib) return ia < ib;
      a &= a - 1;
      b &= b - 1;
    }
    return a == 0 && b != 0;
  });
  for (std::size_t id = 0; id < found.size(); ++id) {
    std::vector<int> s;
    std::uint64_t b = found[id];
    while (b) {
      int v = std::countr_zero(b);
      b &= b - 1;
      s.push_back(v);
      fam.of_vertex[v].push_back(static_cast<int>(id));
    }
    fam.sets.push_back(std::move(s));
  }
  return fam;
}

// ------------------------------------------------------------- colorings

bool is_valid_coloring(const CharGraph& g, std::span<const int> color) {
  if (color.size() != g.size()) return false;
  for (auto [u, v] : g.edges())
    if (color[u] == color[v]) return false;
  return true;
}

double coloring_entropy(const CharGraph& g, std::span<const int> color) {
  std::map<int, double> mass;
  for (std::size_t v = 0; v < g.size(); ++v) mass[color[v]] += g.pmf()[v];
  double h = 0.0;
  for (auto [c, m] : mass) h += plogp(m);
  return h;
}

namespace {

Coloring finish(const CharGraph& g, std::vector<int> color) {
  // Renumber colors by first appearance.
  std::map<int, int> remap;
  for (int& c : color) {
    auto it = remap.emplace(c, static_cast<int>(remap.size())).first;
    c = it->second;
  }
  Coloring out;
  out.count = static_cast<int>(remap.size());
  out.entropy = coloring_entropy(g, color);
  out.color = std::move(color);
  return out;
}

// Exact partition search into independent sets. The cost of a class S is
// (count_weight, plogp(mass(S))); classes minimize lexicographically.
Coloring exact_partition(const CharGraph& g, bool count_first) {
  const std::size_t n = g.size();
  if (n > kMaxExactColoring)
    throw GuardError("exact coloring needs |V| <= 12, got " +
                     std::to_string(n));
  if (n == 0) return {};
  const std::uint32_t full = (1u << n) - 1;
  auto adj = g.masks();
  std::vector<char> indep(full + 1, 1);
  std::vector<double> mass(full + 1, 0.0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    int v = std::countr_zero(s);
    std::uint32_t r = s & (s - 1);
    mass[s] = mass[r] + g.pmf()[v];
    indep[s] = indep[r] && ((adj[v] & r) == 0);
  }
  std::vector<int> cnt(full + 1, 0);
  std::vector<double> ent(full + 1, 0.0);
  std::vector<std::uint32_t> choice(full + 1, 0);
  const double eps = 1e-12;
  for (std::uint32_t s = 1; s <= full; ++s) {
    std::uint32_t low = s & (~s + 1);
    std::uint32_t rest = s ^ low;
    int best_c = std::numeric_limits<int>::max();
    double best_h = std::numeric_limits<double>::infinity();
    // Enumerate subsets of `rest`, each joined with the lowest vertex.
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      std::uint32_t cls = sub | low;
      if (indep[cls]) {
        std::uint32_t rem = s ^ cls;
        int c = cnt[rem] + 1;
        double h = ent[rem] + plogp(mass[cls]);
        bool better;
        if (count_first)
          better = c < best_c || (c == best_c && h < best_h - eps);
        else
          better = h < best_h - eps || (std::abs(h - best_h) <= eps && c < best_c);
        if (better) {
          best_c = c;
          best_h = h;
          choice[s] = cls;
        }
      }
      if (sub == 0) break;
    }
    cnt[s] = best_c;
    ent[s] = best_h;
  }
  std::vector<int> color(n, -1);
  int c = 0;
  for (std::uint32_t s = full; s; s ^= choice[s], ++c) {
    std::uint32_t cls = choice[s];
    while (cls) {
      color[std::countr_zero(cls)] = c;
      cls &= cls - 1;
    }
  }
  return finish(g, std::move(color));
}

}  // namespace

Coloring min_entropy_coloring(const CharGraph& g) {
  return exact_partition(g, false);
}

double chromatic_entropy(const CharGraph& g) {
  return min_entropy_coloring(g).entropy;
}

Coloring greedy_coloring(const CharGraph& g) {
  const int n = static_cast<int>(g.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return g.neighbors(a).size() > g.neighbors(b).size();
  });
  std::vector<int> color(n, -1);
  std::vector<int> used;
  for (int v : order) {
    used.clear();
    for (int w : g.neighbors(v))
      if (color[w] >= 0) used.push_back(color[w]);
    std::sort(used.begin(), used.end());
    int c = 0;
    for (int u : used) {
      if (u == c) ++c;
      else if (u > c) break;
    }
    color[v] = c;
  }
  return finish(g, std::move(color));
}

Coloring min_count_coloring(const CharGraph& g) {
  if (g.size() <= kMaxExactColoring) return exact_partition(g, true);
  return greedy_coloring(g);
}

Coloring best_coloring(const CharGraph& g) {
  if (g.size() <= kMaxExactColoring) return exact_partition(g, false);
  return greedy_coloring(g);
}

// --------------------------------------------------------- graph entropy

namespace {

// Initial P(u | x): uniform over containing MISs, or random positive
// weights for restarts after the first.
std::vector<std::vector<double>> initial_channel(const MisFamily& fam,
                                                 int restart,
                                                 std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  std::vector<std::vector<double>> p(fam.of_vertex.size());
  for (std::size_t v = 0; v < fam.of_vertex.size(); ++v) {
    const auto& us = fam.of_vertex[v];
    p[v].assign(us.size(), 1.0);
    if (restart > 0)
      for (double& x : p[v]) x = unif(rng);
    double s = std::accumulate(p[v].begin(), p[v].end(), 0.0);
    for (double& x : p[v]) x /= s;
  }
  return p;
}

struct Run {
  double value = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::vector<std::pair<int, double>>> channel;
};

Run run_em(const CharGraph& g, const MisFamily& fam,
           const std::vector<std::vector<double>>& init,
           const SolverOptions& opts) {
  const std::size_t n = g.size(), nu = fam.sets.size();
  const auto& p = g.pmf();
  std::vector<double> q(nu, 0.0);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t k = 0; k < fam.of_vertex[v].size(); ++k)
      q[fam.of_vertex[v][k]] += p[v] * init[v][k];
  std::vector<double> s(n), gu(nu);
  Run run;
  double f = 0.0;
  for (int it = 0;; ++it) {
    f = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      double sv = 0.0;
      for (int u : fam.of_vertex[v]) sv += q[u];
      s[v] = sv;
      f -= p[v] * std::log2(sv);
    }
    double gmax = 0.0;
    for (std::size_t u = 0; u < nu; ++u) {
      double acc = 0.0;
      for (int v : fam.sets[u]) acc += p[v] / s[v];
      gu[u] = acc;
      gmax = std::max(gmax, acc);
    }
    run.gap = std::max(0.0, std::log2(gmax));
    run.iterations = it;
    if (run.gap < opts.tol) {
      run.converged = true;
      break;
    }
    if (it >= opts.max_iters) break;
    double tot = 0.0;
    for (std::size_t u = 0; u < nu; ++u) {
      q[u] *= gu[u];
      tot += q[u];
    }
    for (double& x : q) x /= tot;
  }
  run.value = std::max(0.0, f);
  run.channel.resize(n);
  for (std::size_t v = 0; v < n; ++v)
    for (int u : fam.of_vertex[v]) {
      double c = q[u] / s[v];
      if (c > 0.0) run.channel[v].emplace_back(u, c);
    }
  return run;
}

}  // namespace

GraphEntropyResult graph_entropy(const CharGraph& g, const SolverOptions& opts) {
  if (g.size() == 0) throw ValidationError("graph_entropy: empty graph");
  MisFamily fam = enumerate_mis(g);
  std::mt19937_64 rng(opts.seed);
  GraphEntropyResult res;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  const int restarts = std::max(1, opts.restarts);
  for (int r = 0; r < restarts; ++r) {
    auto init = initial_channel(fam, r, rng);
    Run run = run_em(g, fam, init, opts);
    hi = std::max(hi, run.value);
    res.iterations += run.iterations;
    if (run.value < lo) {
      lo = run.value;
      res.value = run.value;
      res.gap = run.gap;
      res.converged = run.converged;
      res.conditional_pmf = std::move(run.channel);
    }
  }
  res.restart_spread = hi - lo;
  res.mis = std::move(fam.sets);
  return res;
}

GraphEntropyResult conditional_graph_entropy(
    const CharGraph& g, const std::vector<std::vector<double>>& joint_xy,
    const SolverOptions& opts) {
  const std::size_t n = g.size();
  if (n == 0) throw ValidationError("conditional_graph_entropy: empty graph");
  if (joint_xy.size() != n)
    throw ValidationError("conditional_graph_entropy: one joint row per vertex");
  const std::size_t ny = joint_xy[0].size();
  for (std::size_t v = 0; v < n; ++v) {
    if (joint_xy[v].size() != ny)
      throw ValidationError("conditional_graph_entropy: ragged joint");
    double s = 0.0;
    for (double m : joint_xy[v]) {
      if (!(m >= 0.0))
        throw ValidationError("conditional_graph_entropy: negative mass");
      s += m;
    }
    if (std::abs(s - g.pmf()[v]) > kModelTol)
      throw ValidationError(
          "conditional_graph_entropy: joint X-marginal differs from the "
          "graph's vertex PMF");
  }
  std::vector<double> py(ny, 0.0);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t y = 0; y < ny; ++y) py[y] += joint_xy[v][y];

  MisFamily fam = enumerate_mis(g);
  const std::size_t nu = fam.sets.size();
  std::mt19937_64 rng(opts.seed);
  GraphEntropyResult res;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  const int restarts = std::max(1, opts.restarts);

  for (int r = 0; r < restarts; ++r) {
    auto chan = initial_channel(fam, r, rng);  // chan[v][k] ~ of_vertex[v][k]
    std::vector<double> qy(nu * ny);
    double prev = std::numeric_limits<double>::infinity(), obj = 0.0;
    int it = 0;
    bool conv = false;
    for (;; ++it) {
      std::fill(qy.begin(), qy.end(), 0.0);
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t k = 0; k < fam.of_vertex[v].size(); ++k) {
          int u = fam.of_vertex[v][k];
          for (std::size_t y = 0; y < ny; ++y)
            qy[u * ny + y] += joint_xy[v][y] * chan[v][k];
        }
      for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t y = 0; y < ny; ++y)
          if (py[y] > 0.0) qy[u * ny + y] /= py[y];
      obj = 0.0;
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t k = 0; k < fam.of_vertex[v].size(); ++k) {
          double c = chan[v][k];
          if (c <= 0.0) continue;
          int u = fam.of_vertex[v][k];
          for (std::size_t y = 0; y < ny; ++y)
            if (joint_xy[v][y] > 0.0)
              obj += joint_xy[v][y] * c * std::log2(c / qy[u * ny + y]);
        }
      if (std::abs(prev - obj) < opts.tol) {
        conv = true;
        break;
      }
      if (it >= opts.max_iters) break;
      prev = obj;
      // P(u | x) proportional to exp(sum_y p(y | x) ln Q(u | y)) on u containing x.
      for (std::size_t v = 0; v < n; ++v) {
        const auto& us = fam.of_vertex[v];
        std::vector<double> logw(us.size(), 0.0);
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < us.size(); ++k) {
          double acc = 0.0;
          for (std::size_t y = 0; y < ny; ++y) {
            double pxy = joint_xy[v][y];
            if (pxy <= 0.0) continue;
            double qv = qy[us[k] * ny + y];
            if (qv <= 0.0) {
              acc = -std::numeric_limits<double>::infinity();
              break;
            }
            acc += pxy / g.pmf()[v] * std::log(qv);
          }
          logw[k] = acc;
          mx = std::max(mx, acc);
        }
        double s = 0.0;
        for (std::size_t k = 0; k < us.size(); ++k) {
          chan[v][k] = std::isinf(logw[k]) ? 0.0 : std::exp(logw[k] - mx);
          s += chan[v][k];
        }
        for (double& c : chan[v]) c /= s;
      }
    }
    obj = std::max(0.0, obj);
    hi = std::max(hi, obj);
    res.iterations += it;
    if (obj < lo) {
      lo = obj;
      res.value = obj;
      res.converged = conv;
      res.gap = std::abs(prev - obj);
      res.conditional_pmf.assign(n, {});
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t k = 0; k < fam.of_vertex[v].size(); ++k)
          if (chan[v][k] > 0.0)
            res.conditional_pmf[v].emplace_back(fam.of_vertex[v][k], chan[v][k]);
    }
  }
  res.restart_spread = hi - lo;
  res.mis = std::move(fam.sets);
  return res;
}

GraphEntropyResult conditional_graph_entropy(const CharGraph& g,
                                             const JointPmf& joint,
                                             const SolverOptions& opts) {
  if (joint.arity() != 2 || joint.radices()[0] != g.size())
    throw ValidationError(
        "conditional_graph_entropy: joint must be over (vertex, Y)");
  const std::size_t ny = joint.radices()[1];
  std::vector<std::vector<double>> m(g.size(), std::vector<double>(ny));
  for (std::size_t v = 0; v < g.size(); ++v)
    for (std::size_t y = 0; y < ny; ++y) m[v][y] = joint.at(v * ny + y);
  return conditional_graph_entropy(g, m, opts);
}

// ------------------------------------------------------------------- I/O

std::string to_dot(const CharGraph& g, const std::string& name) {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (std::size_t v = 0; v < g.size(); ++v) {
    os << "  v" << v << " [label=\"";
    const auto& l = g.labels()[v];
    for (std::size_t i = 0; i < l.size(); ++i) os << (i ? "," : "") << l[i];
    os << "\", p=\"" << g.pmf()[v] << "\"];\n";
  }
  for (auto [u, v] : g.edges()) os << "  v" << u << " -- v" << v << ";\n";
  os << "}\n";
  return os.str();
}

void to_json(nlohmann::json& j, const GraphEntropyResult& r) {
  j = nlohmann::json{{"value", r.value},
                     {"converged", r.converged},
                     {"iterations", r.iterations}};
}

void to_json(nlohmann::json& j, const CharGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : g.edges())
    edges.push_back({nlohmann::json(g.labels()[u]), nlohmann::json(g.labels()[v])});
  j = nlohmann::json{
      {"vertices", g.labels()}, {"pmf", g.pmf()}, {"edges", edges}};
}

CharGraph graph_from_json(const nlohmann::json& j) {
  try {
    const auto& vs = j.at("vertices");
    std::vector<double> pmf = j.at("pmf").get<std::vector<double>>();
    std::vector<std::vector<int>> labels;
    std::map<std::string, int> index;
    if (vs.is_number_integer()) {
      int n = vs.get<int>();
      for (int v = 0; v < n; ++v) {
        labels.push_back({v});
        index[nlohmann::json(v).dump()] = v;
      }
    } else {
      for (const auto& v : vs) {
        index[v.dump()] = static_cast<int>(labels.size());
        labels.push_back(v.is_array() ? v.get<std::vector<int>>()
                                      : std::vector<int>{v.get<int>()});
      }
    }
    if (pmf.size() != labels.size())
      throw ValidationError("graph JSON: one pmf entry per vertex required");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.value("edges", nlohmann::json::array())) {
      if (!e.is_array() || e.size() != 2)
        throw ValidationError("graph JSON: edges are [a, b] pairs");
      auto a = index.find(e[0].dump()), b = index.find(e[1].dump());
      if (a == index.end() || b == index.end())
        throw ValidationError("graph JSON: edge names an unknown vertex");
      edges.emplace_back(a->second, b->second);
    }
    Pmf check(pmf, kModelTol);
    (void)check;
    return prune_zero_mass(CharGraph(pmf, edges, labels));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("graph JSON: ") + e.what());
  }
}

}  // namespace chargraph
