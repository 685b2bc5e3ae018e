#pragma once

// Brute-force reference computations shared by the test files.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "chargraph/functions.hpp"
#include "chargraph/graph.hpp"
#include "chargraph/probability.hpp"
#include "chargraph/topology.hpp"

namespace oracle {

using chargraph::CharGraph;

inline std::vector<double> random_pmf(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (double& x : p) s += (x = u(rng));
  for (double& x : p) x /= s;
  return p;
}

inline CharGraph random_graph(std::size_t n, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  std::vector<std::pair<int, int>> e;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (coin(rng)) e.emplace_back(static_cast<int>(a), static_cast<int>(b));
  return CharGraph(random_pmf(n, rng), e);
}

inline CharGraph complement(const CharGraph& g) {
  std::vector<std::pair<int, int>> e;
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b)
      if (!g.adjacent(static_cast<int>(a), static_cast<int>(b)))
        e.emplace_back(static_cast<int>(a), static_cast<int>(b));
  return CharGraph(g.pmf(), e, g.labels());
}

inline std::set<std::pair<int, int>> edge_set(const CharGraph& g) {
  auto e = g.edges();
  std::set<std::pair<int, int>> s;
  for (auto [a, b] : e) s.emplace(std::min(a, b), std::max(a, b));
  return s;
}

/// Every maximal independent set by scanning all 2^n vertex subsets.
inline std::set<std::vector<int>> brute_mis(const CharGraph& g) {
  const int n = static_cast<int>(g.size());
  std::vector<std::uint32_t> indep;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      if (s >> a & 1)
        for (int b = a + 1; b < n && ok; ++b)
          if ((s >> b & 1) && g.adjacent(a, b)) ok = false;
    if (ok) indep.push_back(s);
  }
  std::set<std::vector<int>> out;
  for (std::uint32_t s : indep) {
    bool maximal = true;
    for (int v = 0; v < n && maximal; ++v) {
      if (s >> v & 1) continue;
      bool free = true;
      for (int a = 0; a < n && free; ++a)
        if ((s >> a & 1) && g.adjacent(a, v)) free = false;
      if (free) maximal = false;
    }
    if (!maximal) continue;
    std::vector<int> m;
    for (int v = 0; v < n; ++v)
      if (s >> v & 1) m.push_back(v);
    out.insert(m);
  }
  return out;
}

/// Smallest color count, by backtracking over vertices in id order.
inline int brute_chromatic_number(const CharGraph& g) {
  const int n = static_cast<int>(g.size());
  std::vector<int> c(n, -1);
  auto fits = [&](auto&& self, int v, int k) -> bool {
    if (v == n) return true;
    int top = 0;
    for (int u = 0; u < v; ++u) top = std::max(top, c[u] + 1);
    for (int col = 0; col < std::min(k, top + 1); ++col) {
      bool ok = true;
      for (int u : g.neighbors(v))
        if (u < v && c[u] == col) ok = false;
      if (!ok) continue;
      c[v] = col;
      if (self(self, v + 1, k)) return true;
    }
    c[v] = -1;
    return false;
  };
  for (int k = 1; k <= n; ++k)
    if (fits(fits, 0, k)) return k;
  return n;
}

/// Minimum coloring entropy over all assignments (small n only).
inline double brute_chromatic_entropy(const CharGraph& g) {
  const int n = static_cast<int>(g.size());
  std::vector<int> c(n, 0);
  double best = 1e300;
  while (true) {
    bool ok = true;
    for (auto [a, b] : g.edges())
      if (c[a] == c[b]) ok = false;
    if (ok) {
      std::vector<double> mass(n, 0.0);
      for (int v = 0; v < n; ++v) mass[c[v]] += g.pmf()[v];
      best = std::min(best, chargraph::entropy_bits(mass));
    }
    int i = 0;
    while (i < n && ++c[i] == n) c[i++] = 0;
    if (i == n) break;
  }
  return best;
}

/// Edge rule, directly: local tuples x, x' (positive marginal mass) are
/// adjacent iff some assignment r of the coordinates the server lacks has
/// p(x, r) p(x', r) > 0 and a demanded output differs.
inline std::set<std::pair<std::vector<int>, std::vector<int>>> brute_char_edges(
    const chargraph::Demand& d, const chargraph::Placement& p,
    const chargraph::JointPmf& joint, int server) {
  const int k = d.k(), q = d.q();
  std::vector<int> local;
  for (int x : p.z[server]) local.push_back(x - 1);
  std::vector<bool> held(k, false);
  for (int c : local) held[c] = true;
  std::set<std::pair<std::vector<int>, std::vector<int>>> out;
  const std::size_t cells = joint.cells();
  for (std::size_t a = 0; a < cells; ++a) {
    if (joint.at(a) <= 0) continue;
    auto wa = joint.decode(a);
    for (std::size_t b = 0; b < cells; ++b) {
      if (joint.at(b) <= 0) continue;
      auto wb = joint.decode(b);
      bool same_rest = true, same_local = true;
      for (int c = 0; c < k; ++c) {
        if (held[c]) same_local = same_local && wa[c] == wb[c];
        else same_rest = same_rest && wa[c] == wb[c];
      }
      if (!same_rest || same_local) continue;
      if (d.evaluate(wa) == d.evaluate(wb)) continue;
      std::vector<int> xa, xb;
      for (int c : local) {
        xa.push_back(wa[c]);
        xb.push_back(wb[c]);
      }
      out.emplace(std::min(xa, xb), std::max(xa, xb));
    }
  }
  (void)q;
  return out;
}

}  // namespace oracle
