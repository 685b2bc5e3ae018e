#include <cmath>
#include <random>

#include "chargraph/graph.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "property_suite.hpp"

using namespace chargraph;

TEST_CASE("randomized graph properties") {
  props::Stats s = props::run(200, 20240607);
  for (const auto& n : s.notes) MESSAGE(n);
  CHECK(s.graphs == 200);
  CHECK(s.sandwich_fail == 0);
  CHECK(s.monotone_fail == 0);
  CHECK(s.conditioning_fail == 0);
  CHECK(s.mis_fail == 0);
  CHECK(s.restart_fail == 0);
  CHECK(s.unconverged == 0);
}

TEST_CASE("perfect graphs split the source entropy") {
  // For perfect graphs H_G + H_complement = H(P); bipartite graphs and
  // their complements are perfect.
  std::mt19937_64 rng(99);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < 30; ++i) {
    const int n = 3 + i % 6;
    std::vector<std::pair<int, int>> e;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if ((a % 2) != (b % 2) && coin(rng)) e.emplace_back(a, b);
    CharGraph g(oracle::random_pmf(n, rng), e);
    double sum = graph_entropy(g).value + graph_entropy(oracle::complement(g)).value;
    CHECK(sum == doctest::Approx(g.source_entropy()).epsilon(1e-6));
  }
}

TEST_CASE("block coloring rate approaches graph entropy from above") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    CharGraph g = oracle::random_graph(3, 0.5, rng);
    double h1 = chromatic_entropy(g);
    double h2 = chromatic_entropy(or_power(g, 2)) / 2;
    double hg = graph_entropy(g).value;
    CHECK(h2 <= h1 + 1e-9);
    CHECK(hg <= h2 + 1e-9);
  }
}
