#include <set>
#include <vector>

#include "chargraph/errors.hpp"
#include "chargraph/topology.hpp"
#include "doctest.h"

using namespace chargraph;

TEST_CASE("cyclic placement, three servers") {
  Topology t{3, 3, 1, 0, 2};
  Placement p = cyclic_placement(t);
  CHECK(p.z == std::vector<std::vector<int>>{{1, 2}, {2, 3}, {1, 3}});
  CHECK(coverage_check(p, t));
  CHECK_FALSE(coverage_check(p, 1));
}

TEST_CASE("cyclic placement sizes and coverage") {
  for (int n = 1; n <= 7; ++n)
    for (int delta = 1; delta <= 3; ++delta)
      for (int nr = 1; nr <= n; ++nr) {
        Topology t{n, n * delta, 1, 0, nr};
        Placement p = cyclic_placement(t);
        const int m = delta * (n - nr + 1);
        for (const auto& s : p.z) {
          CHECK(static_cast<int>(s.size()) == m);
          CHECK(std::set<int>(s.begin(), s.end()).size() == s.size());
        }
        // Each dataset is stored on exactly N - Nr + 1 servers.
        std::vector<int> copies(t.k + 1, 0);
        for (const auto& s : p.z)
          for (int x : s) ++copies[x];
        for (int x = 1; x <= t.k; ++x) CHECK(copies[x] == n - nr + 1);
        CHECK(coverage_check(p, nr));
        if (nr > 1) CHECK_FALSE(coverage_check(p, nr - 1));
      }
}

TEST_CASE("placement n=4 k=8 nr=3") {
  Placement p = cyclic_placement(Topology{4, 8, 1, 0, 3});
  CHECK(p.z.size() == 4);
  for (const auto& s : p.z) CHECK(s.size() == 4);
  CHECK(p.z[0] == std::vector<int>{1, 2, 5, 6});
}

TEST_CASE("derived parameters") {
  DerivedParams d = derived_params(Topology{30, 30, 1, 0, 20});
  CHECK(d.delta == 1);
  CHECK(d.m == 11);
  CHECK(d.n_star == 2);
  CHECK(d.delta_n == 8);
  CHECK(d.xi_n == 8);
  DerivedParams e = derived_params(Topology{5, 5, 1, 0, 4});
  CHECK(e.m == 2);
  CHECK(e.n_star == 2);
  CHECK(e.delta_n == 1);
  CHECK(e.xi_n == 1);
}

TEST_CASE("topology validation") {
  CHECK_THROWS_AS(Topology({3, 4, 1, 0, 2}).validate(), ValidationError);
  CHECK_THROWS_AS(Topology({3, 3, 1, 0, 4}).validate(), ValidationError);
  CHECK_THROWS_AS(Topology({3, 3, 1, 5, 2}).validate(), ValidationError);
  CHECK(Topology({3, 6, 1, 0, 2}).with_cyclic_storage().m == 4);
  Placement bad{2, 3, {{1, 4}, {2}}};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  Placement dup{2, 3, {{1, 1}, {2}}};
  CHECK_THROWS_AS(dup.validate(), ValidationError);
}

TEST_CASE("subset enumeration") {
  int count = 0;
  for_each_subset(6, 3, [&](const std::vector<int>& s) {
    CHECK(s.size() == 3);
    ++count;
    return true;
  });
  CHECK(count == 20);
  CHECK(binomial(30, 20) == doctest::Approx(30045015.0));
  CHECK_THROWS_AS(coverage_check(cyclic_placement(Topology{30, 30, 1, 0, 15}), 15),
                  GuardError);
}

TEST_CASE("placement json round trip") {
  Placement p = cyclic_placement(Topology{4, 8, 1, 0, 3});
  nlohmann::json j = p;
  Placement q = j.get<Placement>();
  CHECK(q.z == p.z);
  CHECK_THROWS_AS(nlohmann::json({{"N", 2}}).get<Placement>(), ValidationError);
}
