#include <vector>

#include "chargraph/errors.hpp"
#include "chargraph/functions.hpp"
#include "doctest.h"

using namespace chargraph;

TEST_CASE("primes and GF rank") {
  CHECK(is_prime(2));
  CHECK(is_prime(7));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(9));
  CHECK(gf_rank({{1, 0, 1}, {0, 1, 1}, {1, 1, 0}}, 2) == 2);
  CHECK(gf_rank({{1, 0, 1}, {0, 1, 1}, {1, 1, 0}}, 3) == 3);
  CHECK(gf_rank({{2, 4}, {1, 2}}, 5) == 1);
  CHECK(gf_rank({{0, 0}}, 2) == 0);
}

TEST_CASE("scenario II demand") {
  Demand d = Demand::linear({{0, 1, 0}, {0, 1, 1}}, 2);
  CHECK(d.kc() == 2);
  CHECK(d.k() == 3);
  std::vector<int> w{1, 1, 0};
  CHECK(d.evaluate(w) == std::vector<int>{1, 1});
  std::vector<int> w2{0, 1, 1};
  CHECK(d.evaluate(w2) == std::vector<int>{1, 0});
  CHECK_THROWS_AS(d.evaluate(std::vector<int>{1, 0}), ValidationError);
}

TEST_CASE("q-ary linear demand") {
  Demand d = Demand::linear({{1, 2, 3}}, 5);
  std::vector<int> w{4, 4, 4};
  CHECK(d.evaluate(w)[0] == (4 + 8 + 12) % 5);
  CHECK_THROWS_AS(Demand::linear({{1}}, 4), ValidationError);
}

TEST_CASE("multilinear demand") {
  Demand d = Demand::multilinear(3, 3);
  std::vector<int> w{2, 2, 2};
  CHECK(d.evaluate(w)[0] == 8 % 3);
  auto t = Demand::multilinear(3, 2).tabulate();
  CHECK(t[0].size() == 8);
  for (std::size_t c = 0; c < 8; ++c) CHECK(t[0][c] == (c == 7 ? 1 : 0));
}

TEST_CASE("table demand and selection") {
  // f1 = OR, f2 = AND over two bits.
  Demand d = Demand::table({{0, 1, 1, 1}, {0, 0, 0, 1}}, 2, 2);
  std::vector<int> w{1, 0};
  CHECK(d.evaluate(w) == std::vector<int>{1, 0});
  std::vector<int> keep{1};
  Demand s = d.select(keep);
  CHECK(s.kc() == 1);
  CHECK(s.evaluate(w) == std::vector<int>{0});
  CHECK(d.boolean_valued());
  CHECK_FALSE(Demand::table({{0, 2, 1}}, 1, 3).boolean_valued());
  CHECK_THROWS_AS(Demand::table({{0, 1, 1}}, 2, 2), ValidationError);
  CHECK_THROWS_AS(Demand::table({{0, 1, 2, 1}}, 2, 2), ValidationError);
}

TEST_CASE("tuple coding") {
  for (std::size_t c = 0; c < 27; ++c) {
    auto t = decode_tuple(c, 3, 3);
    CHECK(encode_tuple(t, 3) == c);
  }
  CHECK(encode_tuple(std::vector<int>{1, 0, 1}, 2) == 5);
  CHECK_THROWS_AS(pow_size(2, 70), GuardError);
}

TEST_CASE("server restriction") {
  Placement p = cyclic_placement(Topology{3, 3, 1, 0, 2});
  Demand d = Demand::linear({{0, 1, 0}, {0, 1, 1}}, 2);
  ServerRestriction r = restrict_to_server(d, p, 0);
  CHECK(r.view().coords == std::vector<int>{0, 1});
  CHECK(r.rest_coords() == std::vector<int>{2});
  CHECK(complement_coords(p, 1) == std::vector<int>{0});
  // f1 = W_2 is fixed by server 1's local tuple whatever the rest is.
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        std::vector<int> local{a, b}, rest{c};
        CHECK(r(local, rest)[0] == b);
        CHECK(r.merge(local, rest) == std::vector<int>{a, b, c});
      }
}

TEST_CASE("merging server tuples") {
  Placement p = cyclic_placement(Topology{3, 3, 1, 0, 2});
  std::vector<int> servers{0, 1};
  std::vector<int> fill{0, 0, 0};
  CHECK(merge_server_tuples(p, servers, {{1, 0}, {0, 1}}, fill) ==
        std::vector<int>{1, 0, 1});
  CHECK_THROWS_AS(merge_server_tuples(p, servers, {{1, 0}, {1, 1}}, fill),
                  ValidationError);
}

TEST_CASE("demand json") {
  Demand d = demand_from_json(nlohmann::json::parse(R"({"kind":"linsep","gamma":[[1,1,0]]})"));
  CHECK(d.kind() == DemandKind::LinearlySeparable);
  Demand m = demand_from_json(nlohmann::json::parse(R"({"kind":"multilinear"})"), 4);
  CHECK(m.k() == 4);
  nlohmann::json j = d;
  CHECK(demand_from_json(j).gamma() == d.gamma());
  CHECK_THROWS_AS(demand_from_json(nlohmann::json::parse(R"({"kind":"cubic"})")),
                  ValidationError);
}
