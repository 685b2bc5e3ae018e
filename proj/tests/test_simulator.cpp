#include <cmath>
#include <cstdlib>
#include <vector>

#include "chargraph/errors.hpp"
#include "chargraph/simulator.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace chargraph;

namespace {

struct S2 {
  Topology t{3, 3, 2, 2, 2};
  Placement p = cyclic_placement(t);
  Demand d = Demand::linear({{0, 1, 0}, {0, 1, 1}}, 2);
};

}  // namespace

TEST_CASE("scenario II encoders") {
  S2 s;
  JointPmf joint = JointPmf::iid(3, Pmf::bernoulli(0.5));
  auto encs = build_encoders(s.t, s.p, s.d, joint, 1);
  REQUIRE(encs.size() == 3);
  CHECK(encs[0].count == 2);
  CHECK(encs[1].count == 4);
  CHECK(encs[2].count == 2);
  // Server 1's color depends on W_2 only.
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      std::size_t code = a * 2 + b;
      std::size_t other = (1 - a) * 2 + b;
      CHECK(encs[0].encode(std::vector<std::size_t>{code}) ==
            encs[0].encode(std::vector<std::size_t>{other}));
    }
  CHECK(verify_zero_error(encs, s.t, s.p, s.d, joint));
  DecodeTable alone = build_decode_table(encs, s.t, s.p, s.d, joint, {1});
  CHECK(alone.entries.size() == 4);
}

TEST_CASE("merged colors are caught") {
  S2 s;
  JointPmf joint = JointPmf::iid(3, Pmf::bernoulli(0.3));
  auto encs = build_encoders(s.t, s.p, s.d, joint, 1);
  std::fill(encs[0].color.begin(), encs[0].color.end(), 0);
  encs[0].count = 1;
  CHECK_THROWS_AS(build_decode_table(encs, s.t, s.p, s.d, joint, {0, 2}), DecodeError);
  std::vector<int> bad;
  CHECK_FALSE(verify_zero_error(encs, s.t, s.p, s.d, joint, &bad));
  CHECK(bad == std::vector<int>{0, 2});
}

TEST_CASE("edgeless graphs need one color") {
  Topology t{2, 2, 1, 0, 2};
  t = t.with_cyclic_storage();
  Placement p = cyclic_placement(t);
  Demand d = Demand::table({{0, 0, 0, 0}}, 2, 2);
  JointPmf joint = JointPmf::iid(2, Pmf::bernoulli(0.4));
  for (int n : {1, 2, 3}) {
    auto encs = build_encoders(t, p, d, joint, n);
    for (const auto& e : encs) {
      CHECK(e.count == 1);
      CHECK(e.rate() == 0.0);
    }
  }
}

TEST_CASE("OR-power coloring is minimal on the ternary graph") {
  CharGraph g({1.0 / 3, 1.0 / 3, 1.0 / 3}, {{0, 2}});
  CharGraph g2 = or_power(g, 2);
  CHECK(min_count_coloring(g2).count == oracle::brute_chromatic_number(g2));
  CHECK(is_valid_coloring(g2, min_count_coloring(g2).color));
}

TEST_CASE("block encoders are valid colorings of the OR power") {
  S2 s;
  JointPmf joint = JointPmf::iid(3, Pmf::bernoulli(0.2));
  for (int n : {1, 2}) {
    auto encs = build_encoders(s.t, s.p, s.d, joint, n);
    for (const auto& e : encs) {
      CharGraph power = or_power(build_char_graph(s.d, s.p, joint, e.server), n);
      CHECK(is_valid_coloring(power, e.color));
    }
    CHECK(verify_zero_error(encs, s.t, s.p, s.d, joint));
  }
  auto e1 = build_encoders(s.t, s.p, s.d, joint, 1);
  auto e2 = build_encoders(s.t, s.p, s.d, joint, 2);
  for (int i = 0; i < 3; ++i) CHECK(e2[i].rate() <= e1[i].rate() + 1e-9);
}

TEST_CASE("simulation is zero-error and matches exact rates") {
  S2 s;
  JointPmf joint = JointPmf::iid(3, Pmf::bernoulli(0.5));
  auto encs = build_encoders(s.t, s.p, s.d, joint, 1);
  DecodeTable tab = build_decode_table(encs, s.t, s.p, s.d, joint, {0, 1});
  SimResult r = run_simulation(encs, tab, joint, 1, 100000, 42);
  CHECK(r.errors == 0);
  CHECK(r.trials == 100000);
  CHECK(r.empirical[0] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(r.empirical[1] - 2.0) < 0.02);
  nlohmann::json j = r;
  CHECK(j.contains("seed"));
  CHECK(j["trials"] == 100000);
}

TEST_CASE("parity encoder rate") {
  Topology t{3, 3, 1, 0, 2};
  t = t.with_cyclic_storage();
  Placement p = cyclic_placement(t);
  Demand d = Demand::linear({{1, 1, 1}}, 2);
  JointPmf joint = JointPmf::iid(3, Pmf::bernoulli(0.1));
  auto encs = build_encoders(t, p, d, joint, 1);
  CHECK(encs[0].rate() == doctest::Approx(binary_entropy(0.18)));
  // Two overlapping local parities do not give the global one.
  CHECK_THROWS_AS(build_decode_table(encs, t, p, d, joint, {0, 1}), DecodeError);
  std::vector<int> failing;
  CHECK_FALSE(verify_zero_error(encs, t, p, d, joint, &failing));
  CHECK(failing.size() == 2);
}

TEST_CASE("thread count does not change results") {
  S2 s;
  JointPmf joint = JointPmf::iid(3, Pmf::bernoulli(0.2));
  auto encs = build_encoders(s.t, s.p, s.d, joint, 2);
  DecodeTable tab = build_decode_table(encs, s.t, s.p, s.d, joint, {1, 2});
  setenv("CHARGRAPH_THREADS", "1", 1);
  SimResult a = run_simulation(encs, tab, joint, 2, 20000, 9);
  setenv("CHARGRAPH_THREADS", "3", 1);
  SimResult b = run_simulation(encs, tab, joint, 2, 20000, 9);
  unsetenv("CHARGRAPH_THREADS");
  CHECK(a.errors == 0);
  CHECK(a.empirical == b.empirical);
  CHECK(a.trials == b.trials);
}
