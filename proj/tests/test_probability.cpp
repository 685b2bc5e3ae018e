#include <cmath>
#include <stdexcept>
#include <vector>

#include "chargraph/errors.hpp"
#include "chargraph/probability.hpp"
#include "doctest.h"

using namespace chargraph;

namespace {

double brute_parity(int l, double eps) {
  double odd = 0.0;
  for (unsigned c = 0; c < (1u << l); ++c) {
    int w = __builtin_popcount(c);
    if (w % 2) odd += std::pow(eps, w) * std::pow(1 - eps, l - w);
  }
  return odd;
}

}  // namespace

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.25) == doctest::Approx(0.8112781244591328).epsilon(1e-12));
  CHECK(binary_entropy(0.11) == doctest::Approx(binary_entropy(0.89)));
  CHECK_THROWS_AS(binary_entropy(1.5), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(-0.1), std::domain_error);
}

TEST_CASE("pmf construction and entropy") {
  CHECK(entropy(Pmf::uniform(8)) == doctest::Approx(3.0));
  CHECK(entropy(Pmf::point(5, 2)) == 0.0);
  Pmf b = Pmf::bernoulli(0.2);
  CHECK(b[1] == doctest::Approx(0.2));
  CHECK(b.support().size() == 2);
  CHECK_THROWS_AS(Pmf({0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(Pmf({1.2, -0.2}), ValidationError);
  std::vector<double> m{0.5, 0.25, 0.25};
  CHECK(entropy_bits(m) == doctest::Approx(1.5));
}

TEST_CASE("joint pmf coding and marginals") {
  JointPmf j = JointPmf::product({Pmf::bernoulli(0.3), Pmf::uniform(3)});
  CHECK(j.cells() == 6);
  for (std::size_t c = 0; c < j.cells(); ++c) CHECK(j.encode(j.decode(c)) == c);
  std::vector<int> t{1, 2};
  CHECK(j.prob(t) == doctest::Approx(0.3 / 3));
  CHECK(j.marginal(std::size_t{0})[1] == doctest::Approx(0.3));
  std::vector<std::size_t> rev{1, 0};
  JointPmf r = j.marginal(rev);
  CHECK(r.radices()[0] == 3);
  CHECK(r.entropy() == doctest::Approx(j.entropy()));
  CHECK(j.entropy() == doctest::Approx(binary_entropy(0.3) + std::log2(3.0)));
  CHECK(mutual_information(j) == doctest::Approx(0.0).epsilon(1e-12));

  JointPmf iid = JointPmf::iid(5, Pmf::bernoulli(0.1));
  CHECK(iid.entropy() == doctest::Approx(5 * binary_entropy(0.1)));
}

TEST_CASE("mutual information of copies") {
  JointPmf same({2, 2}, {0.7, 0.0, 0.0, 0.3});
  CHECK(mutual_information(same) == doctest::Approx(binary_entropy(0.3)));
}

TEST_CASE("parity and product parameters") {
  for (double eps : {0.0, 0.05, 0.1, 0.3, 0.5, 0.9})
    for (int l = 1; l <= 8; ++l) {
      CHECK(parity_param(l, eps) == doctest::Approx(brute_parity(l, eps)).epsilon(1e-12));
      CHECK(parity_param(l, eps) ==
            doctest::Approx((1 - std::pow(1 - 2 * eps, l)) / 2).epsilon(1e-12));
      CHECK(product_param(l, eps) == doctest::Approx(std::pow(eps, l)));
    }
  CHECK(parity_param(2, 0.1) == doctest::Approx(0.18));
}

TEST_CASE("correlation model") {
  for (int k : {1, 2, 5, 9})
    for (double eps : {0.1, 0.5, 0.8})
      for (double rho : {0.0, 0.3, 1.0}) {
        Pmf w = diniz_joint(k, eps, rho);
        CHECK(w.size() == static_cast<std::size_t>(k + 1));
        JointPmf bits = diniz_bits(k, eps, rho);
        CHECK(diniz_joint_entropy(k, eps, rho) ==
              doctest::Approx(bits.entropy()).epsilon(1e-10));
        for (int l = 1; l <= k; ++l) {
          double odd = 0.0;
          for (std::size_t c = 0; c < bits.cells(); ++c) {
            int s = __builtin_popcountll(c >> (k - l));
            if (s % 2) odd += bits.at(c);
          }
          CHECK(diniz_parity_param(l, eps, rho) == doctest::Approx(odd).epsilon(1e-10));
        }
        for (int i = 0; i < k; ++i)
          CHECK(bits.marginal(static_cast<std::size_t>(i))[1] == doctest::Approx(eps));
      }
  CHECK(diniz_joint_entropy(6, 0.2, 0.0) == doctest::Approx(6 * binary_entropy(0.2)));
  CHECK(diniz_joint_entropy(6, 0.2, 1.0) == doctest::Approx(binary_entropy(0.2)));
  CHECK_THROWS_AS(diniz_joint(3, 1.2, 0.0), ValidationError);
}

TEST_CASE("crossover table") {
  const double eps = 0.2, p = 0.3;
  JointPmf j = crossover_joint(eps, p);
  CHECK(j.marginal(std::size_t{0})[1] == doctest::Approx(eps));
  CHECK(j.marginal(std::size_t{1})[1] == doctest::Approx(eps));
  double pp = eps * p / (1 - eps);
  CHECK(j.entropy() == doctest::Approx(binary_entropy(eps) + (1 - eps) * binary_entropy(pp) +
                                       eps * binary_entropy(p)));
  // p = 1 - eps decouples the two bits.
  JointPmf ind = crossover_joint(eps, 1 - eps);
  CHECK(mutual_information(ind) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pearson_rho(ind) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pearson_rho(JointPmf({2, 2}, {0.5, 0, 0, 0.5})) == doctest::Approx(1.0));
  CHECK_THROWS_AS(crossover_joint(0.8, 0.9), ValidationError);
  CHECK_THROWS_AS(crossover_joint(0.0, 0.5), ValidationError);
}

TEST_CASE("skew parameters") {
  SkewParams s{0.2, 0.0, 0.3};
  CHECK(s.p_prime() == doctest::Approx(0.075));
  CHECK_NOTHROW(s.validate());
  SkewParams bad{1.5, 0.0, {}};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}
