#include "chargraph/topology.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>

#include "chargraph/errors.hpp"

namespace chargraph {

void Topology::validate() const {
  if (n < 1 || k < 1 || kc < 1 || nr < 1)
    throw ValidationError("topology: N, K, Kc, Nr must be positive");
  if (k % n != 0)
    throw ValidationError("topology: K = " + std::to_string(k) +
                          " is not a multiple of N = " + std::to_string(n));
  if (nr > n) throw ValidationError("topology: Nr must not exceed N");
  int want = (k / n) * (n - nr + 1);
  if (m != 0 && m != want)
    throw ValidationError("topology: cyclic placement needs M = " +
                          std::to_string(want) + ", got " + std::to_string(m));
}

Topology Topology::with_cyclic_storage() const {
  validate();
  Topology t = *this;
  t.m = (k / n) * (n - nr + 1);
  return t;
}

DerivedParams derived_params(const Topology& t) {
  t.validate();
  DerivedParams d;
  d.delta = t.k / t.n;
  int span = t.n - t.nr + 1;
  d.m = d.delta * span;
  d.n_star = t.n / span;
  d.delta_n = t.n - d.n_star * span;
  d.xi_n = d.delta * d.delta_n;
  return d;
}

void Placement::validate() const {
  if (n < 1 || k < 1) throw ValidationError("placement: N, K must be positive");
  if (static_cast<int>(z.size()) != n)
    throw ValidationError("placement: expected " + std::to_string(n) +
                          " server sets, got " + std::to_string(z.size()));
  for (const auto& s : z) {
    std::set<int> seen;
    for (int x : s) {
      if (x < 1 || x > k)
        throw ValidationError("placement: dataset index " + std::to_string(x) +
                              " outside [1, " + std::to_string(k) + "]");
      if (!seen.insert(x).second)
        throw ValidationError("placement: duplicate dataset index " +
                              std::to_string(x));
    }
  }
}

Placement cyclic_placement(const Topology& t) {
  t.validate();
  const int N = t.n;
  const int delta = t.k / N;
  // mod{b, a} = a when a divides b, otherwise b mod a.
  auto pmod = [](int b, int a) {
    int r = b % a;
    return r == 0 ? a : r;
  };
  Placement p;
  p.n = N;
  p.k = t.k;
  p.z.resize(N);
  for (int i = 1; i <= N; ++i) {
    auto& s = p.z[i - 1];
    for (int r = 0; r < delta; ++r)
      for (int j = 0; j <= N - t.nr; ++j) s.push_back(pmod(i + j, N) + r * N);
    std::sort(s.begin(), s.end());
  }
  return p;
}

double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  r = std::min(r, n - r);
  double c = 1.0;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

bool coverage_check(const Placement& p, int nr) {
  p.validate();
  if (nr < 1 || nr > p.n) throw ValidationError("coverage: Nr outside [1, N]");
  if (binomial(p.n, nr) > 1e6)
    throw GuardError("coverage_check over C(" + std::to_string(p.n) + ", " +
                     std::to_string(nr) + ") subsets");
  std::vector<std::uint64_t> masks(p.n);
  std::vector<bool> big(p.k + 1);
  // Bitset per server; K beyond 64 falls back to a vector<bool> union.
  if (p.k <= 64) {
    for (int i = 0; i < p.n; ++i)
      for (int x : p.z[i]) masks[i] |= std::uint64_t{1} << (x - 1);
    std::uint64_t full =
        p.k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << p.k) - 1;
    bool ok = true;
    for_each_subset(p.n, nr, [&](const std::vector<int>& s) {
      std::uint64_t u = 0;
      for (int i : s) u |= masks[i];
      ok = (u == full);
      return ok;
    });
    return ok;
  }
  bool ok = true;
  for_each_subset(p.n, nr, [&](const std::vector<int>& s) {
    std::fill(big.begin(), big.end(), false);
    for (int i : s)
      for (int x : p.z[i]) big[x] = true;
    ok = std::all_of(big.begin() + 1, big.end(), [](bool b) { return b; });
    return ok;
  });
  return ok;
}

bool coverage_check(const Placement& p, const Topology& t) {
  if (p.n != t.n || p.k != t.k)
    throw ValidationError("coverage: placement does not match topology");
  return coverage_check(p, t.nr);
}

void to_json(nlohmann::json& j, const Placement& p) {
  j = nlohmann::json{{"N", p.n}, {"K", p.k}, {"Z", p.z}};
}

void from_json(const nlohmann::json& j, Placement& p) {
  try {
    p.n = j.at("N").get<int>();
    p.k = j.at("K").get<int>();
    p.z = j.at("Z").get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("placement JSON: ") + e.what());
  }
  for (auto& s : p.z) std::sort(s.begin(), s.end());
  p.validate();
}

void to_json(nlohmann::json& j, const Topology& t) {
  j = nlohmann::json{
      {"N", t.n}, {"K", t.k}, {"Kc", t.kc}, {"M", t.m}, {"Nr", t.nr}};
}

void to_json(nlohmann::json& j, const DerivedParams& d) {
  j = nlohmann::json{{"delta", d.delta},
                     {"n_star", d.n_star},
                     {"delta_n", d.delta_n},
                     {"xi_n", d.xi_n},
                     {"M", d.m}};
}

}  // namespace chargraph
