#pragma once

// System topology T(N, K, Kc, M, Nr), cyclic dataset placement and the
// derived counts (delta, N*, delta_N, xi_N) used by the rate formulas.
// Dataset indices are 1-based everywhere, including serialized output.

#include <string>
#include <vector>

#include "json.hpp"

namespace chargraph {

struct Topology {
  int n = 0;   // servers N
  int k = 0;   // datasets K
  int kc = 1;  // demanded functions Kc
  int m = 0;   // storage M; 0 means "derive from cyclic placement"
  int nr = 0;  // recovery threshold Nr

  /// Checks positivity, K mod N == 0, 1 <= Nr <= N and, when m != 0,
  /// M == delta (N - Nr + 1). Throws ValidationError.
  void validate() const;

  /// Copy with m filled in from the cyclic-placement storage rule.
  Topology with_cyclic_storage() const;
};

struct DerivedParams {
  int delta = 0;    // K / N
  int n_star = 0;   // floor(N / (N - Nr + 1))
  int delta_n = 0;  // N - N* (N - Nr + 1)
  int xi_n = 0;     // delta * delta_n
  int m = 0;        // delta (N - Nr + 1)
};

DerivedParams derived_params(const Topology& t);

struct Placement {
  int n = 0;
  int k = 0;
  // z[i] lists the 1-based datasets of server i + 1, sorted ascending.
  std::vector<std::vector<int>> z;

  /// Structural checks: N sets, indices within [1, K], no duplicates.
  void validate() const;
  std::size_t storage(int server) const { return z.at(server).size(); }
};

Placement cyclic_placement(const Topology& t);

/// True iff every Nr-subset of servers jointly stores {1..K}.
/// Throws GuardError when C(N, Nr) > 1e6.
bool coverage_check(const Placement& p, const Topology& t);

/// Same check for an explicit recovery threshold.
bool coverage_check(const Placement& p, int nr);

/// Invokes fn(subset) for every size-r subset of {0..n-1} in lexicographic
/// order; stops early when fn returns false.
template <class Fn>
void for_each_subset(int n, int r, Fn&& fn) {
  if (r < 0 || r > n) return;
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    if (!fn(static_cast<const std::vector<int>&>(idx))) return;
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// C(n, r) as a double (exact for the guard ranges used here).
double binomial(int n, int r);

void to_json(nlohmann::json& j, const Placement& p);
void from_json(const nlohmann::json& j, Placement& p);
void to_json(nlohmann::json& j, const Topology& t);
void to_json(nlohmann::json& j, const DerivedParams& d);

}  // namespace chargraph
