#pragma once

// Demanded functions f_1..f_Kc over the subfunction vector W = (W_1..W_K),
// each W_k in F_q with q prime. Tuples use 0-based coordinates; the
// placement's 1-based dataset k is coordinate k - 1.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chargraph/topology.hpp"
#include "json.hpp"

namespace chargraph {

bool is_prime(int q);

/// Rank of a matrix over F_q (q prime). Entries are reduced mod q first.
int gf_rank(std::vector<std::vector<int>> rows, int q);

enum class DemandKind { LinearlySeparable, MultiLinear, Table };

class Demand {
 public:
  /// f = gamma * w over F_q; gamma is Kc x K.
  static Demand linear(std::vector<std::vector<int>> gamma, int q = 2);
  /// f = prod_k w_k over F_q.
  static Demand multilinear(int k, int q = 2);
  /// tables[j][cell] = f_j(w), cell = mixed-radix code of w (first
  /// coordinate most significant). Boolean tables are q = 2.
  static Demand table(std::vector<std::vector<int>> tables, int k, int q = 2);

  DemandKind kind() const { return kind_; }
  int q() const { return q_; }
  int k() const { return k_; }
  int kc() const { return kc_; }
  const std::vector<std::vector<int>>& gamma() const { return gamma_; }

  /// (f_1(w), .., f_Kc(w)). Throws ValidationError on arity or alphabet
  /// mismatch.
  std::vector<int> evaluate(std::span<const int> w) const;

  /// Dense tables of every function over all q^K inputs. Throws GuardError
  /// beyond 2^22 cells.
  std::vector<std::vector<int>> tabulate() const;

  /// Keeps only the listed (0-based) demanded functions.
  Demand select(std::span<const int> functions) const;

  /// True iff every output is in {0, 1} (always for q = 2).
  bool boolean_valued() const;

 private:
  DemandKind kind_ = DemandKind::Table;
  int q_ = 2;
  int k_ = 0;
  int kc_ = 0;
  std::vector<std::vector<int>> gamma_;
  std::vector<std::vector<int>> tables_;
};

std::size_t pow_size(std::size_t base, std::size_t exp);

/// Mixed-radix helpers for uniform radix q.
std::size_t encode_tuple(std::span<const int> t, int q);
std::vector<int> decode_tuple(std::size_t code, std::size_t len, int q);

struct ServerView {
  int server = 0;            // 0-based server index
  std::vector<int> coords;   // 0-based subfunction coordinates, ascending
  int q = 2;
  std::size_t alphabet_size() const { return pow_size(q, coords.size()); }
};

ServerView server_view(const Placement& p, int server, int q);

/// Coordinates not stored at the server, ascending.
std::vector<int> complement_coords(const Placement& p, int server);

/// Evaluator of the demand from server i's local tuple and an assignment
/// of the complementary coordinates.
class ServerRestriction {
 public:
  ServerRestriction(Demand d, const Placement& p, int server);

  const ServerView& view() const { return view_; }
  const std::vector<int>& rest_coords() const { return rest_; }

  std::vector<int> merge(std::span<const int> local,
                         std::span<const int> rest) const;
  std::vector<int> operator()(std::span<const int> local,
                              std::span<const int> rest) const;

 private:
  Demand d_;
  ServerView view_;
  std::vector<int> rest_;
};

ServerRestriction restrict_to_server(const Demand& d, const Placement& p,
                                     int server);

/// Merges local tuples of several servers into a full K-tuple. Coordinates
/// held by no listed server are taken from `fill`. Throws ValidationError
/// when two servers disagree on an overlapping coordinate.
std::vector<int> merge_server_tuples(const Placement& p,
                                     std::span<const int> servers,
                                     const std::vector<std::vector<int>>& locals,
                                     std::span<const int> fill);

void to_json(nlohmann::json& j, const Demand& d);
/// Parses {"kind":"linsep","q":2,"gamma":[[..]]} | {"kind":"multilinear",
/// "k":K} | {"kind":"table","q":..,"k":K,"tables":[[..]]}. `k_hint`
/// supplies K when the document omits it.
Demand demand_from_json(const nlohmann::json& j, int k_hint = 0);

}  // namespace chargraph
