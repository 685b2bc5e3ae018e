#include "chargraph/functions.hpp"

#include <algorithm>
#include <string>

#include "chargraph/errors.hpp"

namespace chargraph {

namespace {

constexpr std::size_t kMaxTableCells = std::size_t{1} << 22;

int mod(long long a, int q) {
  long long r = a % q;
  return static_cast<int>(r < 0 ? r + q : r);
}

int inv_mod(int a, int q) {
  // q prime: a^(q-2).
  long long r = 1, b = a, e = q - 2;
  while (e > 0) {
    if (e & 1) r = r * b % q;
    b = b * b % q;
    e >>= 1;
  }
  return static_cast<int>(r);
}

}  // namespace

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; static_cast<long long>(d) * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

int gf_rank(std::vector<std::vector<int>> rows, int q) {
  if (!is_prime(q)) throw ValidationError("gf_rank: q must be prime");
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  for (auto& r : rows) {
    if (r.size() != cols) throw ValidationError("gf_rank: ragged matrix");
    for (int& v : r) v = mod(v, q);
  }
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size());
       ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    int inv = inv_mod(rows[rank][c], q);
    for (auto& v : rows[rank]) v = static_cast<int>(1LL * v * inv % q);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || rows[r][c] == 0) continue;
      int f = rows[r][c];
      for (std::size_t j = 0; j < cols; ++j)
        rows[r][j] = mod(rows[r][j] - 1LL * f * rows[rank][j], q);
    }
    ++rank;
  }
  return rank;
}

std::size_t pow_size(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > (std::size_t{1} << 40) / std::max<std::size_t>(base, 1))
      throw GuardError("alphabet size " + std::to_string(base) + "^" +
                       std::to_string(exp));
    r *= base;
  }
  return r;
}

std::size_t encode_tuple(std::span<const int> t, int q) {
  std::size_t c = 0;
  for (int s : t) c = c * q + static_cast<std::size_t>(s);
  return c;
}

std::vector<int> decode_tuple(std::size_t code, std::size_t len, int q) {
  std::vector<int> t(len);
  for (std::size_t j = len; j-- > 0;) {
    t[j] = static_cast<int>(code % q);
    code /= q;
  }
  return t;
}

// -------------------------------------------------------------- Demand

Demand Demand::linear(std::vector<std::vector<int>> gamma, int q) {
  if (!is_prime(q)) throw ValidationError("demand: q must be prime");
  if (gamma.empty() || gamma[0].empty())
    throw ValidationError("demand: empty coefficient matrix");
  Demand d;
  d.kind_ = DemandKind::LinearlySeparable;
  d.q_ = q;
  d.kc_ = static_cast<int>(gamma.size());
  d.k_ = static_cast<int>(gamma[0].size());
  for (auto& row : gamma) {
    if (static_cast<int>(row.size()) != d.k_)
      throw ValidationError("demand: ragged coefficient matrix");
    for (int& v : row) v = mod(v, q);
  }
  d.gamma_ = std::move(gamma);
  return d;
}

Demand Demand::multilinear(int k, int q) {
  if (!is_prime(q)) throw ValidationError("demand: q must be prime");
  if (k < 1) throw ValidationError("demand: K must be positive");
  Demand d;
  d.kind_ = DemandKind::MultiLinear;
  d.q_ = q;
  d.k_ = k;
  d.kc_ = 1;
  return d;
}

Demand Demand::table(std::vector<std::vector<int>> tables, int k, int q) {
  if (!is_prime(q)) throw ValidationError("demand: q must be prime");
  if (tables.empty()) throw ValidationError("demand: no tables");
  if (k < 1) throw ValidationError("demand: K must be positive");
  std::size_t cells = pow_size(q, k);
  for (const auto& t : tables) {
    if (t.size() != cells)
      throw ValidationError("demand: table has " + std::to_string(t.size()) +
                            " entries, expected q^K = " +
                            std::to_string(cells));
    for (int v : t)
      if (v < 0 || v >= q) throw ValidationError("demand: output outside F_q");
  }
  Demand d;
  d.kind_ = DemandKind::Table;
  d.q_ = q;
  d.k_ = k;
  d.kc_ = static_cast<int>(tables.size());
  d.tables_ = std::move(tables);
  return d;
}

std::vector<int> Demand::evaluate(std::span<const int> w) const {
  if (static_cast<int>(w.size()) != k_)
    throw ValidationError("evaluate: expected " + std::to_string(k_) +
                          " coordinates, got " + std::to_string(w.size()));
  for (int v : w)
    if (v < 0 || v >= q_) throw ValidationError("evaluate: symbol outside F_q");
  std::vector<int> out(kc_);
  switch (kind_) {
    case DemandKind::LinearlySeparable:
      for (int j = 0; j < kc_; ++j) {
        long long s = 0;
        for (int c = 0; c < k_; ++c) s += 1LL * gamma_[j][c] * w[c];
        out[j] = mod(s, q_);
      }
      break;
    case DemandKind::MultiLinear: {
      long long p = 1;
      for (int v : w) p = p * v % q_;
      out[0] = static_cast<int>(p);
      break;
    }
    case DemandKind::Table: {
      std::size_t cell = encode_tuple(w, q_);
      for (int j = 0; j < kc_; ++j) out[j] = tables_[j][cell];
      break;
    }
  }
  return out;
}

std::vector<std::vector<int>> Demand::tabulate() const {
  std::size_t cells = pow_size(q_, k_);
  if (cells > kMaxTableCells)
    throw GuardError("demand table with " + std::to_string(cells) + " cells");
  if (kind_ == DemandKind::Table) return tables_;
  std::vector<std::vector<int>> t(kc_, std::vector<int>(cells));
  std::vector<int> w(k_, 0);
  for (std::size_t c = 0; c < cells; ++c) {
    auto out = evaluate(w);
    for (int j = 0; j < kc_; ++j) t[j][c] = out[j];
    for (int i = k_ - 1; i >= 0; --i) {
      if (++w[i] < q_) break;
      w[i] = 0;
    }
  }
  return t;
}

Demand Demand::select(std::span<const int> functions) const {
  if (functions.empty()) throw ValidationError("select: empty function set");
  for (int f : functions)
    if (f < 0 || f >= kc_)
      throw ValidationError("select: function index out of range");
  switch (kind_) {
    case DemandKind::LinearlySeparable: {
      std::vector<std::vector<int>> g;
      for (int f : functions) g.push_back(gamma_[f]);
      return linear(std::move(g), q_);
    }
    case DemandKind::MultiLinear:
      return *this;
    case DemandKind::Table: {
      std::vector<std::vector<int>> t;
      for (int f : functions) t.push_back(tables_[f]);
      return table(std::move(t), k_, q_);
    }
  }
  return *this;
}

bool Demand::boolean_valued() const {
  if (q_ == 2) return true;
  for (const auto& t : tabulate())
    for (int v : t)
      if (v > 1) return false;
  return true;
}

// --------------------------------------------------------- server views

ServerView server_view(const Placement& p, int server, int q) {
  if (server < 0 || server >= p.n)
    throw ValidationError("server index out of range");
  ServerView v;
  v.server = server;
  v.q = q;
  for (int x : p.z[server]) v.coords.push_back(x - 1);
  std::sort(v.coords.begin(), v.coords.end());
  return v;
}

std::vector<int> complement_coords(const Placement& p, int server) {
  std::vector<bool> held(p.k, false);
  for (int x : p.z.at(server)) held[x - 1] = true;
  std::vector<int> rest;
  for (int c = 0; c < p.k; ++c)
    if (!held[c]) rest.push_back(c);
  return rest;
}

ServerRestriction::ServerRestriction(Demand d, const Placement& p, int server)
    : d_(std::move(d)),
      view_(server_view(p, server, d_.q())),
      rest_(complement_coords(p, server)) {
  if (p.k != d_.k())
    throw ValidationError("restriction: placement K differs from demand K");
}

std::vector<int> ServerRestriction::merge(std::span<const int> local,
                                          std::span<const int> rest) const {
  if (local.size() != view_.coords.size() || rest.size() != rest_.size())
    throw ValidationError("restriction: tuple arity mismatch");
  std::vector<int> w(d_.k());
  for (std::size_t j = 0; j < local.size(); ++j) w[view_.coords[j]] = local[j];
  for (std::size_t j = 0; j < rest.size(); ++j) w[rest_[j]] = rest[j];
  return w;
}

std::vector<int> ServerRestriction::operator()(std::span<const int> local,
                                               std::span<const int> rest) const {
  return d_.evaluate(merge(local, rest));
}

ServerRestriction restrict_to_server(const Demand& d, const Placement& p,
                                     int server) {
  return ServerRestriction(d, p, server);
}

std::vector<int> merge_server_tuples(const Placement& p,
                                     std::span<const int> servers,
                                     const std::vector<std::vector<int>>& locals,
                                     std::span<const int> fill) {
  if (servers.size() != locals.size())
    throw ValidationError("merge: one local tuple per server required");
  if (static_cast<int>(fill.size()) != p.k)
    throw ValidationError("merge: fill must have K coordinates");
  std::vector<int> w(fill.begin(), fill.end());
  std::vector<bool> set(p.k, false);
  for (std::size_t s = 0; s < servers.size(); ++s) {
    const auto& z = p.z.at(servers[s]);
    if (locals[s].size() != z.size())
      throw ValidationError("merge: local tuple arity mismatch");
    for (std::size_t j = 0; j < z.size(); ++j) {
      int c = z[j] - 1;
      if (set[c] && w[c] != locals[s][j])
        throw ValidationError("merge: servers disagree on dataset " +
                              std::to_string(z[j]));
      w[c] = locals[s][j];
      set[c] = true;
    }
  }
  return w;
}

// ---------------------------------------------------------------- JSON

void to_json(nlohmann::json& j, const Demand& d) {
  switch (d.kind()) {
    case DemandKind::LinearlySeparable:
      j = {{"kind", "linsep"}, {"q", d.q()}, {"gamma", d.gamma()}};
      break;
    case DemandKind::MultiLinear:
      j = {{"kind", "multilinear"}, {"q", d.q()}, {"k", d.k()}};
      break;
    case DemandKind::Table:
      j = {{"kind", "table"}, {"q", d.q()}, {"k", d.k()},
           {"tables", d.tabulate()}};
      break;
  }
}

Demand demand_from_json(const nlohmann::json& j, int k_hint) {
  try {
    std::string kind = j.at("kind").get<std::string>();
    int q = j.value("q", 2);
    int k = j.value("k", k_hint);
    if (kind == "linsep")
      return Demand::linear(j.at("gamma").get<std::vector<std::vector<int>>>(),
                            q);
    if (kind == "multilinear") return Demand::multilinear(k, q);
    if (kind == "table" || kind == "boolean")
      return Demand::table(j.at("tables").get<std::vector<std::vector<int>>>(),
                           k, q);
    throw ValidationError("demand JSON: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("demand JSON: ") + e.what());
  }
}

}  // namespace chargraph
