#include "chargraph/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "chargraph/errors.hpp"

namespace chargraph {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double h(double p) { return binary_entropy(std::clamp(p, 0.0, 1.0)); }

void check_binary_source(const Demand& d, const Placement& p,
                         const JointPmf& joint) {
  p.validate();
  if (p.k != d.k() || static_cast<int>(joint.arity()) != d.k())
    throw ValidationError("K differs across demand, placement and PMF");
  for (std::size_t r : joint.radices())
    if (static_cast<int>(r) != d.q())
      throw ValidationError("PMF alphabet differs from the demand's q");
}

std::size_t local_code(std::span<const int> w, const std::vector<int>& coords,
                       int q) {
  std::size_t c = 0;
  for (int k : coords) c = c * q + static_cast<std::size_t>(w[k]);
  return c;
}

std::vector<std::uint64_t> output_codes(const Demand& d) {
  auto tables = d.tabulate();
  std::vector<std::uint64_t> out(tables[0].size(), 0);
  for (std::size_t c = 0; c < out.size(); ++c)
    for (const auto& t : tables)
      out[c] = out[c] * static_cast<std::uint64_t>(d.q()) + t[c];
  return out;
}

double entropy_or_zero(const CharGraph& g, const SolverOptions& opts) {
  if (g.edge_count() == 0) return 0.0;
  return graph_entropy(g, opts).value;
}

// Per-cell local codes for every server.
std::vector<std::vector<std::size_t>> all_local_codes(const Placement& p,
                                                      const JointPmf& joint,
                                                      int q) {
  std::vector<std::vector<int>> coords(p.n);
  for (int i = 0; i < p.n; ++i) coords[i] = server_view(p, i, q).coords;
  std::vector<std::vector<std::size_t>> codes(
      joint.cells(), std::vector<std::size_t>(p.n, 0));
  std::vector<int> w(joint.arity());
  for (std::size_t cell = 0; cell < joint.cells(); ++cell) {
    if (joint.at(cell) <= kSupportFloor) continue;
    joint.decode(cell, w);
    for (int i = 0; i < p.n; ++i) codes[cell][i] = local_code(w, coords[i], q);
  }
  return codes;
}

bool subset_decodes(const JointPmf& joint,
                    const std::vector<std::vector<std::size_t>>& codes,
                    const std::vector<std::uint64_t>& out,
                    const std::vector<std::vector<int>>& profile,
                    const std::vector<int>& subset) {
  std::map<std::vector<int>, std::uint64_t> seen;
  std::vector<int> key(subset.size());
  for (std::size_t cell = 0; cell < joint.cells(); ++cell) {
    if (joint.at(cell) <= kSupportFloor) continue;
    for (std::size_t s = 0; s < subset.size(); ++s)
      key[s] = profile[subset[s]][codes[cell][subset[s]]];
    auto [it, fresh] = seen.emplace(key, out[cell]);
    if (!fresh && it->second != out[cell]) return false;
  }
  return true;
}

std::string subset_str(const std::vector<int>& s) {
  std::string r = "{";
  for (std::size_t i = 0; i < s.size(); ++i)
    r += (i ? "," : "") + std::to_string(s[i] + 1);
  return r + "}";
}

}  // namespace

RateReport make_report(std::string method, std::vector<int> servers,
                       std::vector<double> per_server) {
  RateReport r;
  r.method = std::move(method);
  r.servers = std::move(servers);
  r.per_server = std::move(per_server);
  r.sum_rate = std::accumulate(r.per_server.begin(), r.per_server.end(), 0.0);
  return r;
}

double gain_ratio(double numerator, double graph_rate) {
  if (std::isnan(numerator) || std::isnan(graph_rate)) return kNaN;
  if (graph_rate <= 1e-15) {
    if (numerator <= 1e-15) return kNaN;
    return std::numeric_limits<double>::infinity();
  }
  return numerator / graph_rate;
}

GainReport gains(const RateReport& graph, const RateReport& lin,
                 const RateReport& sw) {
  GainReport g;
  g.graph = graph;
  g.lin = lin;
  g.sw = sw;
  g.eta_lin = gain_ratio(lin.sum_bits(), graph.sum_bits());
  g.eta_sw = gain_ratio(sw.sum_bits(), graph.sum_bits());
  return g;
}

// ------------------------------------------------------------- codebooks

std::vector<int> lift_coloring(const SourceGraph& sg, const Placement& p,
                               int server, int q,
                               const std::vector<int>& vertex_color) {
  const ServerView v = server_view(p, server, q);
  std::vector<int> g(v.alphabet_size(), 0);
  for (std::size_t u = 0; u < sg.graph.size(); ++u)
    g[encode_tuple(sg.graph.labels()[u], q)] = vertex_color[u];
  return g;
}

Codebook default_codebook(const Demand& d, const Placement& p,
                          const JointPmf& joint) {
  check_binary_source(d, p, joint);
  Codebook cb;
  cb.candidates.resize(p.n);
  for (int i = 0; i < p.n; ++i) {
    SourceGraph sg = build_char_source_graph(d, p, joint, i);
    Coloring c = best_coloring(sg.graph);
    cb.candidates[i].push_back(lift_coloring(sg, p, i, d.q(), c.color));
  }
  return cb;
}

double image_graph_entropy(const Demand& d, const Placement& p,
                           const JointPmf& joint, int server,
                           const std::vector<int>& g,
                           const SolverOptions& opts) {
  check_binary_source(d, p, joint);
  const ServerView v = server_view(p, server, d.q());
  if (g.size() != v.alphabet_size())
    throw ValidationError("codebook candidate for server " +
                          std::to_string(server + 1) + " is not total: " +
                          std::to_string(g.size()) + " entries, expected " +
                          std::to_string(v.alphabet_size()));
  auto out = output_codes(d);
  const int q = d.q();
  auto key = [&](std::span<const int> w) {
    return std::vector<int>{g[local_code(w, v.coords, q)]};
  };
  auto outputs = [&](std::span<const int> w) { return out[encode_tuple(w, q)]; };
  SourceGraph sg = build_source_graph(joint, v.coords, key, outputs);
  return entropy_or_zero(sg.graph, opts);
}

bool profile_decodable(const Demand& d, const Placement& p,
                       const JointPmf& joint,
                       const std::vector<std::vector<int>>& profile, int nr,
                       std::vector<int>* failing_subset) {
  check_binary_source(d, p, joint);
  if (static_cast<int>(profile.size()) != p.n)
    throw ValidationError("profile needs one encoder per server");
  if (binomial(p.n, nr) > 1e6)
    throw GuardError("decodability over C(" + std::to_string(p.n) + ", " +
                     std::to_string(nr) + ") subsets");
  auto codes = all_local_codes(p, joint, d.q());
  auto out = output_codes(d);
  bool ok = true;
  for_each_subset(p.n, nr, [&](const std::vector<int>& s) {
    if (!subset_decodes(joint, codes, out, profile, s)) {
      ok = false;
      if (failing_subset) *failing_subset = s;
    }
    return ok;
  });
  return ok;
}

namespace {

struct ChosenProfile {
  std::vector<double> rates;
  std::vector<std::vector<int>> encoders;
  std::vector<int> choice;
};

ChosenProfile choose_profile(const Topology& t, const Placement& p,
                             const Demand& d, const JointPmf& joint,
                             const Codebook& cb_in, const SolverOptions& opts) {
  check_binary_source(d, p, joint);
  if (!coverage_check(p, t))
    throw ValidationError("placement fails the Nr-subset coverage check");
  Codebook cb = cb_in.candidates.empty() ? default_codebook(d, p, joint) : cb_in;
  if (static_cast<int>(cb.candidates.size()) != p.n)
    throw ValidationError("codebook needs candidates for every server");
  ChosenProfile cp;
  for (int i = 0; i < p.n; ++i) {
    if (cb.candidates[i].empty())
      throw ValidationError("codebook has no candidate for server " +
                            std::to_string(i + 1));
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (std::size_t c = 0; c < cb.candidates[i].size(); ++c) {
      double r = image_graph_entropy(d, p, joint, i, cb.candidates[i][c], opts);
      if (r < best - 1e-12) {
        best = r;
        arg = static_cast<int>(c);
      }
    }
    cp.rates.push_back(best);
    cp.choice.push_back(arg);
    cp.encoders.push_back(cb.candidates[i][arg]);
  }
  std::vector<int> bad;
  if (!profile_decodable(d, p, joint, cp.encoders, t.nr, &bad))
    throw DecodeError("codebook is not decodable: server subset " +
                      subset_str(bad) +
                      " cannot determine the demanded functions");
  return cp;
}

}  // namespace

RateReport theorem1_sum_rate(const Topology& t, const Placement& p,
                             const Demand& d, const JointPmf& joint,
                             const Codebook& cb,
                             std::optional<std::vector<int>> servers,
                             const SolverOptions& opts) {
  ChosenProfile cp = choose_profile(t, p, d, joint, cb, opts);
  std::vector<int> ss;
  if (servers) {
    ss = *servers;
  } else {
    ss.resize(t.nr);
    std::iota(ss.begin(), ss.end(), 0);
  }
  std::vector<double> rates;
  for (int i : ss) {
    if (i < 0 || i >= p.n) throw ValidationError("server index out of range");
    rates.push_back(cp.rates[i]);
  }
  RateReport r = make_report("theorem1", ss, rates);
  r.metadata["codebook_choice"] = cp.choice;
  return r;
}

RateReport theorem1_best_subset(const Topology& t, const Placement& p,
                                const Demand& d, const JointPmf& joint,
                                const Codebook& cb, const SolverOptions& opts) {
  ChosenProfile cp = choose_profile(t, p, d, joint, cb, opts);
  auto codes = all_local_codes(p, joint, d.q());
  auto out = output_codes(d);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> arg;
  for_each_subset(p.n, t.nr, [&](const std::vector<int>& s) {
    double sum = 0.0;
    for (int i : s) sum += cp.rates[i];
    if (sum < best - 1e-12 && subset_decodes(joint, codes, out, cp.encoders, s)) {
      best = sum;
      arg = s;
    }
    return true;
  });
  std::vector<double> rates;
  for (int i : arg) rates.push_back(cp.rates[i]);
  RateReport r = make_report("theorem1", arg, rates);
  r.metadata["codebook_choice"] = cp.choice;
  r.metadata["subset"] = "best";
  return r;
}

// --------------------------------------------------------------- prop 1

RateReport prop1_rate(const Topology& t, int kc) {
  t.validate();
  if (kc < 1) throw ValidationError("prop1: Kc must be positive");
  const int delta = t.k / t.n;
  const int nr = t.nr;
  double sum;
  int case_id;
  if (kc < delta) {
    sum = static_cast<double>(kc) * nr;
    case_id = 1;
  } else if (kc <= delta * nr) {
    sum = static_cast<double>(delta) * nr;
    case_id = 2;
  } else if (kc <= t.k) {
    sum = kc;
    case_id = 3;
  } else {
    sum = t.k;
    case_id = 4;
  }
  std::vector<int> ss(nr);
  std::iota(ss.begin(), ss.end(), 0);
  RateReport r = make_report("prop1", ss, std::vector<double>(nr, sum / nr));
  r.sum_rate = sum;
  r.unit = "symbols";
  r.metadata["case"] = case_id;
  return r;
}

// --------------------------------------------------------------- prop 2

RateReport prop2_rate(const Topology& t, const Placement& p, const Demand& d,
                      const JointPmf& joint, const Codebook& cb,
                      std::optional<std::vector<int>> servers) {
  check_binary_source(d, p, joint);
  if (d.q() != 2) throw ValidationError("prop2: binary subfunctions required");
  if (!coverage_check(p, t))
    throw ValidationError("placement fails the Nr-subset coverage check");
  std::vector<int> ss;
  if (servers) {
    ss = *servers;
  } else {
    ss.resize(t.nr);
    std::iota(ss.begin(), ss.end(), 0);
  }
  std::vector<double> rates;
  nlohmann::json probs = nlohmann::json::array();
  for (int i : ss) {
    if (i < 0 || i >= p.n) throw ValidationError("server index out of range");
    SourceGraph sg = build_char_source_graph(d, p, joint, i);
    MisFamily fam = enumerate_mis(sg.graph);
    if (fam.sets.size() > 2)
      throw PremiseError("prop2: union graph of server " +
                         std::to_string(i + 1) + " has " +
                         std::to_string(fam.sets.size()) +
                         " maximal independent sets (at most 2 required)");
    std::vector<std::vector<int>> cands;
    if (i < static_cast<int>(cb.candidates.size()))
      cands = cb.candidates[i];
    if (cands.empty()) {
      std::vector<int> vc(sg.graph.size(), 1);
      for (int v : fam.sets[0]) vc[v] = 0;
      cands.push_back(lift_coloring(sg, p, i, 2, vc));
    }
    double best = std::numeric_limits<double>::infinity(), best_p = 0.0;
    for (const auto& g : cands) {
      if (g.size() != server_view(p, i, 2).alphabet_size())
        throw ValidationError("prop2: candidate for server " +
                              std::to_string(i + 1) + " is not total");
      std::vector<int> vc(sg.graph.size());
      double p1 = 0.0;
      for (std::size_t v = 0; v < sg.graph.size(); ++v) {
        int c = g[encode_tuple(sg.graph.labels()[v], 2)];
        if (c != 0 && c != 1)
          throw ValidationError("prop2: candidate is not Boolean-valued");
        vc[v] = c;
        if (c == 1) p1 += sg.graph.pmf()[v];
      }
      if (!is_valid_coloring(sg.graph, vc))
        throw ValidationError("prop2: candidate for server " +
                              std::to_string(i + 1) +
                              " is not a valid coloring of its union graph");
      double r = h(p1);
      if (r < best) {
        best = r;
        best_p = p1;
      }
    }
    rates.push_back(best);
    probs.push_back(best_p);
  }
  RateReport r = make_report("prop2", ss, rates);
  r.metadata["p_one"] = probs;
  return r;
}

// --------------------------------------------------------------- prop 3

RateReport prop3_rate(const Topology& t, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw ValidationError("prop3: epsilon must lie in [0, 1]");
  DerivedParams dp = derived_params(t);
  const double a = std::pow(eps, dp.m);
  std::vector<double> terms;
  double weight = 1.0;
  for (int j = 0; j < dp.n_star; ++j) {
    terms.push_back(weight * h(a));
    weight *= a;
  }
  if (dp.delta_n > 0) terms.push_back(weight * h(std::pow(eps, dp.xi_n)));
  RateReport r = make_report("prop3", disjoint_cover_ordering(t), terms);
  // Reported as the closed form rather than the running sum of terms.
  double geo = (a == 1.0) ? dp.n_star * h(a)
                          : (1.0 - std::pow(a, dp.n_star)) / (1.0 - a) * h(a);
  r.sum_rate = geo + (dp.delta_n > 0 ? std::pow(a, dp.n_star) *
                                           h(std::pow(eps, dp.xi_n))
                                     : 0.0);
  return r;
}

std::vector<int> disjoint_cover_ordering(const Topology& t) {
  DerivedParams dp = derived_params(t);
  const int span = t.n - t.nr + 1;
  std::vector<int> o;
  for (int j = 0; j < dp.n_star; ++j) o.push_back(j * span);
  if (dp.delta_n > 0) o.push_back(dp.n_star * span);
  return o;
}

// ---------------------------------------------------------------- chain

RateReport chain_rate(const Topology& t, const Placement& p, const Demand& d,
                      const JointPmf& joint, const std::vector<int>& ordering,
                      const SolverOptions& opts,
                      std::vector<ChainStep>* steps) {
  t.validate();
  check_binary_source(d, p, joint);
  if (ordering.empty()) throw ValidationError("chain: empty ordering");
  const int q = d.q();
  auto out = output_codes(d);
  std::vector<std::vector<int>> ycell(joint.cells());
  std::vector<double> rates;
  std::vector<ChainStep> local_steps;
  bool all_converged = true;

  for (int s : ordering) {
    if (s < 0 || s >= p.n) throw ValidationError("chain: server out of range");
    const std::vector<int> coords = server_view(p, s, q).coords;
    const std::size_t m = coords.size();
    auto key = [&](std::span<const int> w) {
      std::vector<int> k;
      for (int c : coords) k.push_back(w[c]);
      const auto& y = ycell[joint.encode(w)];
      k.insert(k.end(), y.begin(), y.end());
      return k;
    };
    auto outputs = [&](std::span<const int> w) { return out[joint.encode(w)]; };
    SourceGraph sg = build_source_graph(joint, coords, key, outputs);
    {
      // The user sees only the colors, so two inputs that later servers
      // cannot tell apart must be split here.
      std::set<int> later;
      bool after = false;
      for (int o : ordering) {
        if (after)
          for (int c : server_view(p, o, q).coords) later.insert(c);
        if (o == s) after = true;
      }
      std::map<std::vector<int>, std::vector<std::size_t>> groups;
      std::vector<int> w(joint.arity());
      for (std::size_t cell = 0; cell < joint.cells(); ++cell) {
        if (sg.cell_vertex[cell] < 0) continue;
        joint.decode(cell, w);
        std::vector<int> gk = ycell[cell];
        for (int c : later) gk.push_back(w[c]);
        groups[gk].push_back(cell);
      }
      std::set<std::pair<int, int>> es;
      for (auto e : sg.graph.edges()) es.insert(e);
      const std::size_t before = es.size();
      for (const auto& [gk, cells] : groups)
        for (std::size_t a = 0; a < cells.size(); ++a)
          for (std::size_t b = a + 1; b < cells.size(); ++b) {
            int u = sg.cell_vertex[cells[a]], v = sg.cell_vertex[cells[b]];
            if (u != v && out[cells[a]] != out[cells[b]])
              es.insert({std::min(u, v), std::max(u, v)});
          }
      if (es.size() != before)
        sg.graph = CharGraph(sg.graph.pmf(), {es.begin(), es.end()},
                             sg.graph.labels());
    }
    const CharGraph& g = sg.graph;

    std::map<std::vector<int>, std::vector<int>> slices;
    for (std::size_t v = 0; v < g.size(); ++v) {
      const auto& l = g.labels()[v];
      slices[std::vector<int>(l.begin() + m, l.end())].push_back(
          static_cast<int>(v));
    }
    double rate = 0.0;
    int max_colors = 0;
    bool converged = true;
    std::vector<int> color(g.size(), 0);
    for (const auto& [y, vs] : slices) {
      double py = 0.0;
      for (int v : vs) py += g.pmf()[v];
      CharGraph sub = g.induced(vs);
      if (sub.edge_count() > 0) {
        GraphEntropyResult ge = graph_entropy(sub, opts);
        converged = converged && ge.converged;
        rate += py * ge.value;
      }
      Coloring c = best_coloring(sub);
      max_colors = std::max(max_colors, c.count);
      for (std::size_t i = 0; i < vs.size(); ++i) color[vs[i]] = c.color[i];
    }
    for (std::size_t cell = 0; cell < joint.cells(); ++cell)
      if (sg.cell_vertex[cell] >= 0)
        ycell[cell].push_back(color[sg.cell_vertex[cell]]);
    rates.push_back(rate);
    all_converged = all_converged && converged;
    local_steps.push_back(
        {s, rate, static_cast<int>(slices.size()), max_colors});
  }

  std::map<std::vector<int>, std::uint64_t> seen;
  for (std::size_t cell = 0; cell < joint.cells(); ++cell) {
    if (joint.at(cell) <= kSupportFloor) continue;
    auto [it, fresh] = seen.emplace(ycell[cell], out[cell]);
    if (!fresh && it->second != out[cell])
      throw DecodeError("insufficient ordering " + subset_str(ordering) +
                        ": transmissions do not determine the demand");
  }
  if (steps) *steps = local_steps;
  RateReport r = make_report("chain", ordering, rates);
  std::vector<int> one_based;
  for (int s : ordering) one_based.push_back(s + 1);
  r.metadata["ordering"] = one_based;
  r.metadata["converged"] = all_converged;
  return r;
}

RateReport chain_rate_best(const Topology& t, const Placement& p,
                           const Demand& d, const JointPmf& joint,
                           const std::vector<std::vector<int>>& orderings,
                           const SolverOptions& opts) {
  std::optional<RateReport> best;
  int tried = 0, decodable = 0;
  for (const auto& o : orderings) {
    ++tried;
    try {
      RateReport r = chain_rate(t, p, d, joint, o, opts);
      ++decodable;
      if (!best || r.sum_rate < best->sum_rate - 1e-12) best = std::move(r);
    } catch (const DecodeError&) {
    }
  }
  if (!best) throw DecodeError("no supplied ordering determines the demand");
  best->metadata["orderings_tried"] = tried;
  best->metadata["orderings_decodable"] = decodable;
  return *best;
}

std::vector<std::vector<int>> all_orderings(int n, int nr) {
  if (nr > 6) throw GuardError("ordering search beyond 6 servers");
  std::vector<std::vector<int>> all;
  for_each_subset(n, nr, [&](const std::vector<int>& s) {
    std::vector<int> o = s;
    do {
      all.push_back(o);
    } while (std::next_permutation(o.begin(), o.end()));
    if (all.size() > 100000) throw GuardError("more than 1e5 orderings");
    return true;
  });
  return all;
}

// --------------------------------------------------------- Slepian-Wolf

RateReport slepian_wolf_rate(const JointPmf& joint, const Topology& t,
                             const Placement& p) {
  if (static_cast<int>(joint.arity()) != p.k || p.n != t.n)
    throw ValidationError("slepian_wolf: PMF arity or placement mismatch");
  std::vector<bool> covered(p.k, false);
  std::vector<int> ss;
  std::vector<double> rates;
  double prev = 0.0;
  for (int i = 0; i < p.n; ++i) {
    for (int x : p.z[i]) covered[x - 1] = true;
    std::vector<std::size_t> cs;
    for (int c = 0; c < p.k; ++c)
      if (covered[c]) cs.push_back(c);
    double hcur = cs.empty() ? 0.0 : joint.marginal(cs).entropy();
    ss.push_back(i);
    rates.push_back(std::max(0.0, hcur - prev));
    prev = hcur;
  }
  RateReport r = make_report("slepian_wolf", ss, rates);
  r.sum_rate = joint.entropy();
  return r;
}

RateReport slepian_wolf_value(double joint_entropy) {
  RateReport r = make_report("slepian_wolf", {}, {});
  r.sum_rate = joint_entropy;
  return r;
}

// ------------------------------------------------------------ scenarios

namespace {

ScenarioRates finish(double graph, double lin, double sw) {
  ScenarioRates s;
  s.graph = graph;
  s.lin = lin;
  s.sw = sw;
  s.eta_lin = gain_ratio(lin, graph);
  s.eta_sw = gain_ratio(sw, graph);
  return s;
}

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw ValidationError("epsilon must lie in [0, 1]");
}

}  // namespace

ScenarioRates scenario1(const Topology& t, double eps, double rho) {
  check_eps(eps);
  DerivedParams dp = derived_params(t);
  double e_m = diniz_parity_param(dp.m, eps, rho);
  double graph = dp.n_star * h(e_m);
  if (dp.delta_n > 0) graph += h(diniz_parity_param(dp.xi_n, eps, rho));
  double lin = t.nr * h(e_m);
  double sw = diniz_joint_entropy(t.k, eps, rho);
  return finish(graph, lin, sw);
}

ScenarioRates scenario2_iid(double eps) {
  check_eps(eps);
  double graph = 2.0 * h(eps);
  double lin = h(eps) + h(2.0 * eps * (1.0 - eps));
  double sw = 3.0 * h(eps);
  return finish(graph, lin, sw);
}

ScenarioRates scenario2_table2(double eps, double p) {
  check_eps(eps);
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p must lie in [0, 1]");
  if (eps >= 1.0 || eps * p > (1.0 - eps) + 1e-12)
    return {kNaN, kNaN, kNaN, kNaN, kNaN};
  double pp = eps * p / (1.0 - eps);
  double graph = h(eps) + (1.0 - eps) * h(pp) + eps * h(p);
  double lin = h(eps) + h(2.0 * eps * p);
  double sw = h(eps) + graph;
  return finish(graph, lin, sw);
}

ScenarioRates scenario2_diniz(double eps, double rho) {
  check_eps(eps);
  if (!(rho >= 0.0 && rho <= 1.0)) throw ValidationError("rho must lie in [0, 1]");
  const double e = eps, r = rho;
  const double f2[3] = {(1 - e) * (1 - e) * (1 - r) + (1 - e) * r,
                        2 * e * (1 - e) * (1 - r), e * e * (1 - r) + e * r};
  double zeta1 = (1 - e) * (1 - r) + r;
  double zeta2 = (1 - e) * (1 - r);
  double graph = h(e) + (1 - e) * h(zeta1) + e * h(zeta2);
  double lin = h(e) + entropy_bits(f2);
  double sw = diniz_joint_entropy(3, eps, rho);
  return finish(graph, lin, sw);
}

ScenarioRates scenario3(const Topology& t, double eps) {
  check_eps(eps);
  t.validate();
  if (t.k != t.n) throw ValidationError("scenario III requires K = N");
  if (t.kc > t.nr) throw ValidationError("scenario III requires Kc <= Nr");
  DerivedParams dp = derived_params(t);
  double lin = t.nr * h(parity_param(dp.m, eps));
  double graph = static_cast<double>(t.kc) * dp.n_star * h(eps);
  double sw = t.k * h(eps);
  return finish(graph, lin, sw);
}

ScenarioRates multilinear_rates(const Topology& t, double eps) {
  check_eps(eps);
  double graph = prop3_rate(t, eps).sum_rate;
  return finish(graph, kNaN, t.k * h(eps));
}

GainReport scenario3_rates(const Topology& t, double eps, int kc) {
  Topology tt = t;
  tt.kc = kc;
  ScenarioRates s = scenario3(tt, eps);
  RateReport g = slepian_wolf_value(s.graph);
  g.method = "graph";
  RateReport l = slepian_wolf_value(s.lin);
  l.method = "linear";
  RateReport w = slepian_wolf_value(s.sw);
  return gains(g, l, w);
}

double scenario2_gain_iid(double eps) { return scenario2_iid(eps).eta_lin; }
double scenario2_gain_table2(double eps, double p) {
  return scenario2_table2(eps, p).eta_lin;
}
double scenario2_gain_diniz(double eps, double rho) {
  return scenario2_diniz(eps, rho).eta_lin;
}

// ----------------------------------------------------------------- JSON

namespace {
nlohmann::json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}
}  // namespace

void to_json(nlohmann::json& j, const RateReport& r) {
  nlohmann::json per = nlohmann::json::array();
  for (double v : r.per_server) per.push_back(num(v));
  std::vector<int> servers;
  for (int s : r.servers) servers.push_back(s + 1);
  j = nlohmann::json{{"method", r.method},
                     {"servers", servers},
                     {"per_server_rates", per},
                     {"sum_rate", num(r.sum_rate)},
                     {"unit", r.unit},
                     {"metadata", r.metadata}};
}

void to_json(nlohmann::json& j, const GainReport& g) {
  j = nlohmann::json{{"eta_lin", num(g.eta_lin)},
                     {"eta_sw", num(g.eta_sw)},
                     {"graph", g.graph},
                     {"lin", g.lin},
                     {"sw", g.sw}};
}

}  // namespace chargraph
