#include "chargraph/probability.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "chargraph/errors.hpp"

namespace chargraph {

namespace {

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw ValidationError(std::string(name) + " must lie in [0, 1], got " +
                          std::to_string(v));
}

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// eps^a (1 - eps)^b with 0^0 = 1.
double bern_weight(double eps, int a, int b) {
  double w = 1.0;
  if (a > 0) w *= std::pow(eps, a);
  if (b > 0) w *= std::pow(1.0 - eps, b);
  return w;
}

}  // namespace

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("binary_entropy: p outside [0, 1]");
  return plogp(p) + plogp(1.0 - p);
}

double entropy_bits(std::span<const double> mass) {
  double h = 0.0;
  for (double m : mass) h += plogp(m);
  return h < 0.0 ? 0.0 : h;
}

// ---------------------------------------------------------------- Pmf

Pmf::Pmf(std::vector<double> mass, double tol) : mass_(std::move(mass)) {
  if (mass_.empty()) throw ValidationError("Pmf: empty alphabet");
  double s = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0)) throw ValidationError("Pmf: negative or NaN mass");
    s += m;
  }
  if (std::abs(s - 1.0) > tol)
    throw ValidationError("Pmf: masses sum to " + std::to_string(s));
}

Pmf Pmf::uniform(std::size_t n) {
  if (n == 0) throw ValidationError("Pmf: empty alphabet");
  return Pmf(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Pmf Pmf::point(std::size_t n, std::size_t at) {
  if (at >= n) throw ValidationError("Pmf::point: index out of range");
  std::vector<double> m(n, 0.0);
  m[at] = 1.0;
  return Pmf(std::move(m));
}

Pmf Pmf::bernoulli(double eps) {
  check_unit(eps, "epsilon");
  return Pmf({1.0 - eps, eps});
}

std::vector<std::size_t> Pmf::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < mass_.size(); ++i)
    if (mass_[i] > kSupportFloor) s.push_back(i);
  return s;
}

double entropy(const Pmf& p) { return entropy_bits(p.mass()); }

// ----------------------------------------------------------- JointPmf

JointPmf::JointPmf(std::vector<std::size_t> radices, std::vector<double> mass,
                   double tol)
    : radices_(std::move(radices)), mass_(std::move(mass)) {
  if (radices_.empty()) throw ValidationError("JointPmf: arity 0");
  std::size_t cells = 1;
  for (std::size_t r : radices_) {
    if (r == 0) throw ValidationError("JointPmf: empty coordinate alphabet");
    cells *= r;
  }
  if (cells != mass_.size())
    throw ValidationError("JointPmf: mass vector has " +
                          std::to_string(mass_.size()) + " cells, expected " +
                          std::to_string(cells));
  double s = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0)) throw ValidationError("JointPmf: negative or NaN mass");
    s += m;
  }
  if (std::abs(s - 1.0) > tol)
    throw ValidationError("JointPmf: masses sum to " + std::to_string(s));
}

JointPmf JointPmf::product(const std::vector<Pmf>& factors) {
  if (factors.empty()) throw ValidationError("JointPmf::product: no factors");
  std::vector<std::size_t> radices;
  std::vector<double> mass{1.0};
  for (const Pmf& f : factors) {
    radices.push_back(f.size());
    std::vector<double> next;
    next.reserve(mass.size() * f.size());
    for (double m : mass)
      for (std::size_t s = 0; s < f.size(); ++s) next.push_back(m * f[s]);
    mass.swap(next);
  }
  return JointPmf(std::move(radices), std::move(mass), kModelTol);
}

JointPmf JointPmf::iid(std::size_t arity, const Pmf& factor) {
  return product(std::vector<Pmf>(arity, factor));
}

std::size_t JointPmf::encode(std::span<const int> tuple) const {
  if (tuple.size() != radices_.size())
    throw ValidationError("JointPmf: tuple arity mismatch");
  std::size_t cell = 0;
  for (std::size_t j = 0; j < radices_.size(); ++j) {
    if (tuple[j] < 0 || static_cast<std::size_t>(tuple[j]) >= radices_[j])
      throw ValidationError("JointPmf: symbol out of alphabet");
    cell = cell * radices_[j] + static_cast<std::size_t>(tuple[j]);
  }
  return cell;
}

void JointPmf::decode(std::size_t cell, std::span<int> tuple) const {
  for (std::size_t j = radices_.size(); j-- > 0;) {
    tuple[j] = static_cast<int>(cell % radices_[j]);
    cell /= radices_[j];
  }
}

std::vector<int> JointPmf::decode(std::size_t cell) const {
  std::vector<int> t(radices_.size());
  decode(cell, t);
  return t;
}

double JointPmf::prob(std::span<const int> tuple) const {
  return mass_[encode(tuple)];
}

JointPmf JointPmf::marginal(std::span<const std::size_t> coords) const {
  if (coords.empty()) throw ValidationError("marginal: no coordinates");
  std::vector<std::size_t> rad;
  for (std::size_t c : coords) {
    if (c >= radices_.size())
      throw ValidationError("marginal: coordinate out of range");
    rad.push_back(radices_[c]);
  }
  std::size_t cells = 1;
  for (std::size_t r : rad) cells *= r;
  std::vector<double> out(cells, 0.0);
  std::vector<int> t(radices_.size());
  for (std::size_t cell = 0; cell < mass_.size(); ++cell) {
    if (mass_[cell] == 0.0) continue;
    decode(cell, t);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < coords.size(); ++j)
      idx = idx * rad[j] + static_cast<std::size_t>(t[coords[j]]);
    out[idx] += mass_[cell];
  }
  return JointPmf(std::move(rad), std::move(out), kModelTol);
}

Pmf JointPmf::marginal(std::size_t coord) const {
  const std::size_t c[1] = {coord};
  JointPmf m = marginal(std::span<const std::size_t>(c, 1));
  return Pmf(std::vector<double>(m.mass().begin(), m.mass().end()), kModelTol);
}

double JointPmf::entropy() const { return entropy_bits(mass_); }

double mutual_information(const JointPmf& joint) {
  if (joint.arity() != 2)
    throw ValidationError("mutual_information: arity-2 joint required");
  double mi = chargraph::entropy(joint.marginal(0)) +
              chargraph::entropy(joint.marginal(1)) - joint.entropy();
  return mi < 0.0 ? 0.0 : mi;
}

// ------------------------------------------------------------- models

double parity_param(int l, double eps) {
  if (l < 1) throw ValidationError("parity_param: l must be >= 1");
  check_unit(eps, "epsilon");
  double e = eps;
  for (int i = 2; i <= l; ++i) e = (1.0 - e) * eps + e * (1.0 - eps);
  return e;
}

double product_param(int l, double eps) {
  if (l < 1) throw ValidationError("product_param: l must be >= 1");
  check_unit(eps, "epsilon");
  return std::pow(eps, l);
}

Pmf diniz_joint(int k, double eps, double rho) {
  if (k < 1) throw ValidationError("diniz_joint: K must be >= 1");
  check_unit(eps, "epsilon");
  check_unit(rho, "rho");
  std::vector<double> m(static_cast<std::size_t>(k) + 1, 0.0);
  for (int y = 0; y <= k; ++y) {
    double binom = 0.0;
    if ((eps > 0.0 || y == 0) && (eps < 1.0 || y == k))
      binom = std::exp(log_binom(k, y)) * bern_weight(eps, y, k - y);
    m[y] = binom * (1.0 - rho);
    if (y == 0 || y == k) {
      double a = static_cast<double>(y) / k;
      double w = (a > 0.0 ? std::pow(eps, a) : 1.0) *
                 (a < 1.0 ? std::pow(1.0 - eps, 1.0 - a) : 1.0);
      m[y] += w * rho;
    }
  }
  double s = std::accumulate(m.begin(), m.end(), 0.0);
  if (std::abs(s - 1.0) > kModelTol)
    throw ModelIntegrityError("diniz_joint: masses sum to " +
                              std::to_string(s));
  return Pmf(std::move(m), kModelTol);
}

JointPmf diniz_bits(int k, double eps, double rho) {
  if (k < 1 || k > 24) throw ValidationError("diniz_bits: K must be in [1, 24]");
  check_unit(eps, "epsilon");
  check_unit(rho, "rho");
  std::size_t cells = std::size_t{1} << k;
  std::vector<double> m(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    int w = std::popcount(c);
    m[c] = (1.0 - rho) * bern_weight(eps, w, k - w);
  }
  m[0] += rho * (1.0 - eps);
  m[cells - 1] += rho * eps;
  return JointPmf(std::vector<std::size_t>(k, 2), std::move(m), kModelTol);
}

double diniz_joint_entropy(int k, double eps, double rho) {
  if (k < 1) throw ValidationError("diniz_joint_entropy: K must be >= 1");
  check_unit(eps, "epsilon");
  check_unit(rho, "rho");
  double h = 0.0;
  for (int w = 0; w <= k; ++w) {
    double cell = (1.0 - rho) * bern_weight(eps, w, k - w);
    if (w == 0) cell += rho * (1.0 - eps);
    if (w == k) cell += rho * eps;
    if (cell <= 0.0) continue;
    h += std::exp(log_binom(k, w)) * plogp(cell);
  }
  return h;
}

double diniz_parity_param(int l, double eps, double rho) {
  check_unit(rho, "rho");
  double common = (l % 2 == 1) ? eps : 0.0;
  return (1.0 - rho) * parity_param(l, eps) + rho * common;
}

JointPmf crossover_joint(double eps, double p) {
  check_unit(p, "p");
  if (!(eps > 0.0 && eps < 1.0))
    throw ValidationError("crossover_joint: epsilon must lie in (0, 1)");
  double pp = eps * p / (1.0 - eps);
  if (pp > 1.0 + kConstructionTol)
    throw ValidationError("crossover_joint: p' = eps p / (1 - eps) exceeds 1");
  std::vector<double> m{(1.0 - eps) * (1.0 - pp), eps * p, eps * p,
                        eps * (1.0 - p)};
  if (m[0] < 0.0) m[0] = 0.0;
  return JointPmf({2, 2}, std::move(m), kModelTol);
}

double pearson_rho(const JointPmf& joint) {
  if (joint.radices() != std::vector<std::size_t>{2, 2})
    throw ValidationError("pearson_rho: joint PMF on {0,1}^2 required");
  double p11 = joint.at(3);
  double a = joint.at(2) + p11;
  double b = joint.at(1) + p11;
  double va = a * (1.0 - a), vb = b * (1.0 - b);
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return (p11 - a * b) / std::sqrt(va * vb);
}

double SkewParams::p_prime() const {
  if (!crossover_p) throw ValidationError("SkewParams: crossover_p not set");
  if (epsilon >= 1.0) throw ValidationError("SkewParams: p' needs epsilon < 1");
  return epsilon * *crossover_p / (1.0 - epsilon);
}

void SkewParams::validate() const {
  check_unit(epsilon, "epsilon");
  check_unit(rho, "rho");
  if (crossover_p) {
    check_unit(*crossover_p, "p");
    if (epsilon < 1.0 && p_prime() > 1.0 + kConstructionTol)
      throw ValidationError("SkewParams: p' = eps p / (1 - eps) exceeds 1");
  }
}

}  // namespace chargraph
