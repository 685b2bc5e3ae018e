#pragma once

// Finite-alphabet probability: PMFs, joint PMFs over symbol tuples,
// Shannon quantities in bits, and the dataset-statistics models used by
// the rate evaluations (i.i.d. Bernoulli parity/product parameters, the
// exchangeable "common shock" correlation model and the crossover table).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace chargraph {

inline constexpr double kConstructionTol = 1e-12;
inline constexpr double kModelTol = 1e-9;
// Masses at or below this are treated as zero when extracting supports.
inline constexpr double kSupportFloor = 1e-15;

/// -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0.
/// Throws std::domain_error outside [0, 1].
double binary_entropy(double p);

/// Shannon entropy in bits of an (assumed normalized) mass vector.
double entropy_bits(std::span<const double> mass);

class Pmf {
 public:
  /// Validates non-negativity and normalization within `tol`.
  explicit Pmf(std::vector<double> mass, double tol = kConstructionTol);

  static Pmf uniform(std::size_t n);
  static Pmf point(std::size_t n, std::size_t at);
  static Pmf bernoulli(double eps);

  std::size_t size() const { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_[i]; }
  std::span<const double> mass() const { return mass_; }

  /// Indices with mass above kSupportFloor.
  std::vector<std::size_t> support() const;

 private:
  std::vector<double> mass_;
};

double entropy(const Pmf& p);

/// PMF over tuples (s_0, ..., s_{a-1}) with s_j in [0, radix_j). Stored
/// densely; the first coordinate is the most significant digit of the
/// cell index.
class JointPmf {
 public:
  JointPmf(std::vector<std::size_t> radices, std::vector<double> mass,
           double tol = kConstructionTol);

  static JointPmf product(const std::vector<Pmf>& factors);
  static JointPmf iid(std::size_t arity, const Pmf& factor);

  std::size_t arity() const { return radices_.size(); }
  const std::vector<std::size_t>& radices() const { return radices_; }
  std::size_t cells() const { return mass_.size(); }
  std::span<const double> mass() const { return mass_; }
  double at(std::size_t cell) const { return mass_[cell]; }

  double prob(std::span<const int> tuple) const;
  std::size_t encode(std::span<const int> tuple) const;
  void decode(std::size_t cell, std::span<int> tuple) const;
  std::vector<int> decode(std::size_t cell) const;

  /// Joint law of the listed coordinates, in the listed order.
  JointPmf marginal(std::span<const std::size_t> coords) const;
  Pmf marginal(std::size_t coord) const;

  double entropy() const;

 private:
  std::vector<std::size_t> radices_;
  std::vector<double> mass_;
};

/// I(X;Y) = H(X) + H(Y) - H(X,Y) for an arity-2 joint PMF, clamped at 0.
double mutual_information(const JointPmf& joint);

/// Probability that the modulo-2 sum of l i.i.d. Bern(eps) bits is 1,
/// by the one-step recursion eps_l = (1 - eps_{l-1}) eps + eps_{l-1} (1 - eps).
double parity_param(int l, double eps);

/// Probability that the product of l i.i.d. Bern(eps) bits is 1.
double product_param(int l, double eps);

/// Law of the count y of ones among K exchangeable Bern(eps) bits with
/// pairwise correlation rho: (1 - rho) Binomial(K, eps) plus rho mass split
/// as (1 - eps) at 0 and eps at K. Throws ModelIntegrityError when the
/// evaluated masses miss normalization by more than 1e-9.
Pmf diniz_joint(int k, double eps, double rho);

/// Full joint PMF over {0,1}^K of the same correlation model:
/// with probability rho all bits copy one Bern(eps) draw, otherwise i.i.d.
JointPmf diniz_bits(int k, double eps, double rho);

/// H(W_1, ..., W_K) of diniz_bits, summed over Hamming-weight classes.
double diniz_joint_entropy(int k, double eps, double rho);

/// P(sum of l bits of the correlation model is odd).
double diniz_parity_param(int l, double eps, double rho);

/// Two-bit crossover table (rows W2, columns W3; cell order 00, 01, 10, 11):
/// P(0,0) = (1-eps)(1-p'), P(0,1) = P(1,0) = eps p, P(1,1) = eps (1-p),
/// p' = eps p / (1-eps). Requires eps in (0,1), p in [0,1], p' <= 1.
JointPmf crossover_joint(double eps, double p);

/// Pearson correlation of a joint PMF on {0,1}^2. Returns 0 for a
/// degenerate marginal.
double pearson_rho(const JointPmf& joint);

struct SkewParams {
  double epsilon = 0.5;
  double rho = 0.0;
  std::optional<double> crossover_p;

  /// eps p / (1 - eps); requires crossover_p and eps < 1.
  double p_prime() const;
  void validate() const;
};

}  // namespace chargraph
