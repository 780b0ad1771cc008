#pragma once

#include <span>
#include <string>
#include <vector>

#include "skclt/model.hpp"
#include "skclt/replica_polynomial.hpp"

namespace skclt {

inline constexpr int kDefaultMomentOrder = 8;
inline constexpr int kMaxOverlapOrder = 4;

// correlators[A] = <prod_{i in A} sigma_i> for every subset A (as a code),
// computed with a fast Walsh-Hadamard transform of the probabilities.
std::vector<double> correlators(const GibbsTable& table);

// Gibbs moments of X = sum_i t_i sigma_i for one disorder.
struct MomentVector {
  std::vector<double> raw;      // <X^m>, m = 0..k_max
  std::vector<double> central;  // <(X - <X>)^m>
  int k_max = 0;
  double mean() const { return raw.size() > 1 ? raw[1] : 0.0; }
};

MomentVector x_moments(const GibbsTable& table, const WeightVector& weights, int k_max = kDefaultMomentOrder);

// <Y^k>, k = 0..k_max, for Y = X - X' under the product measure. Computed
// from central moments; odd orders come out as exact zeros because the
// binomial terms cancel in mirrored pairs.
std::vector<double> y_moments(const MomentVector& x, int k_max);

// Exponents (k_1, ..., k_n) of prod_l S_l^{k_l}.
struct ReplicaSpec {
  std::vector<int> exponents;

  int total() const;
  bool has_odd() const;
  int max_exponent() const;
  // "4", "2;2", ...
  std::string label() const;
  static ReplicaSpec parse(const std::string& text);
};

// For fixed disorder the S_l live on disjoint replica pairs, so
// <prod_l S_l^{k_l}> = prod_l <Y^{k_l}>.
double replica_product(std::span<const double> y, const ReplicaSpec& spec);

// <R_{1,2}^m> = N^-m sum_{i_1..i_m} <sigma_{i_1}...sigma_{i_m}>^2, 1 <= m <= 4.
double overlap_moment(const GibbsTable& table, int m);
double overlap_moment(std::span<const double> correlators, int n_spins, int m);
// [1, <R>, ..., <R^m_max>]
std::vector<double> overlap_moments(std::span<const double> correlators, int n_spins, int m_max);

// Law of N * R_{1,2} between two independent replicas: entry a is the
// probability that the replicas agree on exactly a sites. The XOR of two
// replicas has the group convolution p * p as its law, computed with the
// Walsh-Hadamard transform.
std::vector<double> overlap_distribution(const GibbsTable& table);

// <(R_{1,2} - q)^m> for any m >= 0 from the overlap law.
double overlap_law_moment(std::span<const double> law, double q, int m);

// <(R_{1,2} - q)^order> for even order <= 4, by binomial expansion.
double centered_overlap_moment(const GibbsTable& table, double q, int order);
double centered_overlap_moment(std::span<const double> overlap_moments, double q, int order);

// R_{1,2} - q = T_{1,2} + T_1 + T_2 + T with b = <sigma>.
struct TDecomposition {
  double t12 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double t = 0.0;
  double overlap = 0.0;
};

TDecomposition t_decompose(std::span<const double> b, double q, const SpinConfig& first, const SpinConfig& second);

// |(R_{1,2} - q) - (T_{1,2} + T_1 + T_2 + T)| on one replica pair.
double t_decomposition_residual(const GibbsTable& table, double q, const SpinConfig& first, const SpinConfig& second);

struct TSecondMoments {
  double t12_sq = 0.0;  // N^-2 sum_ij Cov_ij^2
  double t1_sq = 0.0;   // N^-2 sum_ij Cov_ij b_i b_j
};

TSecondMoments t_second_moments(const GibbsTable& table);

// (R_{a,b} - q)(R_{c,d} - q) * S_1^2 with S_1 on replicas 0 and 1. Used to
// compare joint configurations of overlap index pairs at fixed phi = S_1^2.
ReplicaPolynomial second_order_observable(const WeightVector& weights, double q, std::pair<int, int> first,
                                          std::pair<int, int> second, int arity = 6);

// Cross-check path: direct enumeration over replica pairs, 4^N terms.
namespace pair_enumeration {

inline constexpr int kCeiling = 13;

std::vector<double> y_moments(const GibbsTable& table, const WeightVector& weights, int k_max);
double overlap_moment(const GibbsTable& table, int m);
double centered_overlap_moment(const GibbsTable& table, double q, int order);
TSecondMoments t_second_moments(const GibbsTable& table);

}  // namespace pair_enumeration

}  // namespace skclt
