#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "skclt/model.hpp"

namespace skclt {

inline constexpr int kMaxReplicas = 8;

using ReplicaMasks = std::array<ConfigCode, kMaxReplicas>;

// coeff * prod_l prod_{i in masks[l]} sigma_i^l
struct ReplicaTerm {
  double coeff = 0.0;
  ReplicaMasks masks{};
};

// A function on Sigma_N^n written as a multilinear polynomial in the replica
// spins. Because sigma^2 = 1, every product of spins reduces to one subset
// mask per replica, and for a fixed Gibbs measure the replica expectation of
// a term factorizes into single-replica correlators <sigma_A>.
//
// arity() is the declared n of the function; terms may leave trailing
// replicas unused.
class ReplicaPolynomial {
 public:
  ReplicaPolynomial(int n_spins, int arity);

  static ReplicaPolynomial constant(int n_spins, int arity, double value);
  static ReplicaPolynomial spin(int n_spins, int arity, int replica, int site);
  // (1/N) sum_{i < upto} sigma_i^a sigma_i^b; the normalizer stays N for the
  // truncated overlaps R^- (upto = N-1) and R^= (upto = N-2).
  static ReplicaPolynomial overlap(int n_spins, int arity, int a, int b, int upto);
  // sum_i t_i (sigma_i^a - sigma_i^b)
  static ReplicaPolynomial weighted_difference(const WeightVector& weights, int arity, int a, int b);

  int n_spins() const noexcept { return n_spins_; }
  int arity() const noexcept { return arity_; }
  // One past the highest replica that appears in a non-trivial factor.
  int used_replicas() const noexcept;
  std::span<const ReplicaTerm> terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  ReplicaPolynomial with_arity(int arity) const;

  ReplicaPolynomial& operator+=(const ReplicaPolynomial& other);
  ReplicaPolynomial& operator-=(const ReplicaPolynomial& other);
  ReplicaPolynomial& operator*=(double scalar);
  friend ReplicaPolynomial operator+(ReplicaPolynomial a, const ReplicaPolynomial& b) { return a += b; }
  friend ReplicaPolynomial operator-(ReplicaPolynomial a, const ReplicaPolynomial& b) { return a -= b; }
  friend ReplicaPolynomial operator*(ReplicaPolynomial a, double s) { return a *= s; }
  friend ReplicaPolynomial operator*(double s, ReplicaPolynomial a) { return a *= s; }
  friend ReplicaPolynomial operator*(const ReplicaPolynomial& a, const ReplicaPolynomial& b);
  ReplicaPolynomial pow(int exponent) const;

  // sum over terms of coeff * prod_l correlators[masks[l]], where
  // correlators[A] = <prod_{i in A} sigma_i> under one Gibbs measure.
  double expectation(std::span<const double> correlators) const;

  // Direct evaluation on explicit replicas (brute-force oracles).
  double evaluate(std::span<const ConfigCode> replicas) const;

 private:
  void canonicalize();

  int n_spins_;
  int arity_;
  std::vector<ReplicaTerm> terms_;
};

}  // namespace skclt
