#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "skclt/model.hpp"
#include "skclt/replica_polynomial.hpp"
#include "skclt/statistics.hpp"

namespace skclt {

// one: decouples sigma_N. two: decouples sigma_N and sigma_{N-1}.
enum class CavityPath { one, two };

std::string to_string(CavityPath path);
CavityPath parse_cavity_path(const std::string& name);

// z1 drives sigma_N, z2 drives sigma_{N-1} (two-coordinate path only).
struct PathPoint {
  double t = 1.0;
  double z1 = 0.0;
  double z2 = 0.0;
  double q = 0.0;
};

// Quadratic form of the interpolating Hamiltonian -H_{N,t}. At t = 1 the
// form is bit-identical to sk_form.
IsingForm path_form(CavityPath path, const PathPoint& point, const ModelParams& params, const Disorder& disorder);

double path_energy_1(const PathPoint& point, const ModelParams& params, const Disorder& disorder,
                     const SpinConfig& config);
double path_energy_2(const PathPoint& point, const ModelParams& params, const Disorder& disorder,
                     const SpinConfig& config);

// Named multi-replica observable; replicas are numbered from 0.
struct ReplicaObservable {
  std::string name;
  ReplicaPolynomial poly;

  int arity() const { return poly.arity(); }
};

// Fixed catalog of observables used by the derivative checks.
std::vector<std::string> observable_catalog();
ReplicaObservable make_observable(const std::string& name, const WeightVector& weights, double q);

// How nu_t = E <f>_t is integrated over the Gaussians.
struct ExpectationPlan {
  enum class Kind { quadrature, monte_carlo };

  static constexpr int kMaxQuadratureSpins = 3;

  Kind kind = Kind::quadrature;
  int coupling_nodes = 16;  // quadrature over couplings, N <= 3
  int cavity_nodes = 16;    // Gauss-Hermite over z (or z1, z2); used by both kinds
  long n_disorders = 200;   // Monte Carlo over couplings
  std::uint64_t base_seed = 1;
  bool antithetic = false;  // pair each disorder with its negation
  int jobs = 1;
};

std::string to_string(ExpectationPlan::Kind kind);

// A set of observables evaluated at one t.
struct PathQuery {
  double t = 0.0;
  std::vector<ReplicaPolynomial> observables;
};

// Per-sample values of every (query, observable) column. Quadrature yields a
// single row holding the full weighted sum; Monte Carlo yields one row per
// disorder (or antithetic pair) so paired differences keep their common
// random numbers.
struct PathSamples {
  std::vector<std::vector<double>> rows;
  std::uint64_t seed = 0;
  bool deterministic = true;

  std::size_t columns() const { return rows.empty() ? 0 : rows.front().size(); }
  // Estimate of sum_k coeff_k * column_k.
  Estimate combine(std::span<const std::pair<std::size_t, double>> terms) const;
  Estimate column(std::size_t index) const;
};

// Columns are laid out query by query, observable by observable.
PathSamples sample_path(CavityPath path, const ModelParams& params, double q, const ExpectationPlan& plan,
                        std::span<const PathQuery> queries);

Estimate nu_t(const ReplicaPolynomial& observable, CavityPath path, double t, const ModelParams& params, double q,
              const ExpectationPlan& plan);

// The three analytic pieces of nu_t'(f); part_ii and part_iii are zero for the
// one-coordinate path.
struct DerivativePolynomials {
  ReplicaPolynomial part_i;
  ReplicaPolynomial part_ii;
  ReplicaPolynomial part_iii;
};

DerivativePolynomials derivative_polynomials(const ReplicaPolynomial& observable, CavityPath path, double beta,
                                             double q);

struct DerivativeEstimate {
  Estimate total;
  Estimate part_i;
  Estimate part_ii;
  Estimate part_iii;
};

// Throws InvalidArgument for t outside [0, 1).
DerivativeEstimate analytic_derivative_1(const ReplicaPolynomial& observable, double t, const ModelParams& params,
                                         double q, const ExpectationPlan& plan);
DerivativeEstimate analytic_derivative_2(const ReplicaPolynomial& observable, double t, const ModelParams& params,
                                         double q, const ExpectationPlan& plan);

struct DerivativeCheck {
  std::string observable;
  double t = 0.0;
  Estimate nu;
  Estimate finite_difference;  // central difference, step h
  Estimate richardson;         // (4 D(h/2) - D(h)) / 3
  DerivativeEstimate analytic;
  Estimate difference;         // finite_difference - analytic.total, paired
};

// Evaluates every observable at every t with one pass over the outer samples.
std::vector<DerivativeCheck> check_derivatives(std::span<const ReplicaObservable> observables, CavityPath path,
                                               std::span<const double> t_grid, const ModelParams& params, double q,
                                               const ExpectationPlan& plan, double step = 1e-3);

struct TaylorReport {
  int n_spins = 0;
  int order = 0;
  Estimate nu;          // nu(f) = nu_1(f)
  Estimate nu0;         // nu_0(f)
  Estimate derivative0; // nu_0'(f), order >= 1
  Estimate remainder;   // nu(f) - sum_{j <= order} nu_0^{(j)}(f) / j!
  Estimate f_squared;   // nu(f^2)
  // |remainder| / (N^{-(order+1)/2} nu(f^2)^{1/2}): the constant the bound needs.
  double bound_constant = 0.0;
};

TaylorReport taylor_remainder_check(const ReplicaPolynomial& observable, int order, CavityPath path,
                                    const ModelParams& params, double q, const ExpectationPlan& plan);

struct TaylorSweep {
  std::vector<TaylorReport> rows;
  double decay_exponent = 0.0;  // slope of log|remainder| against log N
  double fitted_constant = 0.0; // max bound_constant over the sweep
};

TaylorSweep taylor_remainder_sweep(const std::function<ReplicaPolynomial(int n_spins)>& observable_for_n, int order,
                                   CavityPath path, double beta, double h, double q,
                                   std::span<const int> n_list, const ExpectationPlan& plan);

// Two-coordinate overlap concentration chain at one N.
struct CavityOverlapReport {
  int n_spins = 0;
  Estimate nu00_trunc;  // nu_00((R^=_{1,2} - q)^2)
  Estimate nu_trunc;    // nu((R^=_{1,2} - q)^2)
  Estimate nu_full;     // nu((R_{1,2} - q)^2)
  double ratio = 0.0;   // nu00_trunc / nu_trunc
  Estimate full_minus_trunc;  // nu_full - nu_trunc, paired
};

CavityOverlapReport cavity_overlap_chain(const ModelParams& params, double q, const ExpectationPlan& plan);

}  // namespace skclt
