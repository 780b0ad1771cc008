#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "skclt/exact.hpp"
#include "skclt/mcmc.hpp"
#include "skclt/model.hpp"
#include "skclt/statistics.hpp"

namespace skclt {

enum class Engine { exact, mcmc };

std::string to_string(Engine engine);
Engine parse_engine(const std::string& name);

struct McmcSettings {
  McmcSchedule schedule;
  UpdateRule rule = UpdateRule::heat_bath;
};

// Disorder m is sample_disorder(derive_seed(base_seed, m), N).
struct DisorderPlan {
  long n_disorders = 200;
  std::uint64_t base_seed = 1;
  Engine engine = Engine::exact;
  McmcSettings mcmc;
  int jobs = 1;
  int moment_order = kDefaultMomentOrder;
  bool keep_correlators = false;  // exact engine only; needed by polynomial observables

  void validate() const;
};

std::uint64_t disorder_seed(const DisorderPlan& plan, long index);

// Everything an observable may read for one disorder realization.
struct DisorderSummary {
  long index = 0;
  std::uint64_t seed = 0;
  int n_spins = 0;
  MomentVector x;                    // Gibbs moments of X
  std::vector<double> y;             // <Y^k>, k = 0..moment_order
  std::vector<double> overlap_law;   // P(N R_{1,2} = 2a - N), exact engine
  std::vector<double> overlap;       // <R^m>, m = 0..moment_order
  std::vector<double> correlators;   // when requested, exact engine
};

DisorderSummary summarize_disorder(const ModelParams& params, const Disorder& disorder, const WeightVector& weights,
                                   const DisorderPlan& plan, long index);

using DisorderObservable = std::function<double(const DisorderSummary&)>;

namespace observables {

DisorderObservable constant(double value);
DisorderObservable x_mean();
DisorderObservable y_moment(int k);
// <prod_l S_l^{k_l}> = prod_l <Y^{k_l}>
DisorderObservable replica_product(const ReplicaSpec& spec);
DisorderObservable overlap_moment(int m);
// <(R_{1,2} - q)^order>
DisorderObservable centered_overlap(double q, int order);
// Exact engine with keep_correlators.
DisorderObservable polynomial(ReplicaPolynomial poly);

}  // namespace observables

// values[k][m]: observable k on disorder m.
struct DisorderSeries {
  std::vector<std::vector<double>> values;
  std::uint64_t base_seed = 0;

  Estimate estimate(std::size_t observable) const;
  // mean over m of sum_k coeff_k values[k][m]
  Estimate combine(std::span<const std::pair<std::size_t, double>> terms) const;
};

// Runs every disorder once (in parallel up to plan.jobs) and evaluates all
// observables on the shared summaries. Failures are rethrown as
// DisorderEvaluationError naming the failing index.
DisorderSeries evaluate_disorders(const ModelParams& params, const WeightVector& weights, const DisorderPlan& plan,
                                  std::span<const DisorderObservable> observables);

// nu(f) = E <f>.
Estimate nu(const DisorderObservable& observable, const ModelParams& params, const WeightVector& weights,
            const DisorderPlan& plan);

// E (<A> - <B>)^2 over disorder.
Estimate nu_disorder_variance(const DisorderObservable& a, const DisorderObservable& b, const ModelParams& params,
                              const WeightVector& weights, const DisorderPlan& plan);

struct MomentBoundRow {
  int n_spins = 0;
  int k = 0;
  Estimate overlap;  // nu((R_{1,2} - q)^{2k})
  Estimate y;        // nu(Y^{2k})
  double overlap_constant = 0.0;  // N nu(...)^{1/k} / k
  double y_constant = 0.0;        // nu(Y^{2k})^{1/k} / k
};

struct MomentBoundReport {
  std::vector<MomentBoundRow> rows;
  double overlap_fit = 0.0;   // smallest L with nu((R-q)^{2k}) <= (Lk/N)^k on the grid
  double y_fit = 0.0;         // smallest L with nu(Y^{2k}) <= (Lk)^k on the grid
  // L fitted on the first half of the N grid, then checked on the second
  // half with 3-stderr slack.
  double overlap_holdout_fit = 0.0;
  bool overlap_holdout_holds = false;
  double y_holdout_fit = 0.0;
  bool y_holdout_holds = false;
};

// orders: k values in 1..4 (moments of order 2k <= 8).
MomentBoundReport empirical_moment_bound_fit(std::span<const int> orders, double beta, double h, double q,
                                             std::span<const int> n_list,
                                             const std::function<WeightVector(int)>& weights_for_n,
                                             const DisorderPlan& plan);

}  // namespace skclt
