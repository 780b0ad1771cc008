#include "skclt/disorder_stats.hpp"

#include <algorithm>
#include <cmath>

#include "skclt/error.hpp"
#include "skclt/parallel.hpp"
#include "skclt/random.hpp"

namespace skclt {

std::string to_string(Engine engine) { return engine == Engine::exact ? "exact" : "mcmc"; }

Engine parse_engine(const std::string& name) {
  if (name == "exact") return Engine::exact;
  if (name == "mcmc") return Engine::mcmc;
  throw InvalidArgument("unknown engine '" + name + "' (expected exact or mcmc)");
}

void DisorderPlan::validate() const {
  if (n_disorders < 1) throw InvalidArgument("plan needs at least one disorder");
  if (moment_order < 4) throw InvalidArgument("plan moment order must be >= 4");
  if (engine == Engine::mcmc) {
    mcmc.schedule.validate();
    if (keep_correlators) throw InvalidArgument("correlator tables are only available from the exact engine");
  }
}

std::uint64_t disorder_seed(const DisorderPlan& plan, long index) {
  return derive_seed(plan.base_seed, static_cast<std::uint64_t>(index));
}

namespace {

std::vector<double> sample_raw_moments(std::span<const double> values, double center, int order) {
  std::vector<double> acc(static_cast<std::size_t>(order) + 1, 0.0);
  for (double v : values) {
    double p = 1.0;
    for (int m = 0; m <= order; ++m) {
      acc[static_cast<std::size_t>(m)] += p;
      p *= v - center;
    }
  }
  for (double& a : acc) a /= static_cast<double>(values.size());
  return acc;
}

DisorderSummary summarize_exact(const ModelParams& params, const Disorder& disorder, const WeightVector& weights,
                                const DisorderPlan& plan) {
  DisorderSummary s;
  const GibbsTable table = exact_gibbs(params, disorder);
  s.x = x_moments(table, weights, plan.moment_order);
  s.y = y_moments(s.x, plan.moment_order);
  s.overlap_law = overlap_distribution(table);
  s.overlap.resize(static_cast<std::size_t>(plan.moment_order) + 1);
  for (int m = 0; m <= plan.moment_order; ++m) {
    s.overlap[static_cast<std::size_t>(m)] = overlap_law_moment(s.overlap_law, 0.0, m);
  }
  if (plan.keep_correlators) s.correlators = correlators(table);
  return s;
}

DisorderSummary summarize_mcmc(const ModelParams& params, const Disorder& disorder, const WeightVector& weights,
                               const DisorderPlan& plan, std::uint64_t seed) {
  DisorderSummary s;
  const ReplicaPairSeries run =
      run_replica_pair(params, disorder, weights, plan.mcmc.schedule, derive_seed(seed, 0x6d636d63), plan.mcmc.rule);
  std::vector<double> xs(run.x.values);
  xs.insert(xs.end(), run.x_other.values.begin(), run.x_other.values.end());
  s.x.k_max = plan.moment_order;
  s.x.raw = sample_raw_moments(xs, 0.0, plan.moment_order);
  s.x.central = sample_raw_moments(xs, s.x.raw[1], plan.moment_order);
  s.x.central[1] = 0.0;
  s.y = sample_raw_moments(run.y.values, 0.0, plan.moment_order);
  s.overlap = sample_raw_moments(run.overlap.values, 0.0, plan.moment_order);
  return s;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

DisorderSummary summarize_disorder(const ModelParams& params, const Disorder& disorder, const WeightVector& weights,
                                   const DisorderPlan& plan, long index) {
  DisorderSummary s = plan.engine == Engine::exact ? summarize_exact(params, disorder, weights, plan)
                                                   : summarize_mcmc(params, disorder, weights, plan, disorder.seed());
  s.index = index;
  s.seed = disorder.seed();
  s.n_spins = params.n_spins;
  return s;
}

namespace observables {

DisorderObservable constant(double value) {
  return [value](const DisorderSummary&) { return value; };
}

DisorderObservable x_mean() {
  return [](const DisorderSummary& s) { return s.x.mean(); };
}

DisorderObservable y_moment(int k) {
  return [k](const DisorderSummary& s) { return s.y.at(static_cast<std::size_t>(k)); };
}

DisorderObservable replica_product(const ReplicaSpec& spec) {
  return [spec](const DisorderSummary& s) { return skclt::replica_product(s.y, spec); };
}

DisorderObservable overlap_moment(int m) {
  return [m](const DisorderSummary& s) { return s.overlap.at(static_cast<std::size_t>(m)); };
}

DisorderObservable centered_overlap(double q, int order) {
  return [q, order](const DisorderSummary& s) {
    if (!s.overlap_law.empty()) return overlap_law_moment(s.overlap_law, q, order);
    if (order >= static_cast<int>(s.overlap.size())) throw InvalidArgument("overlap moments do not reach the order");
    double acc = 0.0;
    for (int j = 0; j <= order; ++j) {
      acc += binomial(order, j) * std::pow(-q, order - j) * s.overlap[static_cast<std::size_t>(j)];
    }
    return acc;
  };
}

DisorderObservable polynomial(ReplicaPolynomial poly) {
  return [poly = std::move(poly)](const DisorderSummary& s) {
    if (s.correlators.empty()) throw InvalidArgument("polynomial observables need keep_correlators on the exact engine");
    return poly.expectation(s.correlators);
  };
}

}  // namespace observables

Estimate DisorderSeries::estimate(std::size_t observable) const {
  return mean_estimate(values.at(observable), base_seed);
}

Estimate DisorderSeries::combine(std::span<const std::pair<std::size_t, double>> terms) const {
  if (values.empty()) return {};
  std::vector<double> combined(values.front().size(), 0.0);
  for (std::size_t m = 0; m < combined.size(); ++m) {
    double acc = 0.0;
    for (const auto& [k, coeff] : terms) acc += coeff * values.at(k)[m];
    combined[m] = acc;
  }
  return mean_estimate(combined, base_seed);
}

DisorderSeries evaluate_disorders(const ModelParams& params, const WeightVector& weights, const DisorderPlan& plan,
                                  std::span<const DisorderObservable> observables) {
  plan.validate();
  params.validate();
  if (weights.size() != params.n_spins) throw DimensionError("weight vector length differs from N");
  DisorderSeries series;
  series.base_seed = plan.base_seed;
  series.values.assign(observables.size(), std::vector<double>(static_cast<std::size_t>(plan.n_disorders), 0.0));
  parallel_for(plan.n_disorders, plan.jobs, [&](long m) {
    try {
      const Disorder disorder = sample_disorder(disorder_seed(plan, m), params.n_spins);
      const DisorderSummary summary = summarize_disorder(params, disorder, weights, plan, m);
      for (std::size_t k = 0; k < observables.size(); ++k) {
        series.values[k][static_cast<std::size_t>(m)] = observables[k](summary);
      }
    } catch (const Error& e) {
      throw DisorderEvaluationError(e.code(), "disorder " + std::to_string(m) + ": " + e.what(), m);
    }
  });
  return series;
}

Estimate nu(const DisorderObservable& observable, const ModelParams& params, const WeightVector& weights,
            const DisorderPlan& plan) {
  return evaluate_disorders(params, weights, plan, std::span(&observable, 1)).estimate(0);
}

Estimate nu_disorder_variance(const DisorderObservable& a, const DisorderObservable& b, const ModelParams& params,
                              const WeightVector& weights, const DisorderPlan& plan) {
  const DisorderObservable both[] = {a, b};
  const DisorderSeries series = evaluate_disorders(params, weights, plan, both);
  std::vector<double> sq(series.values[0].size());
  for (std::size_t m = 0; m < sq.size(); ++m) {
    const double d = series.values[0][m] - series.values[1][m];
    sq[m] = d * d;
  }
  return mean_estimate(sq, plan.base_seed);
}

MomentBoundReport empirical_moment_bound_fit(std::span<const int> orders, double beta, double h, double q,
                                             std::span<const int> n_list,
                                             const std::function<WeightVector(int)>& weights_for_n,
                                             const DisorderPlan& plan) {
  for (int k : orders) {
    if (k < 1 || 2 * k > plan.moment_order) throw InvalidArgument("moment bound orders need 1 <= 2k <= moment order");
  }
  if (plan.engine != Engine::exact) throw InvalidArgument("moment bound fits use the exact engine");
  MomentBoundReport report;
  for (int n : n_list) {
    const ModelParams params{beta, h, n};
    std::vector<DisorderObservable> obs;
    for (int k : orders) {
      obs.push_back(observables::centered_overlap(q, 2 * k));
      obs.push_back(observables::y_moment(2 * k));
    }
    const DisorderSeries series = evaluate_disorders(params, weights_for_n(n), plan, obs);
    for (std::size_t i = 0; i < orders.size(); ++i) {
      MomentBoundRow row;
      row.n_spins = n;
      row.k = orders[i];
      row.overlap = series.estimate(2 * i);
      row.y = series.estimate(2 * i + 1);
      row.overlap_constant = n * std::pow(std::max(row.overlap.value, 0.0), 1.0 / row.k) / row.k;
      row.y_constant = std::pow(std::max(row.y.value, 0.0), 1.0 / row.k) / row.k;
      report.rows.push_back(row);
    }
  }
  const std::size_t split = (n_list.size() + 1) / 2;
  auto in_fit_half = [&](const MomentBoundRow& row) {
    return std::find(n_list.begin(), n_list.begin() + static_cast<long>(split), row.n_spins) !=
           n_list.begin() + static_cast<long>(split);
  };
  for (const auto& row : report.rows) {
    report.overlap_fit = std::max(report.overlap_fit, row.overlap_constant);
    report.y_fit = std::max(report.y_fit, row.y_constant);
    if (in_fit_half(row)) {
      report.overlap_holdout_fit = std::max(report.overlap_holdout_fit, row.overlap_constant);
      report.y_holdout_fit = std::max(report.y_holdout_fit, row.y_constant);
    }
  }
  report.overlap_holdout_holds = true;
  report.y_holdout_holds = true;
  for (const auto& row : report.rows) {
    if (in_fit_half(row)) continue;
    const double k = row.k;
    const double overlap_bound = std::pow(report.overlap_holdout_fit * k / row.n_spins, k);
    const double y_bound = std::pow(report.y_holdout_fit * k, k);
    // relative slack so an exact tie (zero stderr at beta = 0) is not lost to rounding
    if (row.overlap.value > overlap_bound * (1 + 1e-9) + 3.0 * row.overlap.stderr_) report.overlap_holdout_holds = false;
    if (row.y.value > y_bound * (1 + 1e-9) + 3.0 * row.y.stderr_) report.y_holdout_holds = false;
  }
  return report;
}

}  // namespace skclt
