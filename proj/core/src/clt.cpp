#include "skclt/clt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "skclt/error.hpp"

namespace skclt {

double gaussian_moment(int l) {
  if (l < 0) throw InvalidArgument("gaussian_moment needs l >= 0");
  if (l % 2 == 1) return 0.0;
  double a = 1.0;
  for (int j = 2; j <= l; j += 2) a *= j - 1;
  return a;
}

GaussianMoments::GaussianMoments(int l_max) {
  if (l_max < 1) throw InvalidArgument("GaussianMoments needs l_max >= 1");
  a.assign(static_cast<std::size_t>(l_max) + 1, 0.0);
  a[0] = 1.0;
  a[1] = 0.0;
  for (int l = 2; l <= l_max; ++l) a[static_cast<std::size_t>(l)] = (l - 1) * a[static_cast<std::size_t>(l - 2)];
}

double GaussianMoments::product(const ReplicaSpec& spec) const {
  double p = 1.0;
  for (int k : spec.exponents) p *= (*this)(k);
  return p;
}

std::string to_string(RhsReading reading) {
  return reading == RhsReading::power_inside ? "power-inside" : "power-outside";
}

RhsReading parse_rhs_reading(const std::string& name) {
  if (name == "power-inside") return RhsReading::power_inside;
  if (name == "power-outside") return RhsReading::power_outside;
  throw InvalidArgument("unknown rhs reading '" + name + "' (expected power-inside or power-outside)");
}

namespace {

void check_spec(const ReplicaSpec& spec, const DisorderPlan& plan) {
  if (spec.exponents.empty()) throw InvalidArgument("replica spec is empty");
  for (int k : spec.exponents) {
    if (k < 0) throw InvalidArgument("replica spec exponents must be >= 0");
  }
  if (spec.max_exponent() > plan.moment_order || spec.total() > plan.moment_order) {
    throw InvalidArgument("replica spec exceeds the plan moment order " + std::to_string(plan.moment_order));
  }
}

}  // namespace

CltReport clt_discrepancy(const ReplicaSpec& spec, const ModelParams& params, const WeightVector& weights,
                          const DisorderPlan& plan, RhsReading reading) {
  check_spec(spec, plan);
  CltReport report;
  report.spec = spec;
  report.n_spins = params.n_spins;
  report.profile = weights.profile();
  report.reading = reading;
  report.engine = plan.engine;
  report.n_disorders = plan.n_disorders;
  report.base_seed = plan.base_seed;
  report.max_t = weights.max_abs();
  for (Estimate* e : {&report.lhs, &report.rhs, &report.delta}) {
    e->n_samples = plan.n_disorders;
    e->seed = plan.base_seed;
  }
  if (spec.has_odd()) {
    // Y is symmetric, so every odd factor vanishes; so does a(odd).
    report.short_circuit = true;
    return report;
  }

  const double gauss = GaussianMoments(std::max(spec.max_exponent(), 2)).product(spec);
  const double half = spec.total() / 2.0;
  const DisorderObservable obs[] = {observables::replica_product(spec), observables::y_moment(2)};
  const DisorderSeries series = evaluate_disorders(params, weights, plan, obs);
  const auto& lhs = series.values[0];
  const auto& y2 = series.values[1];
  const std::size_t m = lhs.size();

  std::vector<double> inside(m);
  for (std::size_t i = 0; i < m; ++i) inside[i] = gauss * std::pow(y2[i], half);
  report.lhs = mean_estimate(lhs, plan.base_seed);
  const Estimate inside_est = mean_estimate(inside, plan.base_seed);
  const Estimate y2_est = mean_estimate(y2, plan.base_seed);
  const double outside_value = gauss * std::pow(y2_est.value, half);

  std::vector<double> diff(m);
  if (reading == RhsReading::power_inside) {
    report.rhs = inside_est;
    report.rhs_alternate = outside_value;
    for (std::size_t i = 0; i < m; ++i) diff[i] = lhs[i] - inside[i];
  } else {
    // Delta method around the disorder mean of <S_1^2>.
    const double slope = gauss * half * std::pow(y2_est.value, half - 1.0);
    report.rhs = Estimate{outside_value, std::abs(slope) * y2_est.stderr_, plan.n_disorders, plan.base_seed};
    report.rhs_alternate = inside_est.value;
    for (std::size_t i = 0; i < m; ++i) diff[i] = lhs[i] - slope * (y2[i] - y2_est.value);
  }
  const Estimate d = mean_estimate(diff, plan.base_seed);
  report.delta = Estimate{std::abs(report.lhs.value - report.rhs.value), d.stderr_, plan.n_disorders, plan.base_seed};
  return report;
}

Estimate clt2_discrepancy(const ReplicaSpec& spec, const ModelParams& params, const WeightVector& weights,
                          const DisorderPlan& plan) {
  check_spec(spec, plan);
  const double gauss = GaussianMoments(std::max(spec.max_exponent(), 2)).product(spec);
  const double half = spec.total() / 2.0;
  const DisorderObservable a = observables::replica_product(spec);
  const DisorderObservable b = [gauss, half](const DisorderSummary& s) { return gauss * std::pow(s.y.at(2), half); };
  return nu_disorder_variance(a, b, params, weights, plan);
}

WeightVector make_weights(WeightProfile profile, int n_spins, double alpha) {
  switch (profile) {
    case WeightProfile::uniform:
      return WeightVector::uniform(n_spins);
    case WeightProfile::one_hot:
      return WeightVector::one_hot(n_spins);
    case WeightProfile::power_law:
      return WeightVector::power_law(n_spins, alpha);
    case WeightProfile::explicit_values:
      break;
  }
  throw InvalidArgument("explicit weights cannot be generated for a size sweep");
}

SweepTable scaling_sweep(const ReplicaSpec& spec, double beta, double h, std::span<const int> n_list,
                         WeightProfile profile, const DisorderPlan& plan, double alpha, RhsReading reading) {
  if (n_list.empty()) throw InvalidArgument("sweep needs at least one N");
  SweepTable table;
  for (int n : n_list) {
    const ModelParams params{beta, h, n};
    SweepRow row;
    row.report = clt_discrepancy(spec, params, make_weights(profile, n, alpha), plan, reading);
    row.reading_difference = row.report.rhs.value - row.report.rhs_alternate;
    table.rows.push_back(std::move(row));
  }
  std::vector<double> lx, ly;
  for (const auto& row : table.rows) {
    if (!(row.report.delta.value > 0.0)) break;
    lx.push_back(std::log(row.report.max_t));
    ly.push_back(std::log(row.report.delta.value));
  }
  const bool varies = lx.size() == table.rows.size() && lx.size() >= 2 &&
                      std::any_of(lx.begin(), lx.end(), [&](double v) { return v != lx.front(); });
  if (varies) {
    table.fit = fit_line(lx, ly);
    table.fit_valid = true;
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    table.fit = LinearFit{nan, nan, nan, nan};
  }
  return table;
}

namespace {

// Merges atoms closer than tol (values sorted).
void merge_atoms(std::vector<std::pair<double, double>>& atoms, double tol) {
  std::sort(atoms.begin(), atoms.end());
  std::size_t out = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (out > 0 && atoms[i].first - atoms[out - 1].first <= tol) {
      atoms[out - 1].second += atoms[i].second;
    } else {
      atoms[out++] = atoms[i];
    }
  }
  atoms.resize(out);
}

double ks_against_normal(std::span<const double> atoms, std::span<const double> masses, double sd) {
  double cdf = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double phi = normal_cdf(atoms[i] / sd);
    worst = std::max(worst, std::abs(phi - cdf));
    cdf += masses[i];
    worst = std::max(worst, std::abs(phi - cdf));
  }
  return worst;
}

}  // namespace

YDiagnostics y_distribution_diagnostics(const ModelParams& params, const WeightVector& weights, const Disorder& disorder,
                                        Engine engine, const McmcSettings& mcmc, std::uint64_t seed) {
  params.validate();
  if (weights.size() != params.n_spins) throw DimensionError("weight vector length differs from N");
  YDiagnostics out;
  out.engine = engine;
  out.n_spins = params.n_spins;

  if (engine == Engine::mcmc) {
    const ReplicaPairSeries run = run_replica_pair(params, disorder, weights, mcmc.schedule, seed, mcmc.rule);
    std::vector<double> ys = run.y.values;
    std::sort(ys.begin(), ys.end());
    const double n = static_cast<double>(ys.size());
    for (double y : ys) {
      out.y2 += y * y;
      out.y4 += y * y * y * y;
    }
    out.y2 /= n;
    out.y4 /= n;
    out.n_samples = static_cast<long>(ys.size());
    if (out.y2 > 0.0) {
      out.excess_kurtosis = out.y4 / (out.y2 * out.y2) - 3.0;
      std::vector<double> masses(ys.size(), 1.0 / n);
      out.ks_distance = ks_against_normal(ys, masses, std::sqrt(out.y2));
    }
    return out;
  }

  if (params.n_spins > kYLawCeiling) {
    throw CapacityError("exact Y law limited to N <= " + std::to_string(kYLawCeiling), params.n_spins, kYLawCeiling);
  }
  const GibbsTable table = exact_gibbs(params, disorder);
  const double tol = 1e-12;
  std::vector<std::pair<double, double>> x_atoms;
  x_atoms.reserve(table.size());
  for (ConfigCode c = 0; c < table.size(); ++c) {
    double x = 0.0;
    for (int i = 0; i < params.n_spins; ++i) x += weights[i] * spin_of(c, i);
    x_atoms.emplace_back(x, table.prob(c));
  }
  merge_atoms(x_atoms, tol);
  const std::size_t pairs = x_atoms.size() * x_atoms.size();
  if (pairs > kYAtomCeiling) {
    throw CapacityError("Y law has too many atoms for these weights", params.n_spins, kYLawCeiling);
  }
  std::vector<std::pair<double, double>> y_atoms;
  y_atoms.reserve(pairs);
  for (const auto& [x1, p1] : x_atoms) {
    for (const auto& [x2, p2] : x_atoms) y_atoms.emplace_back(x1 - x2, p1 * p2);
  }
  merge_atoms(y_atoms, tol);
  for (const auto& [y, p] : y_atoms) {
    out.atoms.push_back(y);
    out.masses.push_back(p);
  }
  const std::vector<double> ym = y_moments(x_moments(table, weights, 4), 4);
  out.y2 = ym[2];
  out.y4 = ym[4];
  if (out.y2 > 0.0) {
    out.excess_kurtosis = out.y4 / (out.y2 * out.y2) - 3.0;
    out.ks_distance = ks_against_normal(out.atoms, out.masses, std::sqrt(out.y2));
  }
  return out;
}

}  // namespace skclt
