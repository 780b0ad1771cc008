#include "skclt_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "skclt/clt.hpp"
#include "skclt/error.hpp"
#include "skclt/interpolation.hpp"
#include "skclt/mcmc.hpp"
#include "skclt/qsolver.hpp"
#include "skclt/random.hpp"
#include "skclt_cli/output.hpp"

namespace skclt::cli {

using nlohmann::ordered_json;

namespace {

ordered_json estimate_json(const Estimate& e) {
  return ordered_json{{"value", e.value}, {"stderr", e.stderr_}, {"n_samples", e.n_samples}};
}

int require_single_n(const ExperimentConfig& c, int fallback = 0) {
  const auto sizes = c.sizes();
  if (sizes.empty()) {
    if (fallback > 0) return fallback;
    throw InvalidArgument("config needs N");
  }
  return sizes.front();
}

std::vector<int> require_sizes(const ExperimentConfig& c) {
  const auto sizes = c.sizes();
  if (sizes.empty()) throw InvalidArgument("config needs N or N_list");
  return sizes;
}

// Collects CSV into a buffer, then writes CSV and metadata in one go so a
// failing run leaves no partial artifacts behind.
class Artifacts {
 public:
  Artifacts(const std::string& command, const ExperimentConfig& c, RunContext& ctx) : c_(c), ctx_(ctx) {
    meta_["command"] = command;
    meta_["seed"] = c.seed;
    meta_["seed_source"] = ctx.seed_from_env ? "SKCLT_SEED" : "config";
    meta_["generator_version"] = std::string(kGeneratorVersion);
    meta_["engine"] = to_string(c.engine);
    meta_["build_tag"] = ctx.build_tag;
    meta_["M"] = c.m;
    meta_["config"] = serialize_config(c);
  }

  std::ostream& csv() { return csv_; }
  ordered_json& summary() { return meta_["summary"]; }
  ordered_json& meta() { return meta_; }

  void flush() {
    meta_["timestamp"] = ctx_.timestamp;
    if (c_.csv.empty()) {
      *ctx_.out << csv_.str();
    } else {
      std::ofstream f(c_.csv, std::ios::binary);
      if (!f) throw InvalidArgument("cannot open csv output '" + c_.csv + "'");
      f << csv_.str();
    }
    const std::string path = !c_.json.empty() ? c_.json : (!c_.csv.empty() ? c_.csv + ".json" : std::string());
    if (path.empty()) {
      *ctx_.err << meta_.dump() << '\n';
    } else {
      std::ofstream f(path, std::ios::binary);
      if (!f) throw InvalidArgument("cannot open json output '" + path + "'");
      f << meta_.dump(2) << '\n';
    }
  }

 private:
  const ExperimentConfig& c_;
  RunContext& ctx_;
  std::ostringstream csv_;
  ordered_json meta_;
};

void cmd_solve_q(const ExperimentConfig& c, Artifacts& art) {
  const QSolution s = solve_q(c.beta, c.h);
  CsvWriter w(art.csv(), {"beta", "h", "q", "residual", "iterations", "nodes"});
  w.cell(c.beta).cell(c.h).cell(s.q).cell(s.residual).cell(s.iterations).cell(s.quadrature_nodes).end_row();
  art.summary() = {{"q", s.q}, {"residual", s.residual}, {"iterations", s.iterations}};
}

void cmd_simulate(const ExperimentConfig& c, Artifacts& art) {
  const double q = solve_q(c.beta, c.h).q;
  const DisorderPlan plan = c.disorder_plan();
  CsvWriter w(art.csv(), {"N", "disorder", "seed", "x_mean", "y2", "y4", "overlap2", "centered_overlap2"});
  const DisorderObservable obs[] = {observables::x_mean(), observables::y_moment(2), observables::y_moment(4),
                                    observables::overlap_moment(2), observables::centered_overlap(q, 2)};
  ordered_json per_n = ordered_json::array();
  for (int n : require_sizes(c)) {
    const ModelParams params{c.beta, c.h, n};
    params.validate(c.beta_ceiling);
    const DisorderSeries series = evaluate_disorders(params, c.weights_for(n), plan, obs);
    for (long m = 0; m < plan.n_disorders; ++m) {
      w.cell(n).cell(m).cell(static_cast<unsigned long long>(disorder_seed(plan, m)));
      for (const auto& col : series.values) w.cell(col[static_cast<std::size_t>(m)]);
      w.end_row();
    }
    per_n.push_back({{"N", n},
                     {"x_mean", estimate_json(series.estimate(0))},
                     {"y2", estimate_json(series.estimate(1))},
                     {"y4", estimate_json(series.estimate(2))},
                     {"overlap2", estimate_json(series.estimate(3))},
                     {"centered_overlap2", estimate_json(series.estimate(4))}});
  }
  art.summary() = {{"q", q}, {"sizes", per_n}};
}

void cmd_mcmc(const ExperimentConfig& c, Artifacts& art) {
  const int n = require_single_n(c);
  const ModelParams params{c.beta, c.h, n};
  params.validate(c.beta_ceiling);
  const DisorderPlan plan = c.disorder_plan();
  const Disorder disorder = sample_disorder(disorder_seed(plan, 0), n);
  const WeightVector weights = c.weights_for(n);
  const McmcSchedule schedule{c.sweeps, c.burn_in, c.thin};
  const ReplicaPairSeries run = run_replica_pair(params, disorder, weights, schedule, derive_seed(c.seed, 1), c.rule);
  CsvWriter w(art.csv(), {"sweep", "value"});
  for (std::size_t i = 0; i < run.y.values.size(); ++i) w.cell(run.y.sweep[i]).cell(run.y.values[i]).end_row();

  std::vector<double> y2(run.y.values.size()), r2(run.overlap.values.size());
  std::transform(run.y.values.begin(), run.y.values.end(), y2.begin(), [](double v) { return v * v; });
  std::transform(run.overlap.values.begin(), run.overlap.values.end(), r2.begin(), [](double v) { return v * v; });
  auto bm = [&](const std::vector<double>& s) {
    const BatchMeans b = batch_means(s, c.batches);
    ordered_json j = estimate_json(b.estimate);
    j["stability_ratio"] = b.stability_ratio;
    j["batch_length"] = b.batch_length;
    return j;
  };
  art.summary() = {{"N", n},
                   {"value", "Y = X(replica 1) - X(replica 2)"},
                   {"rule", to_string(c.rule)},
                   {"disorder_seed", disorder.seed()},
                   {"x_mean", bm(run.x.values)},
                   {"y2", bm(y2)},
                   {"overlap2", bm(r2)}};
  if (n <= 16) {
    const GibbsTable table = exact_gibbs(params, disorder);
    const MomentVector x = x_moments(table, weights, 2);
    art.summary()["exact"] = {{"x_mean", x.mean()},
                              {"y2", y_moments(x, 2)[2]},
                              {"overlap2", overlap_moment(table, 2)}};
  }
}

void cmd_check_derivative(const ExperimentConfig& c, Artifacts& art) {
  const int n = require_single_n(c, 3);
  const ModelParams params{c.beta, c.h, n};
  params.validate(c.beta_ceiling);
  const double q = solve_q(c.beta, c.h).q;
  const WeightVector weights = c.weights_for(n);
  std::vector<ReplicaObservable> obs;
  for (const auto& name : c.observables.empty() ? observable_catalog() : c.observables) {
    obs.push_back(make_observable(name, weights, q));
  }
  const auto t_grid = c.t_values();
  const auto checks = check_derivatives(obs, c.path, t_grid, params, q, c.expectation_plan());
  CsvWriter w(art.csv(), {"observable", "t", "nu", "nu_se", "finite_difference", "finite_difference_se",
                          "richardson", "analytic", "analytic_se", "part_i", "part_ii", "part_iii", "difference",
                          "difference_se"});
  double worst = 0.0;
  for (const auto& k : checks) {
    w.cell(k.observable).cell(k.t).cell(k.nu.value).cell(k.nu.stderr_).cell(k.finite_difference.value);
    w.cell(k.finite_difference.stderr_).cell(k.richardson.value).cell(k.analytic.total.value);
    w.cell(k.analytic.total.stderr_).cell(k.analytic.part_i.value).cell(k.analytic.part_ii.value);
    w.cell(k.analytic.part_iii.value).cell(k.difference.value).cell(k.difference.stderr_).end_row();
    worst = std::max(worst, std::abs(k.difference.value));
  }
  art.meta()["engine"] = "path-" + to_string(c.expectation_plan().kind);
  art.summary() = {{"N", n}, {"q", q}, {"path", to_string(c.path)}, {"max_abs_difference", worst}};
}

const std::vector<std::string> kCltColumns = {"N",   "profile", "k_spec", "max_t", "lhs",  "lhs_se",
                                              "rhs", "rhs_se",  "delta",  "delta_se", "ratio"};

void cmd_clt_report(const ExperimentConfig& c, Artifacts& art) {
  const DisorderPlan plan = c.disorder_plan();
  CsvWriter w(art.csv(), kCltColumns);
  ordered_json rows = ordered_json::array();
  for (int n : require_sizes(c)) {
    const ModelParams params{c.beta, c.h, n};
    params.validate(c.beta_ceiling);
    const WeightVector weights = c.weights_for(n);
    for (const auto& spec : c.replica_specs()) {
      const CltReport r = clt_discrepancy(spec, params, weights, plan, c.rhs);
      w.cell(n).cell(to_string(r.profile)).cell(spec.label()).cell(r.max_t).cell(r.lhs.value).cell(r.lhs.stderr_);
      w.cell(r.rhs.value).cell(r.rhs.stderr_).cell(r.delta.value).cell(r.delta.stderr_).cell(r.ratio()).end_row();
      ordered_json row = {{"N", n}, {"k_spec", spec.label()}, {"rhs_alternate", r.rhs_alternate},
                          {"short_circuit", r.short_circuit}};
      if (!spec.has_odd()) row["clt2"] = estimate_json(clt2_discrepancy(spec, params, weights, plan));
      rows.push_back(row);
    }
  }
  art.summary() = {{"rhs_reading", to_string(c.rhs)}, {"rows", rows}};
}

void cmd_sweep(const ExperimentConfig& c, Artifacts& art) {
  const DisorderPlan plan = c.disorder_plan();
  const auto sizes = require_sizes(c);
  if (c.profile == WeightProfile::explicit_values) throw InvalidArgument("sweep needs a generated weight profile");
  for (int n : sizes) ModelParams{c.beta, c.h, n}.validate(c.beta_ceiling);
  CsvWriter w(art.csv(), {"N", "profile", "k_spec", "max_t", "delta", "delta_se", "ratio", "rhs", "rhs_alternate",
                          "reading_difference"});
  ordered_json fits = ordered_json::array();
  for (const auto& spec : c.replica_specs()) {
    const SweepTable table = scaling_sweep(spec, c.beta, c.h, sizes, c.profile, plan, c.alpha, c.rhs);
    for (const auto& row : table.rows) {
      const CltReport& r = row.report;
      w.cell(r.n_spins).cell(to_string(r.profile)).cell(spec.label()).cell(r.max_t).cell(r.delta.value);
      w.cell(r.delta.stderr_).cell(r.ratio()).cell(r.rhs.value).cell(r.rhs_alternate).cell(row.reading_difference);
      w.end_row();
    }
    ordered_json fit = {{"k_spec", spec.label()}, {"fit_valid", table.fit_valid}};
    if (table.fit_valid) {
      fit["slope"] = table.fit.slope;
      fit["slope_stderr"] = table.fit.slope_stderr;
      fit["intercept"] = table.fit.intercept;
    }
    fits.push_back(fit);
  }
  art.summary() = {{"rhs_reading", to_string(c.rhs)}, {"fits", fits}};
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"solve-q", "simulate", "mcmc", "check-derivative", "clt-report",
                                                 "sweep"};
  return names;
}

void run(const std::string& subcommand, const ExperimentConfig& config, RunContext& ctx) {
  Artifacts art(subcommand, config, ctx);
  if (subcommand == "solve-q") cmd_solve_q(config, art);
  else if (subcommand == "simulate") cmd_simulate(config, art);
  else if (subcommand == "mcmc") cmd_mcmc(config, art);
  else if (subcommand == "check-derivative") cmd_check_derivative(config, art);
  else if (subcommand == "clt-report") cmd_clt_report(config, art);
  else if (subcommand == "sweep") cmd_sweep(config, art);
  else throw InvalidArgument("unknown subcommand '" + subcommand + "'");
  art.flush();
}

std::string error_json(const std::exception& error) {
  ordered_json j;
  if (const auto* e = dynamic_cast<const Error*>(&error)) {
    j["code"] = e->code();
    j["message"] = e->what();
    if (const auto* cfg = dynamic_cast<const ConfigError*>(e)) j["violations"] = cfg->violations();
    if (const auto* cap = dynamic_cast<const CapacityError*>(e)) {
      j["requested"] = cap->requested();
      j["ceiling"] = cap->ceiling();
    }
    if (const auto* conv = dynamic_cast<const ConvergenceError*>(e)) {
      j["last_iterate"] = conv->last_iterate();
      j["iterations"] = conv->iterations();
    }
    if (const auto* dis = dynamic_cast<const DisorderEvaluationError*>(e)) j["disorder_index"] = dis->index();
  } else {
    j["code"] = "internal";
    j["message"] = error.what();
  }
  return ordered_json{{"error", j}}.dump();
}

}  // namespace skclt::cli
