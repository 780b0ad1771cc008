#include "skclt/mcmc.hpp"

#include <algorithm>
#include <cmath>

#include "skclt/error.hpp"

namespace skclt {

std::string to_string(UpdateRule rule) { return rule == UpdateRule::heat_bath ? "heat-bath" : "metropolis"; }

UpdateRule parse_update_rule(const std::string& name) {
  if (name == "heat-bath") return UpdateRule::heat_bath;
  if (name == "metropolis") return UpdateRule::metropolis;
  throw InvalidArgument("unknown update rule '" + name + "'");
}

DenseModel::DenseModel(const IsingForm& form) : n_spins(form.n_spins), field(form.field) {
  const auto n = static_cast<std::size_t>(n_spins);
  coupling.assign(n * n, 0.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      coupling[i * n + j] = form.pair[k];
      coupling[j * n + i] = form.pair[k];
    }
  }
}

ChainState::ChainState(const DenseModel& model, std::uint64_t seed) : rng_(seed) {
  spins_.resize(static_cast<std::size_t>(model.n_spins));
  for (int& s : spins_) s = rng_.uniform() < 0.5 ? -1 : 1;
  fields_ = recompute(model);
}

ChainState::ChainState(const DenseModel& model, std::vector<int> spins, std::uint64_t seed)
    : spins_(std::move(spins)), rng_(seed) {
  if (static_cast<int>(spins_.size()) != model.n_spins) throw DimensionError("initial configuration length differs from N");
  fields_ = recompute(model);
}

std::vector<double> ChainState::recompute(const DenseModel& model) const {
  const int n = model.n_spins;
  std::vector<double> f(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double acc = model.field[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) acc += model.at(i, j) * spins_[static_cast<std::size_t>(j)];
    f[static_cast<std::size_t>(i)] = acc;
  }
  return f;
}

double ChainState::cache_error(const DenseModel& model) const {
  const auto fresh = recompute(model);
  double err = 0.0;
  for (std::size_t i = 0; i < fresh.size(); ++i) err = std::max(err, std::abs(fresh[i] - fields_[i]));
  return err;
}

void ChainState::verify_and_refresh(const DenseModel& model) {
  const auto fresh = recompute(model);
  double err = 0.0;
  for (std::size_t i = 0; i < fresh.size(); ++i) err = std::max(err, std::abs(fresh[i] - fields_[i]));
  if (err > kIntegrityTolerance) {
    throw IntegrityError("local-field cache diverged by " + std::to_string(err) + " after " +
                         std::to_string(sweeps_) + " sweeps");
  }
  fields_ = fresh;
}

void glauber_sweep(ChainState& state, const DenseModel& model, UpdateRule rule) {
  const int n = model.n_spins;
  if (state.n_spins() != n) throw DimensionError("chain and model sizes differ");
  for (int i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const int old = state.spins_[ii];
    const double local = state.fields_[ii];
    int next = old;
    const double u = state.rng_.uniform();
    if (rule == UpdateRule::heat_bath) {
      // P(sigma_i = +1 | rest) = 1 / (1 + exp(-2 local))
      next = u * (1.0 + std::exp(-2.0 * local)) < 1.0 ? 1 : -1;
    } else {
      // flipping changes the exponent by -2 sigma_i local
      const double delta = -2.0 * old * local;
      if (delta >= 0.0 || u < std::exp(delta)) next = -old;
    }
    if (next != old) {
      state.spins_[ii] = next;
      const double change = 2.0 * next;
      const double* row = &model.coupling[ii * static_cast<std::size_t>(n)];
      for (int j = 0; j < n; ++j) state.fields_[static_cast<std::size_t>(j)] += change * row[j];
    }
  }
  ++state.sweeps_;
  if (state.sweeps_ % ChainState::kCheckInterval == 0) state.verify_and_refresh(model);
}

std::vector<double> single_site_kernel(const IsingForm& form, int site, UpdateRule rule) {
  const int n = form.n_spins;
  if (n > 10) throw CapacityError("explicit kernels are limited to N <= 10", n, 10);
  if (site < 0 || site >= n) throw DimensionError("site out of range");
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> kernel(size * size, 0.0);
  const ConfigCode bit = ConfigCode{1} << site;
  for (std::size_t c = 0; c < size; ++c) {
    const auto code = static_cast<ConfigCode>(c);
    const double here = form.evaluate(code);
    const double there = form.evaluate(code ^ bit);
    double move;
    if (rule == UpdateRule::heat_bath) {
      move = 1.0 / (1.0 + std::exp(here - there));
    } else {
      move = std::min(1.0, std::exp(there - here));
    }
    kernel[c * size + (code ^ bit)] = move;
    kernel[c * size + c] = 1.0 - move;
  }
  return kernel;
}

void McmcSchedule::validate() const {
  if (sweeps <= 0 || burn_in < 0 || thin < 1) throw InvalidArgument("schedule needs sweeps > 0, burn_in >= 0, thin >= 1");
  if (sweeps <= burn_in) throw InvalidArgument("schedule needs sweeps > burn_in");
  if (measurements() < 1) throw InvalidArgument("schedule yields no measurements");
}

namespace {

double weighted_sum(const std::vector<int>& spins, const WeightVector& weights) {
  double acc = 0.0;
  for (std::size_t i = 0; i < spins.size(); ++i) acc += weights[static_cast<int>(i)] * spins[i];
  return acc;
}

}  // namespace

ReplicaPairSeries run_replica_pair(const ModelParams& params, const Disorder& disorder, const WeightVector& weights,
                                   const McmcSchedule& schedule, std::uint64_t seed, UpdateRule rule) {
  schedule.validate();
  if (weights.size() != params.n_spins) throw DimensionError("weight vector length differs from N");
  const DenseModel model(sk_form(params, disorder));
  ChainState first(model, derive_seed(seed, 0));
  ChainState second(model, derive_seed(seed, 1));
  ReplicaPairSeries out;
  for (SampleSeries* s : {&out.x, &out.x_other, &out.y, &out.overlap}) {
    s->burn_in = schedule.burn_in;
    s->thin = schedule.thin;
    s->values.reserve(static_cast<std::size_t>(schedule.measurements()));
    s->sweep.reserve(static_cast<std::size_t>(schedule.measurements()));
  }
  const double inv_n = 1.0 / params.n_spins;
  for (long sweep = 1; sweep <= schedule.sweeps; ++sweep) {
    glauber_sweep(first, model, rule);
    glauber_sweep(second, model, rule);
    if (sweep <= schedule.burn_in || (sweep - schedule.burn_in) % schedule.thin != 0) continue;
    const double x1 = weighted_sum(first.spins(), weights);
    const double x2 = weighted_sum(second.spins(), weights);
    long agree = 0;
    for (std::size_t i = 0; i < first.spins().size(); ++i) agree += first.spins()[i] * second.spins()[i];
    const double values[] = {x1, x2, x1 - x2, static_cast<double>(agree) * inv_n};
    SampleSeries* targets[] = {&out.x, &out.x_other, &out.y, &out.overlap};
    for (int k = 0; k < 4; ++k) {
      targets[k]->values.push_back(values[k]);
      targets[k]->sweep.push_back(sweep);
    }
  }
  return out;
}

namespace {

double batch_stderr(const std::vector<double>& series, long n_batches, long batch_length, double* mean_out) {
  std::vector<double> means(static_cast<std::size_t>(n_batches));
  for (long b = 0; b < n_batches; ++b) {
    const auto first = series.begin() + b * batch_length;
    means[static_cast<std::size_t>(b)] =
        pairwise_sum(std::span<const double>(&*first, static_cast<std::size_t>(batch_length))) / batch_length;
  }
  const Estimate e = mean_estimate(means);
  if (mean_out) *mean_out = e.value;
  return e.stderr_;
}

}  // namespace

BatchMeans batch_means(const std::vector<double>& series, int n_batches) {
  if (n_batches < 8) throw InvalidArgument("batch means needs at least 8 batches");
  const long length = static_cast<long>(series.size()) / n_batches;
  if (length < 2) throw InvalidArgument("series too short for " + std::to_string(n_batches) + " batches");
  BatchMeans out;
  out.batch_length = length;
  double mean = 0.0;
  const double se = batch_stderr(series, n_batches, length, &mean);
  out.estimate.value = mean;
  out.estimate.stderr_ = se;
  out.estimate.n_samples = static_cast<long>(n_batches) * length;
  const double se_long = batch_stderr(series, n_batches / 2, 2 * length, nullptr);
  out.stability_ratio = se > 0.0 ? se_long / se : 1.0;
  return out;
}

}  // namespace skclt
