#include "skclt/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skclt/error.hpp"
#include "skclt/random.hpp"
#include "skclt/statistics.hpp"

namespace skclt {

void ModelParams::validate(double beta_ceiling) const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be a finite value >= 0");
  if (!(h >= 0.0) || !std::isfinite(h)) throw InvalidArgument("h must be a finite value >= 0");
  if (n_spins < 1) throw InvalidArgument("n_spins must be >= 1");
  if (beta > beta_ceiling) {
    std::ostringstream msg;
    msg << "beta = " << beta << " exceeds the high-temperature ceiling " << beta_ceiling;
    throw InvalidArgument(msg.str());
  }
}

Disorder::Disorder(int n_spins, std::vector<double> couplings, std::uint64_t seed)
    : n_spins_(n_spins), seed_(seed), couplings_(std::move(couplings)) {
  if (n_spins < 1) throw InvalidArgument("disorder needs n_spins >= 1");
  if (couplings_.size() != pair_count(n_spins)) {
    throw DimensionError("disorder for N = " + std::to_string(n_spins) + " needs " +
                         std::to_string(pair_count(n_spins)) + " couplings, got " +
                         std::to_string(couplings_.size()));
  }
}

std::size_t Disorder::pair_index(int n, int i, int j) {
  // row i holds j = i+1 .. n-1
  const auto ii = static_cast<std::size_t>(i);
  return ii * static_cast<std::size_t>(n) - ii * (ii + 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

double Disorder::coupling(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= n_spins_ || j >= n_spins_) {
    throw DimensionError("coupling index out of range");
  }
  if (i > j) std::swap(i, j);
  return couplings_[pair_index(n_spins_, i, j)];
}

Disorder Disorder::negated() const {
  std::vector<double> g(couplings_.size());
  std::transform(couplings_.begin(), couplings_.end(), g.begin(), [](double v) { return -v; });
  return Disorder(n_spins_, std::move(g), seed_);
}

Disorder sample_disorder(std::uint64_t seed, int n_spins) {
  if (n_spins < 1) throw InvalidArgument("n_spins must be >= 1");
  NormalStream stream(seed);
  std::vector<double> g(Disorder::pair_count(n_spins));
  for (double& v : g) v = stream.normal();
  return Disorder(n_spins, std::move(g), seed);
}

SpinConfig::SpinConfig(std::vector<int> spins) : spins_(std::move(spins)) {
  for (int s : spins_) {
    if (s != 1 && s != -1) throw InvalidArgument("spin entries must be +1 or -1");
  }
}

SpinConfig SpinConfig::from_code(ConfigCode code, int n_spins) {
  std::vector<int> s(static_cast<std::size_t>(n_spins));
  for (int i = 0; i < n_spins; ++i) s[static_cast<std::size_t>(i)] = spin_of(code, i);
  return SpinConfig(std::move(s));
}

ConfigCode SpinConfig::code() const {
  if (spins_.size() > 32) throw CapacityError("configuration too long for a 32-bit code", size(), 32);
  ConfigCode c = 0;
  for (std::size_t i = 0; i < spins_.size(); ++i) {
    if (spins_[i] > 0) c |= ConfigCode{1} << i;
  }
  return c;
}

SpinConfig SpinConfig::flipped() const {
  std::vector<int> s(spins_);
  for (int& v : s) v = -v;
  return SpinConfig(std::move(s));
}

void SpinConfig::set(int i, int value) {
  if (value != 1 && value != -1) throw InvalidArgument("spin entries must be +1 or -1");
  spins_.at(static_cast<std::size_t>(i)) = value;
}

std::string to_string(WeightProfile profile) {
  switch (profile) {
    case WeightProfile::uniform: return "uniform";
    case WeightProfile::one_hot: return "one-hot";
    case WeightProfile::power_law: return "power-law";
    case WeightProfile::explicit_values: return "explicit";
  }
  return "unknown";
}

WeightProfile parse_weight_profile(const std::string& name) {
  if (name == "uniform") return WeightProfile::uniform;
  if (name == "one-hot") return WeightProfile::one_hot;
  if (name == "power-law") return WeightProfile::power_law;
  if (name == "explicit") return WeightProfile::explicit_values;
  throw InvalidArgument("unknown weight profile '" + name + "'");
}

WeightVector::WeightVector(std::vector<double> weights, WeightProfile profile, double alpha)
    : weights_(std::move(weights)), profile_(profile), alpha_(alpha) {
  for (double t : weights_) max_abs_ = std::max(max_abs_, std::abs(t));
}

WeightVector WeightVector::uniform(int n_spins) {
  if (n_spins < 1) throw InvalidArgument("n_spins must be >= 1");
  const double t = 1.0 / std::sqrt(static_cast<double>(n_spins));
  return WeightVector(std::vector<double>(static_cast<std::size_t>(n_spins), t), WeightProfile::uniform);
}

WeightVector WeightVector::one_hot(int n_spins, int index) {
  if (n_spins < 1 || index < 0 || index >= n_spins) throw InvalidArgument("one-hot index out of range");
  std::vector<double> t(static_cast<std::size_t>(n_spins), 0.0);
  t[static_cast<std::size_t>(index)] = 1.0;
  return WeightVector(std::move(t), WeightProfile::one_hot);
}

WeightVector WeightVector::power_law(int n_spins, double alpha) {
  if (n_spins < 1) throw InvalidArgument("n_spins must be >= 1");
  if (!std::isfinite(alpha)) throw InvalidArgument("power-law exponent must be finite");
  std::vector<double> t(static_cast<std::size_t>(n_spins));
  std::vector<double> sq(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = std::pow(static_cast<double>(i + 1), -alpha);
    sq[i] = t[i] * t[i];
  }
  const double norm = std::sqrt(pairwise_sum(sq));
  for (double& v : t) v /= norm;
  return WeightVector(std::move(t), WeightProfile::power_law, alpha);
}

WeightVector WeightVector::explicit_values(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("explicit weights must be non-empty");
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = values[i] * values[i];
  const double norm_sq = pairwise_sum(sq);
  if (!(std::abs(norm_sq - 1.0) <= kNormTolerance)) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "weights must satisfy sum t_i^2 = 1; computed sum t_i^2 = " << norm_sq;
    throw InvalidArgument(msg.str());
  }
  return WeightVector(std::move(values), WeightProfile::explicit_values);
}

double IsingForm::evaluate(ConfigCode code) const {
  double acc = 0.0;
  std::size_t k = 0;
  for (int i = 0; i < n_spins; ++i) {
    for (int j = i + 1; j < n_spins; ++j, ++k) {
      const bool aligned = (((code >> i) ^ (code >> j)) & 1U) == 0;
      acc += aligned ? pair[k] : -pair[k];
    }
  }
  for (int i = 0; i < n_spins; ++i) {
    acc += ((code >> i) & 1U) ? field[static_cast<std::size_t>(i)] : -field[static_cast<std::size_t>(i)];
  }
  return acc;
}

double IsingForm::evaluate(const SpinConfig& config) const {
  if (config.size() != n_spins) {
    throw DimensionError("configuration has " + std::to_string(config.size()) + " spins, model has " +
                         std::to_string(n_spins));
  }
  double acc = 0.0;
  std::size_t k = 0;
  for (int i = 0; i < n_spins; ++i) {
    for (int j = i + 1; j < n_spins; ++j, ++k) {
      acc += (config[i] == config[j]) ? pair[k] : -pair[k];
    }
  }
  for (int i = 0; i < n_spins; ++i) {
    acc += config[i] > 0 ? field[static_cast<std::size_t>(i)] : -field[static_cast<std::size_t>(i)];
  }
  return acc;
}

IsingForm sk_form(const ModelParams& params, const Disorder& disorder) {
  if (params.n_spins != disorder.n_spins()) {
    throw DimensionError("params.n_spins = " + std::to_string(params.n_spins) + " but disorder has N = " +
                         std::to_string(disorder.n_spins()));
  }
  IsingForm form;
  form.n_spins = params.n_spins;
  const double scale = params.beta / std::sqrt(static_cast<double>(params.n_spins));
  form.pair.resize(disorder.couplings().size());
  for (std::size_t k = 0; k < form.pair.size(); ++k) form.pair[k] = scale * disorder.couplings()[k];
  form.field.assign(static_cast<std::size_t>(params.n_spins), params.h);
  return form;
}

double energy(const ModelParams& params, const Disorder& disorder, const SpinConfig& config) {
  return sk_form(params, disorder).evaluate(config);
}

GibbsTable::GibbsTable(int n_spins, double log_z, std::vector<double> probs, ModelParams params,
                       std::uint64_t disorder_seed)
    : n_spins_(n_spins),
      log_z_(log_z),
      probs_(std::move(probs)),
      params_(params),
      disorder_seed_(disorder_seed) {
  if (probs_.size() != (std::size_t{1} << n_spins_)) throw DimensionError("Gibbs table size must be 2^N");
}

namespace {

GibbsTable build_table(const IsingForm& form, int ceiling, const ModelParams& params, std::uint64_t seed) {
  const int n = form.n_spins;
  if (n > ceiling) {
    throw CapacityError("exact enumeration of N = " + std::to_string(n) + " exceeds the ceiling " +
                            std::to_string(ceiling),
                        n, ceiling);
  }
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> exponent(size);
  double max_e = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < size; ++c) {
    exponent[c] = form.evaluate(static_cast<ConfigCode>(c));
    max_e = std::max(max_e, exponent[c]);
  }
  std::vector<double> weights(size);
  for (std::size_t c = 0; c < size; ++c) weights[c] = std::exp(exponent[c] - max_e);
  const double shifted_z = pairwise_sum(weights);
  const double log_z = max_e + std::log(shifted_z);
  for (double& w : weights) w /= shifted_z;
  return GibbsTable(n, log_z, std::move(weights), params, seed);
}

}  // namespace

GibbsTable gibbs_from_form(const IsingForm& form, int ceiling) {
  ModelParams params;
  params.n_spins = form.n_spins;
  return build_table(form, ceiling, params, 0);
}

GibbsTable exact_gibbs(const ModelParams& params, const Disorder& disorder, int ceiling) {
  return build_table(sk_form(params, disorder), ceiling, params, disorder.seed());
}

double single_replica_expectation(const GibbsTable& table,
                                  const std::function<double(const SpinConfig&)>& observable) {
  std::vector<double> terms(table.size());
  for (std::size_t c = 0; c < table.size(); ++c) {
    const double p = table.prob(static_cast<ConfigCode>(c));
    terms[c] = p == 0.0 ? 0.0 : p * observable(SpinConfig::from_code(static_cast<ConfigCode>(c), table.n_spins()));
  }
  return pairwise_sum(terms);
}

std::vector<double> magnetizations(const GibbsTable& table) {
  const int n = table.n_spins();
  std::vector<double> b(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    std::vector<double> terms(table.size());
    for (std::size_t c = 0; c < table.size(); ++c) {
      terms[c] = spin_of(static_cast<ConfigCode>(c), i) * table.prob(static_cast<ConfigCode>(c));
    }
    b[static_cast<std::size_t>(i)] = pairwise_sum(terms);
  }
  return b;
}

}  // namespace skclt
