#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace skclt {

// Default inverse-temperature ceiling for CLT experiments. The high
// temperature threshold is not known numerically; this is a conservative
// choice that callers may override.
inline constexpr double kDefaultHighTempCeiling = 0.25;

// Largest N for which a Gibbs table (2^N probabilities) is built.
inline constexpr int kEnumerationCeiling = 20;

struct ModelParams {
  double beta = 0.0;
  double h = 0.0;
  int n_spins = 1;

  // Throws InvalidArgument. beta = 0 is accepted as the independent-spin
  // limit used by the analytic anchors.
  void validate(double beta_ceiling = std::numeric_limits<double>::infinity()) const;
};

// Quenched couplings g_ij, 0 <= i < j < N, stored row-major over the strict
// upper triangle.
class Disorder {
 public:
  Disorder() = default;
  Disorder(int n_spins, std::vector<double> couplings, std::uint64_t seed = 0);

  int n_spins() const noexcept { return n_spins_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const double> couplings() const noexcept { return couplings_; }

  // g_ij for i != j (symmetric access).
  double coupling(int i, int j) const;

  static std::size_t pair_count(int n) { return static_cast<std::size_t>(n) * (n - 1) / 2; }
  static std::size_t pair_index(int n, int i, int j);

  // g -> -g; used for antithetic sampling.
  Disorder negated() const;

 private:
  int n_spins_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> couplings_;
};

// N(N-1)/2 i.i.d. standard normals from NormalStream(seed), drawn in
// pair_index order.
Disorder sample_disorder(std::uint64_t seed, int n_spins);

// Configuration code c in [0, 2^N): bit i is set iff sigma_i = +1.
using ConfigCode = std::uint32_t;

inline int spin_of(ConfigCode code, int i) noexcept { return ((code >> i) & 1U) ? 1 : -1; }

class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(std::vector<int> spins);

  static SpinConfig from_code(ConfigCode code, int n_spins);

  int size() const noexcept { return static_cast<int>(spins_.size()); }
  int operator[](int i) const { return spins_[static_cast<std::size_t>(i)]; }
  std::span<const int> spins() const noexcept { return spins_; }
  ConfigCode code() const;
  SpinConfig flipped() const;

  void set(int i, int value);

 private:
  std::vector<int> spins_;
};

enum class WeightProfile { uniform, one_hot, power_law, explicit_values };

std::string to_string(WeightProfile profile);
WeightProfile parse_weight_profile(const std::string& name);

// Unit-norm coefficient vector (t_1, ..., t_N).
class WeightVector {
 public:
  static constexpr double kNormTolerance = 1e-12;

  static WeightVector uniform(int n_spins);
  static WeightVector one_hot(int n_spins, int index = 0);
  // t_i proportional to i^-alpha (1-based), normalized.
  static WeightVector power_law(int n_spins, double alpha);
  // Rejects vectors whose squared norm is off by more than kNormTolerance;
  // the message names the computed squared norm.
  static WeightVector explicit_values(std::vector<double> values);

  int size() const noexcept { return static_cast<int>(weights_.size()); }
  double operator[](int i) const { return weights_[static_cast<std::size_t>(i)]; }
  std::span<const double> values() const noexcept { return weights_; }
  double max_abs() const noexcept { return max_abs_; }
  WeightProfile profile() const noexcept { return profile_; }
  double alpha() const noexcept { return alpha_; }

 private:
  WeightVector(std::vector<double> weights, WeightProfile profile, double alpha = 0.0);

  std::vector<double> weights_;
  WeightProfile profile_ = WeightProfile::uniform;
  double alpha_ = 0.0;
  double max_abs_ = 0.0;
};

// Quadratic spin form  sum_{i<j} J_ij s_i s_j + sum_i f_i s_i.
// Both the SK Hamiltonian and the interpolating Hamiltonians reduce to this
// form; the value is the exponent of the Gibbs weight (i.e. -H).
struct IsingForm {
  int n_spins = 0;
  std::vector<double> pair;   // J_ij in Disorder::pair_index order
  std::vector<double> field;  // f_i

  double evaluate(ConfigCode code) const;
  double evaluate(const SpinConfig& config) const;
};

// J_ij = (beta / sqrt(N)) g_ij, f_i = h.
IsingForm sk_form(const ModelParams& params, const Disorder& disorder);

// -H_N(sigma); the exponent of the Gibbs weight.
double energy(const ModelParams& params, const Disorder& disorder, const SpinConfig& config);

// Exact Gibbs measure for small N, indexed by configuration code.
class GibbsTable {
 public:
  GibbsTable(int n_spins, double log_z, std::vector<double> probs, ModelParams params = {},
             std::uint64_t disorder_seed = 0);

  int n_spins() const noexcept { return n_spins_; }
  double log_z() const noexcept { return log_z_; }
  std::span<const double> probs() const noexcept { return probs_; }
  double prob(ConfigCode code) const { return probs_[code]; }
  std::size_t size() const noexcept { return probs_.size(); }
  const ModelParams& params() const noexcept { return params_; }
  std::uint64_t disorder_seed() const noexcept { return disorder_seed_; }

 private:
  int n_spins_;
  double log_z_;
  std::vector<double> probs_;
  ModelParams params_;
  std::uint64_t disorder_seed_;
};

// Builds the table of exp(form) normalized with a max-shifted log-sum-exp.
GibbsTable gibbs_from_form(const IsingForm& form, int ceiling = kEnumerationCeiling);

GibbsTable exact_gibbs(const ModelParams& params, const Disorder& disorder,
                       int ceiling = kEnumerationCeiling);

double single_replica_expectation(const GibbsTable& table,
                                  const std::function<double(const SpinConfig&)>& observable);

// <sigma_i> for every i.
std::vector<double> magnetizations(const GibbsTable& table);

}  // namespace skclt
