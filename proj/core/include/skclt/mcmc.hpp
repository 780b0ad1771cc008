#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skclt/model.hpp"
#include "skclt/random.hpp"
#include "skclt/statistics.hpp"

namespace skclt {

enum class UpdateRule { heat_bath, metropolis };

std::string to_string(UpdateRule rule);
UpdateRule parse_update_rule(const std::string& name);

// Dense symmetric coupling matrix for O(N) local-field updates.
struct DenseModel {
  int n_spins = 0;
  std::vector<double> coupling;  // n x n, zero diagonal
  std::vector<double> field;

  explicit DenseModel(const IsingForm& form);
  double at(int i, int j) const { return coupling[static_cast<std::size_t>(i) * n_spins + j]; }
};

// One Markov chain: configuration, cached local fields
// sum_j J_ij sigma_j + f_i, sweep counter and generator state.
class ChainState {
 public:
  // Fields are recomputed from scratch every `check_interval` sweeps.
  static constexpr long kCheckInterval = 64;
  static constexpr double kCacheTolerance = 1e-9;
  static constexpr double kIntegrityTolerance = 1e-6;

  ChainState(const DenseModel& model, std::uint64_t seed);
  ChainState(const DenseModel& model, std::vector<int> spins, std::uint64_t seed);

  int n_spins() const noexcept { return static_cast<int>(spins_.size()); }
  const std::vector<int>& spins() const noexcept { return spins_; }
  const std::vector<double>& fields() const noexcept { return fields_; }
  long sweeps() const noexcept { return sweeps_; }

  // Largest |cached - recomputed| local field.
  double cache_error(const DenseModel& model) const;
  // Throws IntegrityError beyond kIntegrityTolerance, then resynchronizes.
  void verify_and_refresh(const DenseModel& model);

  friend void glauber_sweep(ChainState& state, const DenseModel& model, UpdateRule rule);

 private:
  std::vector<double> recompute(const DenseModel& model) const;

  std::vector<int> spins_;
  std::vector<double> fields_;
  long sweeps_ = 0;
  NormalStream rng_;
};

// N single-site updates in fixed order 0..N-1. Heat bath draws sigma_i from
// its conditional Gibbs law; Metropolis proposes the flip.
void glauber_sweep(ChainState& state, const DenseModel& model, UpdateRule rule = UpdateRule::heat_bath);

// Row-stochastic 2^N x 2^N kernel of one single-site update (N <= 10).
std::vector<double> single_site_kernel(const IsingForm& form, int site, UpdateRule rule);

struct McmcSchedule {
  long sweeps = 11000;
  long burn_in = 1000;
  long thin = 1;  // sweeps between measurements

  void validate() const;
  long measurements() const { return (sweeps - burn_in) / thin; }
};

struct SampleSeries {
  std::vector<long> sweep;
  std::vector<double> values;
  long burn_in = 0;
  long thin = 1;
};

struct ReplicaPairSeries {
  SampleSeries x;        // X of the first chain
  SampleSeries x_other;  // X of the second chain
  SampleSeries y;        // X(chain 1) - X(chain 2)
  SampleSeries overlap;  // R_{1,2}
};

// Two independent chains on the same disorder with seeds
// derive_seed(seed, 0) and derive_seed(seed, 1).
ReplicaPairSeries run_replica_pair(const ModelParams& params, const Disorder& disorder, const WeightVector& weights,
                                   const McmcSchedule& schedule, std::uint64_t seed,
                                   UpdateRule rule = UpdateRule::heat_bath);

struct BatchMeans {
  Estimate estimate;
  // stderr with batches twice as long, divided by the stderr at n_batches.
  // Near 1 on a well-mixed series; well above 1 flags unresolved correlation.
  double stability_ratio = 1.0;
  long batch_length = 0;
};

// Requires n_batches >= 8 and at least two values per batch; trailing values
// that do not fill a batch are dropped.
BatchMeans batch_means(const std::vector<double>& series, int n_batches);

}  // namespace skclt
