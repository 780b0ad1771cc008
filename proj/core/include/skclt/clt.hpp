#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skclt/disorder_stats.hpp"
#include "skclt/exact.hpp"
#include "skclt/model.hpp"
#include "skclt/statistics.hpp"

namespace skclt {

// a(l) = E g^l for a standard normal g: a(0) = 1, a(1) = 0, a(l) = (l-1) a(l-2).
double gaussian_moment(int l);

struct GaussianMoments {
  std::vector<double> a;

  explicit GaussianMoments(int l_max);
  double operator()(int l) const { return a.at(static_cast<std::size_t>(l)); }
  // prod_l a(k_l)
  double product(const ReplicaSpec& spec) const;
};

// Where the disorder average sits on the Gaussian side:
//   power_inside:  prod a(k_l) * E[<S_1^2>^{k/2}]
//   power_outside: prod a(k_l) * (E<S_1^2>)^{k/2}
enum class RhsReading { power_inside, power_outside };

std::string to_string(RhsReading reading);
RhsReading parse_rhs_reading(const std::string& name);

struct CltReport {
  ReplicaSpec spec;
  int n_spins = 0;
  WeightProfile profile = WeightProfile::uniform;
  RhsReading reading = RhsReading::power_inside;
  Engine engine = Engine::exact;
  long n_disorders = 0;
  std::uint64_t base_seed = 0;
  double max_t = 0.0;
  Estimate lhs;    // E <prod S_l^{k_l}>
  Estimate rhs;    // Gaussian side under `reading`
  Estimate delta;  // |lhs - rhs|; paired over shared disorders
  double rhs_alternate = 0.0;  // Gaussian side under the other reading
  bool short_circuit = false;  // some k_l odd

  double ratio() const { return max_t > 0.0 ? delta.value / max_t : 0.0; }
};

CltReport clt_discrepancy(const ReplicaSpec& spec, const ModelParams& params, const WeightVector& weights,
                          const DisorderPlan& plan, RhsReading reading = RhsReading::power_inside);

// E (<prod S_l^{k_l}> - prod a(k_l) <S_1^2>^{k/2})^2
Estimate clt2_discrepancy(const ReplicaSpec& spec, const ModelParams& params, const WeightVector& weights,
                          const DisorderPlan& plan);

struct SweepRow {
  CltReport report;
  double reading_difference = 0.0;  // rhs - rhs_alternate
};

struct SweepTable {
  std::vector<SweepRow> rows;
  // log delta against log max|t_i|; NaN when max|t_i| does not vary or some
  // delta is zero.
  LinearFit fit;
  bool fit_valid = false;
};

WeightVector make_weights(WeightProfile profile, int n_spins, double alpha = 1.0);

SweepTable scaling_sweep(const ReplicaSpec& spec, double beta, double h, std::span<const int> n_list,
                         WeightProfile profile, const DisorderPlan& plan, double alpha = 1.0,
                         RhsReading reading = RhsReading::power_inside);

// Exact engine ceiling for the Y law.
inline constexpr int kYLawCeiling = 13;
inline constexpr std::size_t kYAtomCeiling = std::size_t{1} << 22;

struct YDiagnostics {
  Engine engine = Engine::exact;
  int n_spins = 0;
  double y2 = 0.0;
  double y4 = 0.0;
  double excess_kurtosis = 0.0;  // <Y^4>/<Y^2>^2 - 3
  double ks_distance = 0.0;      // against Normal(0, <Y^2>) of the same disorder
  std::vector<double> atoms;     // exact engine: support of Y, ascending
  std::vector<double> masses;
  long n_samples = 0;            // mcmc engine
};

YDiagnostics y_distribution_diagnostics(const ModelParams& params, const WeightVector& weights, const Disorder& disorder,
                                        Engine engine = Engine::exact, const McmcSettings& mcmc = {},
                                        std::uint64_t seed = 1);

}  // namespace skclt
