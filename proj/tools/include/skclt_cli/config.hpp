#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skclt/clt.hpp"
#include "skclt/disorder_stats.hpp"
#include "skclt/interpolation.hpp"
#include "skclt/model.hpp"

namespace skclt::cli {

// Flat key = value experiment description.
//
//   # comment
//   N_list = 8, 10, 12
//   beta = 0.2
//   spec = 4          (repeatable)
//   spec = 2;2
//
// Lists are comma separated. Every key except `spec` may appear once.
// Unknown keys and all other problems are collected and reported together.
struct ExperimentConfig {
  int n = 0;                  // 0 = unset
  std::vector<int> n_list;
  double beta = 0.0;
  double h = 0.0;
  double beta_ceiling = kDefaultHighTempCeiling;
  WeightProfile profile = WeightProfile::uniform;
  double alpha = 1.0;
  std::vector<double> weights;  // profile = explicit
  Engine engine = Engine::exact;
  long m = 200;
  std::uint64_t seed = 1;
  int jobs = 1;
  long sweeps = 11000;
  long burn_in = 1000;
  long thin = 1;
  int batches = 20;
  UpdateRule rule = UpdateRule::heat_bath;
  std::vector<std::string> specs;  // empty means "4"
  RhsReading rhs = RhsReading::power_inside;
  CavityPath path = CavityPath::one;
  std::vector<std::string> observables;  // empty means the whole catalog
  std::vector<double> t_grid;            // empty means 0.1, ..., 0.9
  ExpectationPlan::Kind plan = ExpectationPlan::Kind::quadrature;
  int nodes = 16;
  std::string csv;
  std::string json;

  bool operator==(const ExperimentConfig&) const = default;

  // N_list if given, else {N}; empty when neither is set.
  std::vector<int> sizes() const;
  std::vector<ReplicaSpec> replica_specs() const;
  std::vector<double> t_values() const;
  WeightVector weights_for(int n_spins) const;
  DisorderPlan disorder_plan() const;
  ExpectationPlan expectation_plan() const;
};

// Throws ConfigError listing every violation.
ExperimentConfig parse_config(const std::string& text);

// Canonical text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

std::string format_double(double value);

ExpectationPlan::Kind parse_plan_kind(const std::string& name);

}  // namespace skclt::cli
