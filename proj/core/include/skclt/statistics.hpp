#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace skclt {

// Universal return shape of every Monte Carlo style computation.
// Deterministic computations report stderr = 0.
struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
};

// Fixed-order pairwise summation. The result depends only on the order of
// the input, never on how it was produced.
double pairwise_sum(std::span<const double> values);

// Sample mean with stderr = sample-std / sqrt(n). n = 1 gives stderr 0.
Estimate mean_estimate(std::span<const double> values, std::uint64_t seed = 0);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double max_abs_residual = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace skclt
