#include "skclt/statistics.hpp"

#include <cmath>
#include <vector>

#include "skclt/error.hpp"

namespace skclt {

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate mean_estimate(std::span<const double> values, std::uint64_t seed) {
  Estimate est;
  est.n_samples = static_cast<long>(values.size());
  est.seed = seed;
  if (values.empty()) return est;
  const double n = static_cast<double>(values.size());
  est.value = pairwise_sum(values) / n;
  if (values.size() < 2) return est;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - est.value;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / (n - 1.0);
  est.stderr_ = std::sqrt(var / n);
  return est;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("fit_line needs at least two paired points");
  }
  const double n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n;
  const double my = pairwise_sum(y) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_line: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    rss += r * r;
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
  }
  if (x.size() > 2) fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  return fit;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace skclt
