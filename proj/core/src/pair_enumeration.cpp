#include <cmath>

#include "skclt/error.hpp"
#include "skclt/exact.hpp"

namespace skclt::pair_enumeration {
namespace {

void check_capacity(const GibbsTable& table) {
  if (table.n_spins() > kCeiling) {
    throw CapacityError("pair enumeration is limited to N <= " + std::to_string(kCeiling), table.n_spins(),
                        kCeiling);
  }
}

double overlap_of(ConfigCode a, ConfigCode b, int n) {
  int agree = 0;
  for (int i = 0; i < n; ++i) agree += (((a ^ b) >> i) & 1U) ? -1 : 1;
  return static_cast<double>(agree) / n;
}

}  // namespace

std::vector<double> y_moments(const GibbsTable& table, const WeightVector& weights, int k_max) {
  check_capacity(table);
  const int n = table.n_spins();
  if (weights.size() != n) throw DimensionError("weight vector length differs from N");
  std::vector<double> x(table.size());
  for (std::size_t c = 0; c < table.size(); ++c) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += spin_of(static_cast<ConfigCode>(c), i) * weights[i];
    x[c] = acc;
  }
  std::vector<double> out(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (std::size_t a = 0; a < table.size(); ++a) {
    for (std::size_t b = 0; b < table.size(); ++b) {
      const double p = table.prob(static_cast<ConfigCode>(a)) * table.prob(static_cast<ConfigCode>(b));
      const double y = x[a] - x[b];
      double pw = p;
      for (int k = 0; k <= k_max; ++k) {
        out[static_cast<std::size_t>(k)] += pw;
        pw *= y;
      }
    }
  }
  return out;
}

double overlap_moment(const GibbsTable& table, int m) {
  check_capacity(table);
  const int n = table.n_spins();
  double acc = 0.0;
  for (std::size_t a = 0; a < table.size(); ++a) {
    for (std::size_t b = 0; b < table.size(); ++b) {
      const double p = table.prob(static_cast<ConfigCode>(a)) * table.prob(static_cast<ConfigCode>(b));
      acc += p * std::pow(overlap_of(static_cast<ConfigCode>(a), static_cast<ConfigCode>(b), n), m);
    }
  }
  return acc;
}

double centered_overlap_moment(const GibbsTable& table, double q, int order) {
  check_capacity(table);
  const int n = table.n_spins();
  double acc = 0.0;
  for (std::size_t a = 0; a < table.size(); ++a) {
    for (std::size_t b = 0; b < table.size(); ++b) {
      const double p = table.prob(static_cast<ConfigCode>(a)) * table.prob(static_cast<ConfigCode>(b));
      acc += p * std::pow(overlap_of(static_cast<ConfigCode>(a), static_cast<ConfigCode>(b), n) - q, order);
    }
  }
  return acc;
}

TSecondMoments t_second_moments(const GibbsTable& table) {
  check_capacity(table);
  const int n = table.n_spins();
  const auto b = magnetizations(table);
  std::vector<SpinConfig> configs;
  configs.reserve(table.size());
  for (std::size_t c = 0; c < table.size(); ++c) configs.push_back(SpinConfig::from_code(static_cast<ConfigCode>(c), n));
  TSecondMoments out;
  for (std::size_t a = 0; a < table.size(); ++a) {
    const auto& first = configs[a];
    const double pa = table.prob(static_cast<ConfigCode>(a));
    double t1 = 0.0;
    for (int i = 0; i < n; ++i) t1 += (first[i] - b[static_cast<std::size_t>(i)]) * b[static_cast<std::size_t>(i)];
    t1 /= n;
    out.t1_sq += pa * t1 * t1;
    for (std::size_t c = 0; c < table.size(); ++c) {
      const auto& second = configs[c];
      double t12 = 0.0;
      for (int i = 0; i < n; ++i) {
        t12 += (first[i] - b[static_cast<std::size_t>(i)]) * (second[i] - b[static_cast<std::size_t>(i)]);
      }
      t12 /= n;
      out.t12_sq += pa * table.prob(static_cast<ConfigCode>(c)) * t12 * t12;
    }
  }
  return out;
}

}  // namespace skclt::pair_enumeration
