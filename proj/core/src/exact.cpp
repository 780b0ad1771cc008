#include "skclt/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "skclt/error.hpp"
#include "skclt/statistics.hpp"

namespace skclt {
namespace {

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

void check_moment_order(int k_max) {
  if (k_max < 0) throw InvalidArgument("moment order must be >= 0");
}

void check_overlap_order(int m) {
  if (m < 1 || m > kMaxOverlapOrder) {
    throw InvalidArgument("overlap moment order " + std::to_string(m) + " outside the supported 1.." +
                          std::to_string(kMaxOverlapOrder));
  }
}

// Sum over ordered index tuples of corr[xor of the tuple]^2.
double overlap_tuple_sum(std::span<const double> corr, int n, int depth, ConfigCode mask) {
  if (depth == 0) return corr[mask] * corr[mask];
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += overlap_tuple_sum(corr, n, depth - 1, mask ^ (ConfigCode{1} << i));
  return acc;
}

}  // namespace

std::vector<double> correlators(const GibbsTable& table) {
  std::vector<double> w(table.probs().begin(), table.probs().end());
  const std::size_t size = w.size();
  for (std::size_t len = 1; len < size; len <<= 1) {
    for (std::size_t block = 0; block < size; block += 2 * len) {
      for (std::size_t j = block; j < block + len; ++j) {
        const double u = w[j];
        const double v = w[j + len];
        w[j] = u + v;
        w[j + len] = u - v;
      }
    }
  }
  for (std::size_t a = 0; a < size; ++a) {
    if (std::popcount(a) & 1) w[a] = -w[a];
  }
  return w;
}

MomentVector x_moments(const GibbsTable& table, const WeightVector& weights, int k_max) {
  check_moment_order(k_max);
  const int n = table.n_spins();
  if (weights.size() != n) throw DimensionError("weight vector length differs from N");
  const std::size_t size = table.size();
  std::vector<double> x(size);
  for (std::size_t c = 0; c < size; ++c) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += spin_of(static_cast<ConfigCode>(c), i) * weights[i];
    x[c] = acc;
  }
  const auto probs = table.probs();
  MomentVector out;
  out.k_max = k_max;
  out.raw.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  out.central.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  out.raw[0] = 1.0;
  out.central[0] = 1.0;
  if (k_max == 0) return out;

  std::vector<double> terms(size);
  for (std::size_t c = 0; c < size; ++c) terms[c] = probs[c] * x[c];
  const double mean = pairwise_sum(terms);
  out.raw[1] = mean;
  out.central[1] = 0.0;

  std::vector<double> raw_acc(static_cast<std::size_t>(k_max) + 1, 0.0);
  std::vector<double> central_acc(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (std::size_t c = 0; c < size; ++c) {
    const double p = probs[c];
    double pr = p * x[c];
    double pc = p * (x[c] - mean);
    for (int m = 2; m <= k_max; ++m) {
      pr *= x[c];
      pc *= x[c] - mean;
      raw_acc[static_cast<std::size_t>(m)] += pr;
      central_acc[static_cast<std::size_t>(m)] += pc;
    }
  }
  for (int m = 2; m <= k_max; ++m) {
    out.raw[static_cast<std::size_t>(m)] = raw_acc[static_cast<std::size_t>(m)];
    out.central[static_cast<std::size_t>(m)] = central_acc[static_cast<std::size_t>(m)];
  }
  return out;
}

std::vector<double> y_moments(const MomentVector& x, int k_max) {
  check_moment_order(k_max);
  if (k_max > x.k_max) {
    throw InvalidArgument("y_moments needs X moments through order " + std::to_string(k_max) + ", have " +
                          std::to_string(x.k_max));
  }
  const auto& mu = x.central;
  std::vector<double> y(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (int k = 0; k <= k_max; ++k) {
    double acc = 0.0;
    for (int j = 0; 2 * j <= k; ++j) {
      const double c = binomial(k, j);
      const double lead = mu[static_cast<std::size_t>(k - j)] * mu[static_cast<std::size_t>(j)];
      const double sign = (j & 1) ? -1.0 : 1.0;
      if (2 * j == k) {
        acc += sign * c * lead;
      } else {
        // mirrored term j' = k - j carries sign (-1)^{k-j}
        const double mirror_sign = ((k - j) & 1) ? -1.0 : 1.0;
        acc += c * (sign * lead + mirror_sign * lead);
      }
    }
    y[static_cast<std::size_t>(k)] = acc;
  }
  return y;
}

int ReplicaSpec::total() const {
  int k = 0;
  for (int e : exponents) k += e;
  return k;
}

bool ReplicaSpec::has_odd() const {
  return std::any_of(exponents.begin(), exponents.end(), [](int e) { return e % 2 != 0; });
}

int ReplicaSpec::max_exponent() const {
  return exponents.empty() ? 0 : *std::max_element(exponents.begin(), exponents.end());
}

std::string ReplicaSpec::label() const {
  std::string out;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(exponents[i]);
  }
  return out;
}

ReplicaSpec ReplicaSpec::parse(const std::string& text) {
  ReplicaSpec spec;
  std::string item;
  auto flush = [&]() {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw InvalidArgument("empty entry in replica spec '" + text + "'");
    const std::string token = item.substr(first, last - first + 1);
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || value < 0) throw InvalidArgument("replica spec entries must be integers >= 0");
    spec.exponents.push_back(value);
    item.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ';') {
      flush();
    } else {
      item += ch;
    }
  }
  flush();
  return spec;
}

double replica_product(std::span<const double> y, const ReplicaSpec& spec) {
  if (spec.exponents.empty()) throw InvalidArgument("replica spec needs n >= 1");
  if (static_cast<int>(y.size()) <= spec.max_exponent()) {
    throw InvalidArgument("Y moments do not cover exponent " + std::to_string(spec.max_exponent()));
  }
  double prod = 1.0;
  for (int e : spec.exponents) prod *= y[static_cast<std::size_t>(e)];
  return prod;
}

double overlap_moment(std::span<const double> corr, int n_spins, int m) {
  check_overlap_order(m);
  if (corr.size() != (std::size_t{1} << n_spins)) throw DimensionError("correlator table size must be 2^N");
  return overlap_tuple_sum(corr, n_spins, m, 0) / std::pow(static_cast<double>(n_spins), m);
}

double overlap_moment(const GibbsTable& table, int m) {
  check_overlap_order(m);
  const auto corr = correlators(table);
  return overlap_moment(corr, table.n_spins(), m);
}

std::vector<double> overlap_moments(std::span<const double> corr, int n_spins, int m_max) {
  std::vector<double> out(static_cast<std::size_t>(m_max) + 1, 1.0);
  for (int m = 1; m <= m_max; ++m) out[static_cast<std::size_t>(m)] = overlap_moment(corr, n_spins, m);
  return out;
}

std::vector<double> overlap_distribution(const GibbsTable& table) {
  const int n = table.n_spins();
  std::vector<double> w(table.probs().begin(), table.probs().end());
  const std::size_t size = w.size();
  auto transform = [&]() {
    for (std::size_t len = 1; len < size; len <<= 1) {
      for (std::size_t block = 0; block < size; block += 2 * len) {
        for (std::size_t j = block; j < block + len; ++j) {
          const double u = w[j];
          const double v = w[j + len];
          w[j] = u + v;
          w[j + len] = u - v;
        }
      }
    }
  };
  transform();
  for (double& v : w) v *= v;
  transform();
  std::vector<double> law(static_cast<std::size_t>(n) + 1, 0.0);
  const double inv = 1.0 / static_cast<double>(size);
  for (std::size_t x = 0; x < size; ++x) {
    // x marks the sites where the replicas disagree
    law[static_cast<std::size_t>(n - std::popcount(x))] += w[x] * inv;
  }
  return law;
}

double overlap_law_moment(std::span<const double> law, double q, int m) {
  if (m < 0) throw InvalidArgument("negative overlap moment order");
  const int n = static_cast<int>(law.size()) - 1;
  double acc = 0.0;
  for (int a = 0; a <= n; ++a) {
    const double r = (2.0 * a - n) / n;
    acc += law[static_cast<std::size_t>(a)] * std::pow(r - q, m);
  }
  return acc;
}

double centered_overlap_moment(std::span<const double> moments, double q, int order) {
  if (order < 2 || order % 2 != 0 || order > kMaxOverlapOrder) {
    throw InvalidArgument("centered overlap moments need an even order <= 4");
  }
  if (static_cast<int>(moments.size()) <= order) throw InvalidArgument("overlap moments do not reach the order");
  double acc = 0.0;
  for (int j = 0; j <= order; ++j) {
    acc += binomial(order, j) * std::pow(-q, order - j) * moments[static_cast<std::size_t>(j)];
  }
  return acc;
}

double centered_overlap_moment(const GibbsTable& table, double q, int order) {
  if (order < 2 || order % 2 != 0 || order > kMaxOverlapOrder) {
    throw InvalidArgument("centered overlap moments need an even order <= 4");
  }
  const auto corr = correlators(table);
  return centered_overlap_moment(overlap_moments(corr, table.n_spins(), order), q, order);
}

TDecomposition t_decompose(std::span<const double> b, double q, const SpinConfig& first, const SpinConfig& second) {
  const int n = static_cast<int>(b.size());
  if (first.size() != n || second.size() != n) throw DimensionError("replica pair does not match N");
  double t12 = 0.0, t1 = 0.0, t2 = 0.0, bb = 0.0, r = 0.0;
  for (int i = 0; i < n; ++i) {
    const double bi = b[static_cast<std::size_t>(i)];
    const double d1 = first[i] - bi;
    const double d2 = second[i] - bi;
    t12 += d1 * d2;
    t1 += d1 * bi;
    t2 += d2 * bi;
    bb += bi * bi;
    r += first[i] * second[i];
  }
  const double inv_n = 1.0 / n;
  return TDecomposition{t12 * inv_n, t1 * inv_n, t2 * inv_n, bb * inv_n - q, r * inv_n};
}

double t_decomposition_residual(const GibbsTable& table, double q, const SpinConfig& first,
                                const SpinConfig& second) {
  const auto b = magnetizations(table);
  const TDecomposition d = t_decompose(b, q, first, second);
  return std::abs((d.overlap - q) - (d.t12 + d.t1 + d.t2 + d.t));
}

TSecondMoments t_second_moments(const GibbsTable& table) {
  const int n = table.n_spins();
  const auto corr = correlators(table);
  std::vector<double> b(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = corr[ConfigCode{1} << i];
  double sq = 0.0, mixed = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double sisj = (i == j) ? 1.0 : corr[(ConfigCode{1} << i) | (ConfigCode{1} << j)];
      const double cov = sisj - b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
      sq += cov * cov;
      mixed += cov * b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    }
  }
  const double n2 = static_cast<double>(n) * n;
  return TSecondMoments{sq / n2, mixed / n2};
}

ReplicaPolynomial second_order_observable(const WeightVector& weights, double q, std::pair<int, int> first,
                                          std::pair<int, int> second, int arity) {
  const int n = weights.size();
  const auto shifted = [&](std::pair<int, int> p) {
    return ReplicaPolynomial::overlap(n, arity, p.first, p.second, n) -
           ReplicaPolynomial::constant(n, arity, q);
  };
  const auto s1 = ReplicaPolynomial::weighted_difference(weights, arity, 0, 1);
  return shifted(first) * shifted(second) * (s1 * s1);
}

}  // namespace skclt
