#pragma once

// Brute-force reference computations shared by the unit and acceptance
// tests. Everything here is written directly from the definitions, with no
// transforms or factorization tricks, so it can be used to check the fast
// paths in the library.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "skclt/model.hpp"

namespace oracle {

inline double x_of(const skclt::WeightVector& w, skclt::ConfigCode c) {
  double x = 0.0;
  for (int i = 0; i < w.size(); ++i) x += w[i] * skclt::spin_of(c, i);
  return x;
}

// Direct table: p(c) = exp(-H(c)) / Z via energy() on explicit configs.
inline std::vector<double> gibbs_probs(const skclt::ModelParams& p, const skclt::Disorder& d) {
  const std::size_t size = std::size_t{1} << p.n_spins;
  std::vector<double> e(size);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < size; ++c) {
    e[c] = skclt::energy(p, d, skclt::SpinConfig::from_code(static_cast<skclt::ConfigCode>(c), p.n_spins));
    top = std::max(top, e[c]);
  }
  double z = 0.0;
  for (auto& v : e) z += (v = std::exp(v - top));
  for (auto& v : e) v /= z;
  return e;
}

// <S_1^{k1} S_2^{k2}> by summing over all 16^N four-replica tuples.
inline double four_replica_product(const std::vector<double>& probs, const skclt::WeightVector& w, int k1, int k2) {
  const std::size_t size = probs.size();
  std::vector<double> xs(size);
  for (std::size_t c = 0; c < size; ++c) xs[c] = x_of(w, static_cast<skclt::ConfigCode>(c));
  double acc = 0.0;
  for (std::size_t a = 0; a < size; ++a)
    for (std::size_t b = 0; b < size; ++b) {
      const double pab = probs[a] * probs[b];
      const double s1 = std::pow(xs[a] - xs[b], k1);
      for (std::size_t c = 0; c < size; ++c)
        for (std::size_t d = 0; d < size; ++d) {
          acc += pab * probs[c] * probs[d] * s1 * std::pow(xs[c] - xs[d], k2);
        }
    }
  return acc;
}

// <f(sigma^1, sigma^2)> over all 4^N pairs.
template <class F>
double pair_sum(const std::vector<double>& probs, F f) {
  double acc = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a)
    for (std::size_t b = 0; b < probs.size(); ++b) {
      acc += probs[a] * probs[b] * f(static_cast<skclt::ConfigCode>(a), static_cast<skclt::ConfigCode>(b));
    }
  return acc;
}

inline double overlap(skclt::ConfigCode a, skclt::ConfigCode b, int n) {
  double r = 0.0;
  for (int i = 0; i < n; ++i) r += skclt::spin_of(a, i) * skclt::spin_of(b, i);
  return r / n;
}

// Phi(q) = E th^2(beta z sqrt(q) + h) by adaptive Gauss-Kronrod on the real
// line against the normal density.
inline double q_map_adaptive(double beta, double h, double q) {
  const double norm = 1.0 / std::sqrt(2.0 * M_PI);
  auto f = [&](double z) {
    const double t = std::tanh(beta * z * std::sqrt(q) + h);
    return norm * std::exp(-0.5 * z * z) * t * t;
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 15, 1e-15);
}

// Root of Phi(q) - q on [0, 1] by bisection; Phi(0) - 0 >= 0 and Phi(1) - 1 < 0.
inline double q_bisection(double beta, double h) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (q_map_adaptive(beta, h, mid) - mid > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
